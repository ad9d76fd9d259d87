#pragma once

#include "augsc/types.hpp"

#include <vector>

namespace augsc {

// The geometric diagnostics enumerate polytope vertices by brute force, so
// they refuse inputs beyond this size.
inline constexpr int kGeometryMaxDim = 4;
inline constexpr int kGeometryMaxPoints = 15;

// Vertices of {w : points' w <= 1}, additionally >= -1 per row when
// symmetric. Points are columns; they must span the space.
std::vector<Vector> polar_vertices(const Matrix& points, bool symmetric);

struct DualPoint {
  Vector w;
  double objective = 0.0;
};

// Maximizes a'w over {w : ||cols' w||_inf <= 1} and among maximizers returns
// the one of least euclidean norm. Directions of a outside span(cols) make
// the program unbounded.
DualPoint dual_point(const Matrix& cols, const Vector& a);

// How strongly sample j's dual direction correlates with samples of other
// clusters: max_i |x_i' v| over i outside j's cluster, v the normalized dual
// direction of representing x_j from its own cluster.
double subspace_incoherence(const DataMatrix& x, const std::vector<int>& labels, int j);

// Radius of the largest origin-centered ball inside the convex hull of the
// given points (symmetric: of the points and their negatives). Equals the
// reciprocal of the farthest polar vertex.
double inradius(const Matrix& points, bool symmetric);

struct PreservingCheck {
  double incoherence = 0.0;
  double inradius = 0.0;
  bool satisfied = false;
};

// Sufficient condition for column j to be represented only by its own
// cluster: incoherence strictly below the in-subspace inradius of the other
// same-cluster samples.
PreservingCheck check_preserving_condition(const DataMatrix& x, const std::vector<int>& labels,
                                           int j);

}  // namespace augsc
