#pragma once

#include "augsc/types.hpp"

#include <cstdint>
#include <vector>

namespace augsc {

// Folds the augmented coefficient matrix back onto original samples:
// out(i, j) = sum over k in omega[i] of |ctilde(k, j)|.
Matrix collapse(const Matrix& ctilde, const std::vector<std::vector<int>>& omega);

struct ClusteringResult {
  std::vector<int> labels;
  Matrix embedding;              // row-normalized eigenvector block
  std::vector<int> zero_degree;  // nodes with no affinity mass
  double inertia = 0.0;
  int best_restart = -1;
};

// Normalized spectral clustering: symmetric normalized Laplacian, the p
// eigenvectors of smallest eigenvalue, row renormalization, then seeded
// k-means++ with `restarts` restarts keeping the lowest inertia. The same
// (af, p, seed) triple reproduces labels exactly.
ClusteringResult spectral_cluster(const Matrix& af, int p, std::uint64_t seed, int restarts = 20);

// Lloyd iterations with k-means++ seeding; rows of `points` are samples.
// Deterministic given the seed; distance ties go to the smaller center index.
struct KmeansResult {
  std::vector<int> labels;
  Matrix centers;
  double inertia = 0.0;
};
KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter = 100);

}  // namespace augsc
