#include "augsc/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace augsc {

namespace {

// Advances a strictly increasing index tuple; returns false past the last one.
bool next_combination(std::vector<int>& idx, int m) {
  const int k = static_cast<int>(idx.size());
  for (int pos = k - 1; pos >= 0; --pos) {
    if (idx[pos] < m - k + pos) {
      ++idx[pos];
      for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
      return true;
    }
  }
  return false;
}

void check_desk_scale(int d, int m) {
  if (d > kGeometryMaxDim)
    throw Error(Errc::DeskScaleExceeded,
                "geometry diagnostics support dimension <= " + std::to_string(kGeometryMaxDim) +
                    ", got " + std::to_string(d));
  if (m > kGeometryMaxPoints)
    throw Error(Errc::DeskScaleExceeded,
                "geometry diagnostics support <= " + std::to_string(kGeometryMaxPoints) +
                    " points, got " + std::to_string(m));
}

int numeric_rank(const Matrix& a, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

// A one-sided polytope {w : points' w <= 1} is bounded iff no direction u
// satisfies points' u <= 0. Candidate extreme rays live in kernels of
// (d - 1)-subsets of the points.
void require_bounded_one_sided(const Matrix& points) {
  const int d = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  std::vector<Vector> candidates;
  if (d == 1) {
    candidates.emplace_back(Vector::Ones(1));
  } else {
    std::vector<int> idx(d - 1);
    for (int i = 0; i < d - 1; ++i) idx[i] = i;
    do {
      Matrix sub(d - 1, d);
      for (int r = 0; r < d - 1; ++r) sub.row(r) = points.col(idx[r]).transpose();
      Eigen::FullPivLU<Matrix> lu(sub);
      lu.setThreshold(1e-10);
      const Matrix kern = lu.kernel();
      for (Eigen::Index c = 0; c < kern.cols(); ++c) {
        Vector u = kern.col(c);
        const double nu = u.norm();
        if (nu > 1e-12) candidates.emplace_back(u / nu);
      }
    } while (next_combination(idx, m));
  }
  for (const Vector& u : candidates) {
    for (double sign : {1.0, -1.0}) {
      const double worst = (points.transpose() * (sign * u)).maxCoeff();
      if (worst <= 1e-10)
        throw Error(Errc::DegenerateHull,
                    "hull does not contain the origin in its interior; polar set is unbounded");
    }
  }
}

struct SubspaceContext {
  Matrix basis;                  // d x r orthonormal columns spanning the cluster
  Matrix partners;               // r x m, same-cluster samples except j, in basis coords
  Vector target;                 // x_j in basis coords
  std::vector<int> others;       // indices outside j's cluster
};

SubspaceContext make_subspace_context(const DataMatrix& x, const std::vector<int>& labels,
                                      int j) {
  const int n = static_cast<int>(x.count());
  if (static_cast<int>(labels.size()) != n)
    throw Error(Errc::LengthMismatch, "labels length " + std::to_string(labels.size()) +
                                          " does not match sample count " + std::to_string(n));
  if (j < 0 || j >= n)
    throw Error(Errc::OutOfRange, "sample index " + std::to_string(j) + " out of range");
  const int own = labels[j];
  if (own < 0)
    throw Error(Errc::OutOfRange, "sample " + std::to_string(j) + " carries no cluster label");

  SubspaceContext ctx;
  std::vector<int> same;
  for (int i = 0; i < n; ++i) {
    if (labels[i] == own)
      same.push_back(i);
    else
      ctx.others.push_back(i);
  }
  if (same.size() < 2)
    throw Error(Errc::DegenerateHull,
                "sample " + std::to_string(j) + " has no same-cluster partners");

  Matrix cluster(x.dim(), static_cast<Eigen::Index>(same.size()));
  for (std::size_t c = 0; c < same.size(); ++c) cluster.col(static_cast<Eigen::Index>(c)) = x.values.col(same[c]);
  Eigen::JacobiSVD<Matrix> svd(cluster, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 1e-14)
    throw Error(Errc::DegenerateHull, "cluster of sample " + std::to_string(j) + " is numerically zero");
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  if (rank > kGeometryMaxDim)
    throw Error(Errc::DeskScaleExceeded,
                "cluster dimension " + std::to_string(rank) + " exceeds the diagnostic limit of " +
                    std::to_string(kGeometryMaxDim));
  ctx.basis = svd.matrixU().leftCols(rank);

  const int m = static_cast<int>(same.size()) - 1;
  check_desk_scale(rank, m);
  ctx.partners.resize(rank, m);
  int c = 0;
  for (int i : same) {
    if (i == j) continue;
    ctx.partners.col(c++) = ctx.basis.transpose() * x.values.col(i);
  }
  ctx.target = ctx.basis.transpose() * x.values.col(j);
  return ctx;
}

}  // namespace

std::vector<Vector> polar_vertices(const Matrix& points, bool symmetric) {
  const int d = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (d < 1 || m < 1) throw Error(Errc::InvalidDimension, "polar_vertices needs a nonempty point set");
  if (!points.allFinite()) throw Error(Errc::NonFinite, "polar_vertices: points contain non-finite values");
  check_desk_scale(d, m);
  if (numeric_rank(points, 1e-10) < d)
    throw Error(Errc::DegenerateHull, "points do not span the space; polar set is unbounded");
  if (!symmetric) require_bounded_one_sided(points);

  std::vector<Vector> vertices;
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  const int sign_patterns = symmetric ? (1 << d) : 1;
  do {
    Matrix active(d, d);
    for (int r = 0; r < d; ++r) active.row(r) = points.col(idx[r]).transpose();
    for (int bits = 0; bits < sign_patterns; ++bits) {
      Matrix system = active;
      for (int r = 0; r < d; ++r)
        if (bits & (1 << r)) system.row(r) = -system.row(r);
      Eigen::FullPivLU<Matrix> lu(system);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) continue;
      Vector w = lu.solve(Vector::Ones(d));
      if (!w.allFinite()) continue;
      const Vector prods = points.transpose() * w;
      const double hi = prods.maxCoeff();
      const double lo = prods.minCoeff();
      const bool feasible = symmetric ? (hi <= 1.0 + 1e-9 && lo >= -1.0 - 1e-9) : (hi <= 1.0 + 1e-9);
      if (!feasible) continue;
      bool duplicate = false;
      for (const Vector& v : vertices) {
        if ((v - w).norm() <= 1e-8 * (1.0 + w.norm())) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) vertices.push_back(std::move(w));
    }
  } while (next_combination(idx, m));

  if (vertices.empty())
    throw Error(Errc::DegenerateHull, "no polar vertices found; point set is degenerate");
  return vertices;
}

DualPoint dual_point(const Matrix& cols, const Vector& a) {
  if (cols.rows() != a.size())
    throw Error(Errc::LengthMismatch, "dual_point: objective dimension does not match the columns");
  if (!cols.allFinite() || !a.allFinite())
    throw Error(Errc::NonFinite, "dual_point: non-finite input");
  const double a_norm = a.norm();
  if (cols.cols() == 0 || cols.norm() <= 1e-14) {
    if (a_norm <= 1e-12) return DualPoint{Vector::Zero(a.size()), 0.0};
    throw Error(Errc::UnboundedDual, "dual objective is unbounded: no constraints restrict it");
  }

  // Work inside span(cols); any objective component outside it is unconstrained.
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  const Matrix basis = svd.matrixU().leftCols(rank);
  const Vector coeff = basis.transpose() * a;
  if ((a - basis * coeff).norm() > 1e-9 * std::max(1.0, a_norm))
    throw Error(Errc::UnboundedDual,
                "dual objective is unbounded: target leaves the span of the columns");

  const Matrix reduced = basis.transpose() * cols;
  const std::vector<Vector> vertices = polar_vertices(reduced, true);

  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& v : vertices) best = std::max(best, coeff.dot(v));
  const double tie_tol = 1e-9 * std::max(1.0, std::abs(best));
  std::vector<const Vector*> tied;
  for (const Vector& v : vertices)
    if (coeff.dot(v) >= best - tie_tol) tied.push_back(&v);

  Vector w_best = *tied[0];
  double norm_best = w_best.norm();
  for (const Vector* v : tied) {
    if (v->norm() < norm_best) {
      w_best = *v;
      norm_best = w_best.norm();
    }
  }

  // Ties mean the optimal face has several vertices; the least-norm point of
  // that face is a convex combination of at most rank + 1 of them.
  if (tied.size() > 1 && tied.size() <= 16) {
    const int max_support = std::min<int>(rank + 1, static_cast<int>(tied.size()));
    for (int s = 2; s <= max_support; ++s) {
      std::vector<int> pick(s);
      for (int i = 0; i < s; ++i) pick[i] = i;
      do {
        Matrix v(rank, s);
        for (int c = 0; c < s; ++c) v.col(c) = *tied[pick[c]];
        Matrix kkt = Matrix::Zero(s + 1, s + 1);
        kkt.topLeftCorner(s, s) = 2.0 * (v.transpose() * v);
        kkt.topRightCorner(s, 1).setOnes();
        kkt.bottomLeftCorner(1, s).setOnes();
        Vector rhs = Vector::Zero(s + 1);
        rhs(s) = 1.0;
        Eigen::FullPivLU<Matrix> lu(kkt);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) continue;
        const Vector sol = lu.solve(rhs);
        if (!sol.allFinite()) continue;
        bool ok = true;
        for (int i = 0; i < s; ++i)
          if (sol(i) < -1e-9) ok = false;
        if (!ok) continue;
        const Vector cand = v * sol.head(s);
        if (cand.norm() < norm_best - 1e-12) {
          w_best = cand;
          norm_best = cand.norm();
        }
      } while (next_combination(pick, static_cast<int>(tied.size())));
    }
  }

  DualPoint out;
  out.w = basis * w_best;
  out.objective = coeff.dot(w_best);
  return out;
}

double inradius(const Matrix& points, bool symmetric) {
  const int d = static_cast<int>(points.rows());
  if (numeric_rank(points, 1e-10) < d)
    throw Error(Errc::DegenerateHull, "points do not span the space; inradius is zero");
  const std::vector<Vector> verts = polar_vertices(points, symmetric);
  double farthest = 0.0;
  for (const Vector& v : verts) farthest = std::max(farthest, v.norm());
  if (farthest <= 1e-300) throw Error(Errc::DegenerateHull, "polar set collapsed to the origin");
  return 1.0 / farthest;
}

double subspace_incoherence(const DataMatrix& x, const std::vector<int>& labels, int j) {
  const SubspaceContext ctx = make_subspace_context(x, labels, j);
  const DualPoint dp = dual_point(ctx.partners, ctx.target);
  const double wn = dp.w.norm();
  if (wn <= 1e-14) return 0.0;
  const Vector v = ctx.basis * (dp.w / wn);
  double mu = 0.0;
  for (int i : ctx.others) mu = std::max(mu, std::abs(x.values.col(i).dot(v)));
  return mu;
}

PreservingCheck check_preserving_condition(const DataMatrix& x, const std::vector<int>& labels,
                                           int j) {
  const SubspaceContext ctx = make_subspace_context(x, labels, j);
  const DualPoint dp = dual_point(ctx.partners, ctx.target);
  PreservingCheck out;
  const double wn = dp.w.norm();
  if (wn > 1e-14) {
    const Vector v = ctx.basis * (dp.w / wn);
    for (int i : ctx.others) out.incoherence = std::max(out.incoherence, std::abs(x.values.col(i).dot(v)));
  }
  out.inradius = augsc::inradius(ctx.partners, true);
  out.satisfied = out.incoherence < out.inradius;
  return out;
}

}  // namespace augsc
