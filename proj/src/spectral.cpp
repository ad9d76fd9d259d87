#include "augsc/spectral.hpp"

#include "augsc/parallel.hpp"
#include "augsc/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace augsc {

Matrix collapse(const Matrix& ctilde, const std::vector<std::vector<int>>& omega) {
  const Eigen::Index n = ctilde.cols();
  if (static_cast<Eigen::Index>(omega.size()) != n) {
    throw Error(Errc::LengthMismatch, "omega must have one entry per column");
  }
  for (const auto& rows : omega) {
    for (int r : rows) {
      if (r < 0 || r >= ctilde.rows()) {
        throw Error(Errc::OutOfRange, "omega references row " + std::to_string(r));
      }
    }
  }
  Matrix cf(n, n);
  parallel_for(static_cast<int>(n), [&](int j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int r : omega[static_cast<std::size_t>(i)]) acc += std::abs(ctilde(r, j));
      cf(i, j) = acc;
    }
  });
  return cf;
}

KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iter) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) throw Error(Errc::OutOfRange, "need 1 <= k <= point count");
  Rng rng(seed);
  Matrix centers(k, points.cols());

  // k-means++ seeding.
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  int first = static_cast<int>(rng.uniform_index(std::uint64_t(n)));
  centers.row(0) = points.row(first);
  chosen[static_cast<std::size_t>(first)] = 1;
  Vector dist2(n);
  for (int i = 0; i < n; ++i) dist2(i) = (points.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = dist2.sum();
    int pick = -1;
    if (total > 0.0) {
      double r = rng.uniform01() * total;
      double cum = 0.0;
      for (int i = 0; i < n; ++i) {
        cum += dist2(i);
        if (cum >= r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = n - 1;
    } else {
      // All remaining points coincide with a center; take the first unused.
      for (int i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = 0;
    }
    centers.row(c) = points.row(pick);
    chosen[static_cast<std::size_t>(pick)] = 1;
    for (int i = 0; i < n; ++i) {
      dist2(i) = std::min(dist2(i), (points.row(i) - centers.row(c)).squaredNorm());
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
      ++counts[static_cast<std::size_t>(best)];
    }
    // Re-seat empty clusters at the point farthest from its center.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      int far = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        double d = (points.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers.row(c) = points.row(far);
      --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }
    if (!changed && iter > 0) break;
    for (int c = 0; c < k; ++c) centers.row(c).setZero();
    for (int i = 0; i < n; ++i) centers.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) centers.row(c) /= double(counts[static_cast<std::size_t>(c)]);
    }
  }

  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    inertia += (points.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return {std::move(labels), std::move(centers), inertia};
}

ClusteringResult spectral_cluster(const Matrix& af, int p, std::uint64_t seed, int restarts) {
  const Eigen::Index n = af.rows();
  if (af.cols() != n || n < 2) throw Error(Errc::InvalidDimension, "affinity must be square");
  if (p < 1 || p > static_cast<int>(n)) {
    throw Error(Errc::OutOfRange, "cluster count must lie in [1, n]");
  }
  if (restarts < 1) throw Error(Errc::OutOfRange, "restarts must be positive");
  double asym = (af - af.transpose()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, af.cwiseAbs().maxCoeff());
  if (asym > 1e-10 * scale) {
    throw Error(Errc::OutOfRange, "affinity must be symmetric");
  }
  if (af.minCoeff() < -1e-12 * scale) {
    throw Error(Errc::OutOfRange, "affinity must be nonnegative");
  }

  ClusteringResult out;
  Vector deg = af.rowwise().sum();
  double max_deg = deg.maxCoeff();
  Vector dinv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (deg(i) <= 1e-15 * std::max(1.0, max_deg)) {
      dinv_sqrt(i) = 0.0;
      out.zero_degree.push_back(static_cast<int>(i));
    } else {
      dinv_sqrt(i) = 1.0 / std::sqrt(deg(i));
    }
  }
  Matrix norm = dinv_sqrt.asDiagonal() * af * dinv_sqrt.asDiagonal();
  Matrix lap = Matrix::Identity(n, n) - 0.5 * (norm + norm.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::EigenFailure, "eigendecomposition of the normalized Laplacian failed");
  }
  Matrix embedding = es.eigenvectors().leftCols(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    double nrm = embedding.row(i).norm();
    if (nrm > 1e-15) embedding.row(i) /= nrm;
  }

  KmeansResult best;
  int best_restart = -1;
  for (int r = 0; r < restarts; ++r) {
    KmeansResult km = kmeans(embedding, p, derive_seed(seed, std::uint64_t(r)));
    if (best_restart < 0 || km.inertia < best.inertia) {
      best = std::move(km);
      best_restart = r;
    }
  }
  out.labels = std::move(best.labels);
  out.embedding = std::move(embedding);
  out.inertia = best.inertia;
  out.best_restart = best_restart;
  return out;
}

}  // namespace augsc
