#include "augsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace augsc {

namespace {

void check_label_pair(const std::vector<int>& truth, const std::vector<int>& pred) {
  if (truth.size() != pred.size()) {
    throw Error(Errc::LengthMismatch, "label vectors differ in length: " +
                                          std::to_string(truth.size()) + " vs " +
                                          std::to_string(pred.size()));
  }
  if (truth.empty()) throw Error(Errc::LengthMismatch, "empty label vectors");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || pred[i] < 0) {
      throw Error(Errc::OutOfRange, "labels must be nonnegative for scoring");
    }
  }
}

}  // namespace

std::vector<int> hungarian_min_assign(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1) {
    throw Error(Errc::InvalidDimension, "assignment needs a square cost matrix");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials method; row/col indices are 1-based internally, 0 is a sentinel.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      int i0 = match[static_cast<std::size_t>(j0)], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (match[static_cast<std::size_t>(j)] > 0) row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return row_to_col;
}

double error_rate(const std::vector<int>& truth, const std::vector<int>& pred) {
  check_label_pair(truth, pred);
  int p = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) p = std::max({p, truth[i] + 1, pred[i] + 1});
  Matrix confusion = Matrix::Zero(p, p);
  for (std::size_t i = 0; i < truth.size(); ++i) confusion(truth[i], pred[i]) += 1.0;
  // Maximize matched count == minimize negated confusion.
  std::vector<int> assign = hungarian_min_assign(-confusion);
  double matched = 0.0;
  for (int t = 0; t < p; ++t) matched += confusion(t, assign[static_cast<std::size_t>(t)]);
  return 100.0 * (1.0 - matched / double(truth.size()));
}

double nmi(const std::vector<int>& truth, const std::vector<int>& pred) {
  check_label_pair(truth, pred);
  int pt = 0, pp = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    pt = std::max(pt, truth[i] + 1);
    pp = std::max(pp, pred[i] + 1);
  }
  const double n = double(truth.size());
  Matrix joint = Matrix::Zero(pt, pp);
  for (std::size_t i = 0; i < truth.size(); ++i) joint(truth[i], pred[i]) += 1.0;
  Vector rt = joint.rowwise().sum(), rp = joint.colwise().sum();

  double ht = 0.0, hp = 0.0;
  for (int i = 0; i < pt; ++i)
    if (rt(i) > 0) ht -= rt(i) / n * std::log(rt(i) / n);
  for (int j = 0; j < pp; ++j)
    if (rp(j) > 0) hp -= rp(j) / n * std::log(rp(j) / n);

  bool t_single = ht <= 0.0, p_single = hp <= 0.0;
  if (t_single && p_single) return 100.0;  // identical degenerate partitions
  if (t_single || p_single) return 0.0;

  double mi = 0.0;
  for (int i = 0; i < pt; ++i) {
    for (int j = 0; j < pp; ++j) {
      double c = joint(i, j);
      if (c > 0) mi += c / n * std::log(c * n / (rt(i) * rp(j)));
    }
  }
  if (mi < 0) mi = 0;  // guards tiny negative round-off
  return 100.0 * mi / std::sqrt(ht * hp);
}

PreservingRate subspace_preserving_rate(const Matrix& cf, const std::vector<int>& labels) {
  if (cf.rows() != cf.cols()) {
    throw Error(Errc::InvalidDimension, "collapsed coefficient matrix must be square");
  }
  if (static_cast<Eigen::Index>(labels.size()) != cf.cols()) {
    throw Error(Errc::LengthMismatch, "labels do not match matrix size");
  }
  PreservingRate out;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < cf.cols(); ++j) {
    double total = 0.0, inside = 0.0;
    for (Eigen::Index i = 0; i < cf.rows(); ++i) {
      if (i == j) continue;
      double v = std::abs(cf(i, j));
      total += v;
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) inside += v;
    }
    if (total <= 0.0) {
      ++out.zero_columns;
    } else {
      acc += inside / total;
    }
  }
  out.value = 100.0 * acc / double(cf.cols());
  return out;
}

double path_strength(const Matrix& af, const std::vector<int>& labels, int hops,
                     std::vector<double>* per_hop) {
  if (af.rows() != af.cols()) throw Error(Errc::InvalidDimension, "affinity must be square");
  if (static_cast<Eigen::Index>(labels.size()) != af.cols()) {
    throw Error(Errc::LengthMismatch, "labels do not match affinity size");
  }
  if (hops < 1) throw Error(Errc::OutOfRange, "hops must be positive");
  const Eigen::Index n = af.rows();
  Matrix power = af;
  if (per_hop) per_hop->clear();
  double total = 0.0;
  for (int h = 1; h <= hops; ++h) {
    if (h > 1) power = (power * af).eval();
    double sq = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)]) sq += power(i, j) * power(i, j);
    double term = std::sqrt(sq);
    if (per_hop) per_hop->push_back(term);
    total += term;
  }
  return total;
}

}  // namespace augsc
