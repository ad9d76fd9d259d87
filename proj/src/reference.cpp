#include "augsc/reference.hpp"

#include <algorithm>
#include <cmath>

namespace augsc::reference {

Matrix collapse_serial(const Matrix& ctilde, const std::vector<std::vector<int>>& omega) {
  const Eigen::Index n = ctilde.cols();
  if (static_cast<Eigen::Index>(omega.size()) != n) {
    throw Error(Errc::LengthMismatch, "omega must have one entry per column");
  }
  Matrix cf(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int r : omega[static_cast<std::size_t>(i)]) acc += std::abs(ctilde(r, j));
      cf(i, j) = acc;
    }
  }
  return cf;
}

std::vector<std::vector<int>> knn_all_serial(const AugmentedDictionary& dict, int k) {
  const int total = dict.total();
  std::vector<std::vector<int>> psi(static_cast<std::size_t>(dict.n));
  for (int j = 0; j < dict.n; ++j) {
    std::vector<char> excluded(static_cast<std::size_t>(total), 0);
    for (int r : dict.omega[static_cast<std::size_t>(j)]) excluded[static_cast<std::size_t>(r)] = 1;
    std::vector<std::pair<double, int>> cand;
    for (int i = 0; i < total; ++i) {
      if (excluded[static_cast<std::size_t>(i)]) continue;
      cand.emplace_back((dict.columns.col(i) - dict.columns.col(j)).squaredNorm(), i);
    }
    if (k < 1 || k > static_cast<int>(cand.size())) {
      throw Error(Errc::KTooLarge, "k out of range in serial neighbor scan");
    }
    std::sort(cand.begin(), cand.end());
    psi[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) psi[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = cand[static_cast<std::size_t>(i)].second;
  }
  return psi;
}

AugmentedDictionary instance_augment_serial(const DataMatrix& x, const ImageGeometry& geom,
                                            const std::vector<AugmentStrategy>& strategies,
                                            int reps, std::uint64_t seed, bool normalize) {
  geom.check(x.dim());
  const int n = x.count();
  std::vector<augsc::detail::TransformBlock> blocks =
      augsc::detail::draw_blocks(strategies, reps, n, seed);
  const int m = static_cast<int>(blocks.size());
  const int total = n * (m + 1);

  AugmentedDictionary dict;
  dict.columns.resize(x.dim(), total);
  dict.columns.leftCols(n) = x.values;
  dict.n = n;
  dict.omega.assign(static_cast<std::size_t>(n), {});
  dict.parents.assign(static_cast<std::size_t>(total), {});
  dict.strategy_tags.resize(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k <= m; ++k) dict.omega[static_cast<std::size_t>(j)].push_back(j + k * n);
  }

  for (int idx = 0; idx < n * m; ++idx) {
    int k = idx / n, j = idx % n;
    int col = n * (k + 1) + j;
    const augsc::detail::TransformBlock& blk = blocks[static_cast<std::size_t>(k)];
    augsc::detail::apply_transform_column(blk.kind, blk.params[static_cast<std::size_t>(j)],
                                          x.values.col(j).data(), dict.columns.col(col).data(),
                                          geom);
    if (normalize) {
      double nrm = dict.columns.col(col).norm();
      if (nrm < 1e-12) throw Error(Errc::NearZeroColumn, "augmented column vanished");
      dict.columns.col(col) /= nrm;
    }
    dict.parents[static_cast<std::size_t>(col)] = {j};
    dict.strategy_tags[static_cast<std::size_t>(col - n)] =
        augsc::detail::transform_tag(blk.kind, blk.params[static_cast<std::size_t>(j)]);
  }
  dict.validate();
  return dict;
}

CoefficientMatrix solve_knn_l1_serial(const DataMatrix& x, const AugmentedDictionary& dict,
                                      const SolverConfig& cfg,
                                      const std::vector<std::vector<int>>& exclusions) {
  const double lambda = effective_lambda(x, cfg.mu_base);
  const double rho = lambda;
  const int n = dict.n;
  const double eps_col = cfg.admm_eps / double(n);

  Matrix ctilde = Matrix::Zero(dict.total(), n);
  bool all_conv = true;
  double total_res = 0.0;
  int max_it = 0;
  for (int j = 0; j < n; ++j) {
    std::vector<int> psi = knn_select(dict, j, cfg.k);
    Matrix dj(dict.columns.rows(), cfg.k);
    for (int i = 0; i < cfg.k; ++i) dj.col(i) = dict.columns.col(psi[static_cast<std::size_t>(i)]);
    Matrix g = lambda * (dj.transpose() * dj);
    g.diagonal().array() += rho;
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success) {
      throw Error(Errc::SingularSystem, "neighborhood gram factorization failed");
    }
    Vector rhs = lambda * (dj.transpose() * x.values.col(j));
    std::vector<int> zpos;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      const std::vector<int>& ex = exclusions[static_cast<std::size_t>(j)];
      if (std::find(ex.begin(), ex.end(), psi[i]) != ex.end()) {
        zpos.push_back(static_cast<int>(i));
      }
    }
    Vector levels = Vector::Ones(cfg.k);
    Vector a(cfg.k);
    bool conv = false;
    double res = 0.0;
    int iters = 0;
    augsc::detail::admm_column_shrink(llt, rhs, rho, levels, zpos, eps_col, cfg.admm_max_iter, a,
                                      &conv, &res, &iters);
    for (int i = 0; i < cfg.k; ++i) ctilde(psi[static_cast<std::size_t>(i)], j) = a(i);
    for (int r : exclusions[static_cast<std::size_t>(j)]) ctilde(r, j) = 0.0;
    all_conv = all_conv && conv;
    total_res += res;
    max_it = std::max(max_it, iters);
  }

  CoefficientMatrix out;
  out.ctilde = std::move(ctilde);
  out.cf = collapse_serial(out.ctilde, dict.omega);
  out.af = out.cf + out.cf.transpose();
  out.converged = all_conv;
  out.residual = total_res;
  out.iterations = max_it;
  return out;
}

}  // namespace augsc::reference
