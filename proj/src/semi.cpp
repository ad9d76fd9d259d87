#include "augsc/semi.hpp"

#include "augsc/augment.hpp"
#include "augsc/metrics.hpp"
#include "augsc/spectral.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace augsc {

namespace {

// Union-find over graph nodes.
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(b)] = a;
  }
};

Eigen::SparseMatrix<double> laplacian_of(const Eigen::SparseMatrix<double>& w) {
  const Eigen::Index n = w.rows();
  Vector deg = Vector::Zero(n);
  for (int k = 0; k < w.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(w, k); it; ++it) {
      deg(it.row()) += it.value();
    }
  }
  Eigen::SparseMatrix<double> l = -w;
  std::vector<Eigen::Triplet<double>> diag;
  diag.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) diag.emplace_back(int(i), int(i), deg(i));
  Eigen::SparseMatrix<double> d(n, n);
  d.setFromTriplets(diag.begin(), diag.end());
  l += d;
  return l;
}

}  // namespace

PropagationMatrices build_propagation(const Matrix& ctilde, const AugmentedDictionary& dict) {
  dict.validate();
  const int n = dict.n;
  const int nt = dict.total();
  if (ctilde.rows() != nt || ctilde.cols() != n) {
    throw Error(Errc::LengthMismatch, "coefficient matrix does not match dictionary");
  }
  if (!ctilde.allFinite()) throw Error(Errc::NonFinite, "coefficient matrix has non-finite entries");

  std::vector<Eigen::Triplet<double>> ta;
  ta.reserve(static_cast<std::size_t>(nt) * 4);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      // Symmetrized original-to-original affinity; each unordered pair is
      // visited twice, so halve once here.
      double v = 0.5 * (std::abs(ctilde(i, j)) + std::abs(ctilde(j, i)));
      if (v > 0.0) ta.emplace_back(i, j, v);
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = n; i < nt; ++i) {
      double v = 0.5 * std::abs(ctilde(i, j));
      if (v > 0.0) {
        ta.emplace_back(i, j, v);
        ta.emplace_back(j, i, v);
      }
    }
  }
  PropagationMatrices out;
  out.a_tilde.resize(nt, nt);
  out.a_tilde.setFromTriplets(ta.begin(), ta.end());

  std::vector<Eigen::Triplet<double>> ts;
  for (int i = n; i < nt; ++i) {
    for (int parent : dict.parents[static_cast<std::size_t>(i)]) {
      ts.emplace_back(i, parent, 0.5);
      ts.emplace_back(parent, i, 0.5);
    }
  }
  out.s_tilde.resize(nt, nt);
  out.s_tilde.setFromTriplets(ts.begin(), ts.end());

  out.l_a = laplacian_of(out.a_tilde);
  out.l_s = laplacian_of(out.s_tilde);
  return out;
}

PropagationResult update_f(const PropagationMatrices& prop, const LabelState& labels,
                           double gamma1, double gamma2) {
  const Eigen::Index nt = prop.l_a.rows();
  if (labels.n_total != nt) {
    throw Error(Errc::LengthMismatch, "label state does not match propagation graph");
  }
  if (labels.p < 1) throw Error(Errc::OutOfRange, "p must be positive");
  if (!(gamma1 > 0.0)) {
    throw Error(Errc::SingularPropagation, "gamma1 must be positive to anchor labeled rows");
  }
  if (gamma2 < 0.0) throw Error(Errc::OutOfRange, "gamma2 must be nonnegative");
  std::vector<std::uint8_t> mask = labels.labeled_mask();
  int labeled = 0;
  for (std::uint8_t m : mask) labeled += m;
  if (labeled == 0) {
    throw Error(Errc::SingularPropagation, "no labeled samples to propagate from");
  }

  Eigen::SparseMatrix<double> g = prop.l_a + gamma2 * prop.l_s;
  // The system matrix must be symmetric with nonpositive off-diagonals and a
  // strictly positive diagonal on labeled rows before adding gamma1 U.
  for (int k = 0; k < g.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(g, k); it; ++it) {
      if (it.row() != it.col() && it.value() > 1e-12) {
        throw Error(Errc::SingularPropagation, "propagation system has a positive off-diagonal");
      }
    }
  }
  std::vector<Eigen::Triplet<double>> tu;
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (mask[static_cast<std::size_t>(i)]) tu.emplace_back(int(i), int(i), gamma1);
  }
  Eigen::SparseMatrix<double> u(nt, nt);
  u.setFromTriplets(tu.begin(), tu.end());
  g += u;

  // Connected components over the union of both graphs.
  DisjointSet ds(static_cast<int>(nt));
  auto unite_edges = [&](const Eigen::SparseMatrix<double>& w) {
    for (int k = 0; k < w.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(w, k); it; ++it) {
        if (it.value() != 0.0) ds.unite(static_cast<int>(it.row()), static_cast<int>(it.col()));
      }
    }
  };
  unite_edges(prop.a_tilde);
  unite_edges(prop.s_tilde);

  std::vector<char> root_labeled(static_cast<std::size_t>(nt), 0);
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (mask[static_cast<std::size_t>(i)]) root_labeled[static_cast<std::size_t>(ds.find(static_cast<int>(i)))] = 1;
  }
  std::vector<int> good;
  good.reserve(static_cast<std::size_t>(nt));
  std::vector<int> pos(static_cast<std::size_t>(nt), -1);
  int free_nodes = 0;
  for (Eigen::Index i = 0; i < nt; ++i) {
    if (root_labeled[static_cast<std::size_t>(ds.find(static_cast<int>(i)))]) {
      pos[static_cast<std::size_t>(i)] = static_cast<int>(good.size());
      good.push_back(static_cast<int>(i));
    } else {
      ++free_nodes;
    }
  }

  Matrix ytilde = labels.ytilde();
  Matrix f = Matrix::Constant(nt, labels.p, 1.0 / double(labels.p));
  if (!good.empty()) {
    const int m = static_cast<int>(good.size());
    std::vector<Eigen::Triplet<double>> tg;
    for (int k = 0; k < g.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(g, k); it; ++it) {
        int r = pos[static_cast<std::size_t>(it.row())], c = pos[static_cast<std::size_t>(it.col())];
        if (r >= 0 && c >= 0) tg.emplace_back(r, c, it.value());
      }
    }
    Eigen::SparseMatrix<double> gsub(m, m);
    gsub.setFromTriplets(tg.begin(), tg.end());
    Matrix rhs(m, labels.p);
    for (int i = 0; i < m; ++i) {
      if (mask[static_cast<std::size_t>(good[static_cast<std::size_t>(i)])]) {
        rhs.row(i) = gamma1 * ytilde.row(good[static_cast<std::size_t>(i)]);
      } else {
        rhs.row(i).setZero();
      }
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(gsub);
    if (solver.info() != Eigen::Success) {
      throw Error(Errc::SingularPropagation, "propagation system factorization failed");
    }
    Matrix fsub = solver.solve(rhs);
    if (solver.info() != Eigen::Success) {
      throw Error(Errc::SingularPropagation, "propagation solve failed");
    }
    for (int i = 0; i < m; ++i) f.row(good[static_cast<std::size_t>(i)]) = fsub.row(i);
  }
  return {std::move(f), free_nodes};
}

CoefficientMatrix update_c_semisupervised(const DataMatrix& x, const AugmentedDictionary& dict,
                                          const Matrix& f, const SolverConfig& cfg,
                                          const std::vector<std::vector<int>>& phi) {
  ThresholdModel tm;
  tm.f = &f;
  tm.lambda2 = cfg.lambda2;
  tm.base = (cfg.regularizer == Regularizer::L1) ? 1.0 : 0.0;
  double lambda = effective_lambda(x, cfg.mu_base);
  if (cfg.k > 0) return detail::solve_knn_given(x, dict, cfg, lambda, phi, tm);
  return detail::solve_full_given(x, dict, cfg, lambda, phi, tm);
}

std::vector<int> harden_labels(const Matrix& f, int n) {
  if (n < 1 || n > f.rows()) throw Error(Errc::OutOfRange, "row count outside soft label matrix");
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double best_v = f(i, 0);
    for (int c = 1; c < f.cols(); ++c) {
      if (f(i, c) > best_v) {
        best_v = f(i, c);
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

SemiResult run_as_sc(const DataMatrix& x, const AugmentedDictionary& dict,
                     const LabelState& labels, const SolverConfig& cfg,
                     const std::vector<int>* truth) {
  cfg.validate();
  dict.validate();
  if (labels.n() != dict.n || labels.n_total != dict.total()) {
    throw Error(Errc::LengthMismatch, "label state does not match dictionary");
  }
  if (labels.labeled_count() < 1) {
    throw Error(Errc::InsufficientLabels, "semi-supervised solve needs at least one labeled sample");
  }
  if (truth && static_cast<int>(truth->size()) != dict.n) {
    throw Error(Errc::LengthMismatch, "ground truth length does not match samples");
  }

  const double lambda = effective_lambda(x, cfg.mu_base);
  std::vector<std::vector<int>> phi = cannot_link_sets(dict, labels);

  double shift;
  switch (cfg.regularizer) {
    case Regularizer::L1: shift = lambda; break;
    case Regularizer::Fro: shift = 2.0 + lambda; break;
    case Regularizer::Nuc: shift = 2.0 * lambda; break;
    default: shift = lambda; break;
  }
  detail::FullWorkspace full_ws;
  detail::KnnWorkspace knn_ws;
  if (cfg.k > 0) {
    knn_ws = detail::build_knn_workspace(x, dict, lambda, shift, cfg.k);
  } else {
    full_ws = detail::build_full_workspace(x, dict, lambda, shift);
  }

  SemiResult out;
  // F starts at zero so the first coefficient solve carries no label bias:
  // all threshold levels equal the base and only the propagation step injects
  // the given labels.
  Matrix f = Matrix::Zero(labels.n_total, labels.p);
  Matrix prev_c;
  for (int it = 1; it <= cfg.outer_max_iter; ++it) {
    ThresholdModel tm;
    tm.f = &f;
    tm.lambda2 = cfg.lambda2;
    tm.base = (cfg.regularizer == Regularizer::L1) ? 1.0 : 0.0;
    CoefficientMatrix c = (cfg.k > 0)
                              ? detail::solve_knn_given(x, dict, cfg, lambda, phi, tm, &knn_ws)
                              : detail::solve_full_given(x, dict, cfg, lambda, phi, tm, &full_ws);

    PropagationMatrices prop = build_propagation(c.ctilde, dict);
    PropagationResult pr = update_f(prop, labels, cfg.gamma1, cfg.gamma2);

    OuterTrace row;
    row.iteration = it;
    row.rel_f = f.norm() <= 1e-12 ? 1.0 : (pr.f - f).norm() / f.norm();
    row.rel_c = prev_c.size() == 0
                    ? 1.0
                    : (c.ctilde - prev_c).norm() / std::max(prev_c.norm(), 1e-300);
    row.admm_residual = c.residual;
    row.admm_iterations = c.iterations;
    row.admm_converged = c.converged;
    if (truth) {
      row.err = error_rate(*truth, spectral_cluster(c.af, labels.p, cfg.seed).labels);
      row.err_f = error_rate(*truth, harden_labels(pr.f, dict.n));
    }
    out.trace.push_back(row);

    prev_c = c.ctilde;
    out.coeffs = std::move(c);
    f = std::move(pr.f);
    out.free_nodes = pr.free_nodes;
    out.outer_iterations = it;
    if (row.rel_f < cfg.outer_f_tol) {
      out.converged = true;
      break;
    }
  }
  out.f = std::move(f);
  out.labels = harden_labels(out.f, dict.n);
  return out;
}

}  // namespace augsc
