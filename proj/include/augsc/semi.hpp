#pragma once

#include "augsc/solvers.hpp"
#include "augsc/types.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace augsc {

// Symmetric propagation graphs over all dictionary columns. a_tilde couples
// the coefficient blocks: originals through the symmetrized top block,
// original/augmented pairs at half weight. s_tilde applies the same shape to
// the provenance links. l_a and l_s are their combinatorial Laplacians.
struct PropagationMatrices {
  Eigen::SparseMatrix<double> a_tilde;
  Eigen::SparseMatrix<double> s_tilde;
  Eigen::SparseMatrix<double> l_a;
  Eigen::SparseMatrix<double> l_s;
};

PropagationMatrices build_propagation(const Matrix& ctilde, const AugmentedDictionary& dict);

struct PropagationResult {
  Matrix f;            // n_total x p soft labels, row-stochastic
  int free_nodes = 0;  // nodes in components with no labeled member, reset to uniform
};

// Solves (l_a + gamma1 U + gamma2 l_s) F = gamma1 U Ytilde on every connected
// component that contains a labeled node (the system is positive definite
// there); label-free components fall back to uniform rows and are counted.
PropagationResult update_f(const PropagationMatrices& prop, const LabelState& labels,
                           double gamma1, double gamma2);

// One coefficient update given current soft labels f: the l1 path shrinks
// entry (i,j) at level (1 + lambda2 ||f_i - f_j||^2)/rho, the Frobenius and
// nuclear paths at lambda2 ||f_i - f_j||^2 / rho on their elementwise
// auxiliary. phi rows are zeroed exactly.
CoefficientMatrix update_c_semisupervised(const DataMatrix& x, const AugmentedDictionary& dict,
                                          const Matrix& f, const SolverConfig& cfg,
                                          const std::vector<std::vector<int>>& phi);

struct OuterTrace {
  int iteration = 0;
  // Clustering error (percent) of this iteration's pruned affinity graph
  // under spectral clustering; the label-free first iteration makes this the
  // purely augmentation-driven baseline. -1 when no ground truth was given.
  double err = -1.0;
  // Clustering error (percent) of argmax over the soft labels F.
  double err_f = -1.0;
  double rel_f = 0.0;
  double rel_c = 0.0;
  double admm_residual = 0.0;
  int admm_iterations = 0;
  bool admm_converged = true;
};

struct SemiResult {
  CoefficientMatrix coeffs;
  Matrix f;
  std::vector<int> labels;
  std::vector<OuterTrace> trace;
  bool converged = false;
  int outer_iterations = 0;
  int free_nodes = 0;
};

// Alternates coefficient updates and label propagation starting from F = 0
// (so the first coefficient solve is label-free) and a zero-initialized ADMM
// each round, stopping once the relative change of F drops below
// cfg.outer_f_tol or cfg.outer_max_iter is reached. Final hard labels take
// each original row's argmax (ties to the smaller cluster index). When
// `truth` is given, every trace row carries the clustering error of the
// labels at that iteration.
SemiResult run_as_sc(const DataMatrix& x, const AugmentedDictionary& dict,
                     const LabelState& labels, const SolverConfig& cfg,
                     const std::vector<int>* truth = nullptr);

// Hard labels from soft ones: argmax over the first n rows.
std::vector<int> harden_labels(const Matrix& f, int n);

}  // namespace augsc
