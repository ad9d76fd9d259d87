#pragma once

#include "augsc/types.hpp"

#include <Eigen/Cholesky>

#include <vector>

namespace augsc {

// Shrinkage operator max(0, |v| - t) * sign(v).
double soft_threshold(double value, double threshold);

// Singular value shrinkage: U max(0, S - t) V'. Throws SvdFailure when the
// decomposition does not converge.
Matrix svt(const Matrix& m, double threshold);

// Indices of the k dictionary columns closest (euclidean) to column j, with
// omega[j] excluded; ties broken toward the smaller index. Requires
// k <= total - |omega[j]|.
std::vector<int> knn_select(const AugmentedDictionary& dict, int j, int k);

// Neighborhoods for all original columns; parallel over columns.
std::vector<std::vector<int>> knn_all(const AugmentedDictionary& dict, int k);

// Entrywise l1 threshold levels: level(i,j) = base + lambda2 *
// ||f.row(i) - f.row(j)||^2. A null f makes every level equal base, which is
// the label-free solver. The nuclear path keeps its singular value threshold
// and applies levels to its elementwise auxiliary only.
struct ThresholdModel {
  const Matrix* f = nullptr;
  double lambda2 = 0.0;
  double base = 1.0;
};

// Full-dictionary self-expressive solve
//   min R(C) + (lambda/2) ||X - D C||_F^2   s.t. C(excl[j], j) = 0
// with R = column l1 / squared Frobenius / nuclear norm and
// lambda = mu_base / max off-diagonal gram entry of X. The l1 and nuclear
// paths run an ADMM with rho = lambda until both the splitting gap
// ||C - A||_F^2 and the squared prox step fall below admm_eps; the reported
// residual is the gap. The label-free Frobenius path is an exact linear
// solve. Returned coefficients come from the thresholded iterate, so
// excluded entries are exact zeros.
CoefficientMatrix solve_self_expressive_full(const DataMatrix& x, const AugmentedDictionary& dict,
                                             const SolverConfig& cfg,
                                             const std::vector<std::vector<int>>& exclusions,
                                             const ThresholdModel& tm = {});

// k-nearest-neighbor restricted variant: column j is represented with only
// its cfg.k nearest dictionary columns. l1/Frobenius columns solve
// independent k-sized subproblems; the nuclear variant couples columns
// through a global singular value prox.
CoefficientMatrix solve_ak_sc(const DataMatrix& x, const AugmentedDictionary& dict,
                              const SolverConfig& cfg,
                              const std::vector<std::vector<int>>& exclusions,
                              const ThresholdModel& tm = {});

// Label-free solve with exclusions = omega; dispatches on cfg.k
// (0 = full dictionary).
CoefficientMatrix solve_unsupervised(const DataMatrix& x, const AugmentedDictionary& dict,
                                     const SolverConfig& cfg);

namespace detail {

// Reusable state for repeated solves against a fixed dictionary: the normal
// matrix factorization does not depend on threshold levels, so outer loops
// factor once and run many ADMM rounds against it.
struct FullWorkspace {
  double lambda = 0.0;
  double rho = 0.0;
  double shift = 0.0;
  Eigen::LLT<Matrix> llt;
  Matrix rhs0;  // lambda * D' X
};

FullWorkspace build_full_workspace(const DataMatrix& x, const AugmentedDictionary& dict,
                                   double lambda, double shift);

struct KnnWorkspace {
  double lambda = 0.0;
  double rho = 0.0;
  int k = 0;
  std::vector<std::vector<int>> psi;       // selected dictionary rows per column
  std::vector<Eigen::LLT<Matrix>> llt;     // factor of lambda D_j' D_j + shift I
  Matrix rhs;                              // k x n, column j = lambda D_j' x_j
};

KnnWorkspace build_knn_workspace(const DataMatrix& x, const AugmentedDictionary& dict,
                                 double lambda, double shift, int k);

CoefficientMatrix solve_full_given(const DataMatrix& x, const AugmentedDictionary& dict,
                                   const SolverConfig& cfg, double lambda,
                                   const std::vector<std::vector<int>>& exclusions,
                                   const ThresholdModel& tm, FullWorkspace* reuse = nullptr);

CoefficientMatrix solve_knn_given(const DataMatrix& x, const AugmentedDictionary& dict,
                                  const SolverConfig& cfg, double lambda,
                                  const std::vector<std::vector<int>>& exclusions,
                                  const ThresholdModel& tm, KnnWorkspace* reuse = nullptr);

// Single-column shrinkage ADMM, shared by the parallel driver and the serial
// reference so both run identical arithmetic.
void admm_column_shrink(const Eigen::LLT<Matrix>& llt, const Vector& rhs, double rho,
                        const Vector& levels, const std::vector<int>& zero_pos, double eps_col,
                        int max_iter, Vector& a, bool* converged, double* residual,
                        int* iterations);

}  // namespace detail

}  // namespace augsc
