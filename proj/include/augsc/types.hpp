#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace augsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error codes carried by every exception the library throws. exit_category()
// maps them onto the CLI exit codes: 1 usage, 2 data, 3 numerical.
enum class Errc {
  UsageError,
  InvalidDimension,
  NearZeroColumn,
  LengthMismatch,
  GeometryMismatch,
  InsufficientLabels,
  KTooLarge,
  OutOfRange,
  ParseError,
  NonFinite,
  MagicMismatch,
  Truncated,
  DegenerateHull,
  DeskScaleExceeded,
  DegenerateGram,
  SvdFailure,
  SingularSystem,
  SingularPropagation,
  EigenFailure,
  UnboundedDual,
  NoConvergence,
};

const char* errc_name(Errc c);
int exit_category(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Dense sample matrix, one sample per column (d x n).
struct DataMatrix {
  Matrix values;
  bool normalized = false;

  DataMatrix() = default;
  explicit DataMatrix(Matrix v, bool is_normalized = false);

  int dim() const { return static_cast<int>(values.rows()); }
  int count() const { return static_cast<int>(values.cols()); }
};

// Returns a copy with every column scaled to unit l2 norm.
// Throws NearZeroColumn if any column norm falls below tol.
DataMatrix normalize_columns(const DataMatrix& x, double tol = 1e-12);

// lambda = mu_base / max_{i != j} |x_i' x_j| over unit-normalized columns.
// Throws DegenerateGram when all off-diagonal inner products vanish.
double effective_lambda(const DataMatrix& x, double mu_base);

enum class Regularizer { L1, Fro, Nuc };

const char* regularizer_name(Regularizer r);
Regularizer regularizer_from_string(const std::string& s);

// Solver knobs shared by the unsupervised and semi-supervised paths.
// k == 0 selects the full dictionary; k > 0 restricts each column's
// dictionary to its k nearest neighbors.
struct SolverConfig {
  Regularizer regularizer = Regularizer::L1;
  double mu_base = 50.0;
  double lambda2 = 1.0;
  double gamma1 = 1000.0;
  double gamma2 = 1000.0;
  int k = 0;
  double admm_eps = 2e-4;
  int admm_max_iter = 200;
  int outer_max_iter = 10;
  double outer_f_tol = 1e-3;
  std::uint64_t seed = 0;

  void validate() const;
};

// Dictionary [X | X_hat]: the first n columns are the originals, the rest are
// augmented. omega[j] lists the dictionary rows excluded from column j's own
// representation (j itself plus its derived copies). parents[i] lists the
// original columns an augmented column i was built from (empty for i < n).
struct AugmentedDictionary {
  Matrix columns;
  int n = 0;
  std::vector<std::vector<int>> omega;
  std::vector<std::vector<int>> parents;
  std::vector<std::string> strategy_tags;

  int total() const { return static_cast<int>(columns.cols()); }
  int dim() const { return static_cast<int>(columns.rows()); }
  int augmented() const { return total() - n; }

  void validate() const;

  // Identity dictionary: no augmentation, omega[j] = {j}.
  static AugmentedDictionary plain(const DataMatrix& x);
};

// Solver output. ctilde is n_total x n with exact zeros on every excluded
// entry; cf aggregates each original's derived rows; af = cf + cf'.
struct CoefficientMatrix {
  Matrix ctilde;
  Matrix cf;
  Matrix af;
  bool converged = true;
  double residual = 0.0;
  int iterations = 0;
};

// Label bookkeeping for the semi-supervised path. given[j] in [-1, p) where
// -1 marks an unlabeled sample; rows of ytilde() beyond n are zero. f is the
// current soft label matrix (n_total x p, row-stochastic after propagation).
struct LabelState {
  std::vector<int> given;
  int p = 0;
  int n_total = 0;
  Matrix f;

  int n() const { return static_cast<int>(given.size()); }
  int labeled_count() const;
  Matrix y() const;
  Matrix ytilde() const;
  // 0/1 mask over all n_total rows; 1 marks a labeled (original) row.
  std::vector<std::uint8_t> labeled_mask() const;

  static LabelState make(std::vector<int> given, int p, int n_total);
};

}  // namespace augsc
