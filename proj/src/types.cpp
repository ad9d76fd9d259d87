#include "augsc/types.hpp"

#include <cmath>

namespace augsc {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UsageError: return "UsageError";
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::NearZeroColumn: return "NearZeroColumn";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::GeometryMismatch: return "GeometryMismatch";
    case Errc::InsufficientLabels: return "InsufficientLabels";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ParseError: return "ParseError";
    case Errc::NonFinite: return "NonFinite";
    case Errc::MagicMismatch: return "MagicMismatch";
    case Errc::Truncated: return "Truncated";
    case Errc::DegenerateHull: return "DegenerateHull";
    case Errc::DeskScaleExceeded: return "DeskScaleExceeded";
    case Errc::DegenerateGram: return "DegenerateGram";
    case Errc::SvdFailure: return "SvdFailure";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::SingularPropagation: return "SingularPropagation";
    case Errc::EigenFailure: return "EigenFailure";
    case Errc::UnboundedDual: return "UnboundedDual";
    case Errc::NoConvergence: return "NoConvergence";
  }
  return "UnknownError";
}

int exit_category(Errc c) {
  switch (c) {
    case Errc::UsageError:
      return 1;
    case Errc::InvalidDimension:
    case Errc::NearZeroColumn:
    case Errc::LengthMismatch:
    case Errc::GeometryMismatch:
    case Errc::InsufficientLabels:
    case Errc::KTooLarge:
    case Errc::OutOfRange:
    case Errc::ParseError:
    case Errc::NonFinite:
    case Errc::MagicMismatch:
    case Errc::Truncated:
    case Errc::DegenerateHull:
    case Errc::DeskScaleExceeded:
      return 2;
    default:
      return 3;
  }
}

DataMatrix::DataMatrix(Matrix v, bool is_normalized) : values(std::move(v)), normalized(is_normalized) {
  if (values.rows() < 1 || values.cols() < 2) {
    throw Error(Errc::InvalidDimension, "sample matrix needs d >= 1 and n >= 2, got " +
                                            std::to_string(values.rows()) + "x" +
                                            std::to_string(values.cols()));
  }
  if (!values.allFinite()) {
    throw Error(Errc::NonFinite, "sample matrix contains non-finite entries");
  }
}

DataMatrix normalize_columns(const DataMatrix& x, double tol) {
  Matrix v = x.values;
  for (int j = 0; j < v.cols(); ++j) {
    double nrm = v.col(j).norm();
    if (nrm < tol) {
      throw Error(Errc::NearZeroColumn, "column " + std::to_string(j) + " has norm " +
                                            std::to_string(nrm) + " below " + std::to_string(tol));
    }
    v.col(j) /= nrm;
  }
  return DataMatrix(std::move(v), true);
}

double effective_lambda(const DataMatrix& x, double mu_base) {
  if (!(mu_base > 0.0)) {
    throw Error(Errc::OutOfRange, "mu_base must be positive");
  }
  const Matrix& v = x.values;
  double max_abs = 0.0;
  for (int j = 1; j < v.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      double g = std::abs(v.col(i).dot(v.col(j)));
      if (g > max_abs) max_abs = g;
    }
  }
  if (max_abs < 1e-12) {
    throw Error(Errc::DegenerateGram, "all pairwise inner products vanish; lambda undefined");
  }
  return mu_base / max_abs;
}

const char* regularizer_name(Regularizer r) {
  switch (r) {
    case Regularizer::L1: return "l1";
    case Regularizer::Fro: return "fro";
    case Regularizer::Nuc: return "nuc";
  }
  return "?";
}

Regularizer regularizer_from_string(const std::string& s) {
  if (s == "l1" || s == "ssc") return Regularizer::L1;
  if (s == "fro" || s == "lsr") return Regularizer::Fro;
  if (s == "nuc" || s == "lrr") return Regularizer::Nuc;
  throw Error(Errc::UsageError, "unknown regularizer '" + s + "' (expected l1|fro|nuc)");
}

void SolverConfig::validate() const {
  if (!(mu_base > 0.0)) throw Error(Errc::OutOfRange, "mu_base must be positive");
  if (lambda2 < 0.0) throw Error(Errc::OutOfRange, "lambda2 must be nonnegative");
  if (gamma1 < 0.0 || gamma2 < 0.0) throw Error(Errc::OutOfRange, "gamma1/gamma2 must be nonnegative");
  if (k < 0) throw Error(Errc::OutOfRange, "k must be 0 (full) or positive");
  if (!(admm_eps > 0.0)) throw Error(Errc::OutOfRange, "admm_eps must be positive");
  if (admm_max_iter < 1) throw Error(Errc::OutOfRange, "admm_max_iter must be at least 1");
  if (outer_max_iter < 1) throw Error(Errc::OutOfRange, "outer_max_iter must be at least 1");
  if (!(outer_f_tol > 0.0)) throw Error(Errc::OutOfRange, "outer_f_tol must be positive");
}

void AugmentedDictionary::validate() const {
  if (n < 2 || n > total()) {
    throw Error(Errc::InvalidDimension, "dictionary needs 2 <= n <= total columns");
  }
  if (static_cast<int>(omega.size()) != n) {
    throw Error(Errc::LengthMismatch, "omega must have one entry per original column");
  }
  if (static_cast<int>(parents.size()) != total()) {
    throw Error(Errc::LengthMismatch, "parents must have one entry per dictionary column");
  }
  if (!columns.allFinite()) {
    throw Error(Errc::NonFinite, "dictionary contains non-finite entries");
  }
  for (int j = 0; j < n; ++j) {
    bool self = false;
    for (int r : omega[j]) {
      if (r < 0 || r >= total()) {
        throw Error(Errc::OutOfRange, "omega[" + std::to_string(j) + "] references column " +
                                          std::to_string(r));
      }
      if (r == j) self = true;
    }
    if (!self) {
      throw Error(Errc::OutOfRange, "omega[" + std::to_string(j) + "] must contain j itself");
    }
  }
}

AugmentedDictionary AugmentedDictionary::plain(const DataMatrix& x) {
  AugmentedDictionary d;
  d.columns = x.values;
  d.n = x.count();
  d.omega.resize(d.n);
  for (int j = 0; j < d.n; ++j) d.omega[j] = {j};
  d.parents.assign(d.n, {});
  return d;
}

int LabelState::labeled_count() const {
  int c = 0;
  for (int v : given)
    if (v >= 0) ++c;
  return c;
}

Matrix LabelState::y() const {
  Matrix m = Matrix::Zero(n(), p);
  for (int j = 0; j < n(); ++j)
    if (given[j] >= 0) m(j, given[j]) = 1.0;
  return m;
}

Matrix LabelState::ytilde() const {
  Matrix m = Matrix::Zero(n_total, p);
  m.topRows(n()) = y();
  return m;
}

std::vector<std::uint8_t> LabelState::labeled_mask() const {
  std::vector<std::uint8_t> mask(n_total, 0);
  for (int j = 0; j < n(); ++j)
    if (given[j] >= 0) mask[j] = 1;
  return mask;
}

LabelState LabelState::make(std::vector<int> given, int p, int n_total) {
  if (p < 1) throw Error(Errc::OutOfRange, "p must be positive");
  if (n_total < static_cast<int>(given.size())) {
    throw Error(Errc::LengthMismatch, "n_total smaller than label vector");
  }
  for (std::size_t j = 0; j < given.size(); ++j) {
    if (given[j] < -1 || given[j] >= p) {
      throw Error(Errc::OutOfRange, "label " + std::to_string(given[j]) + " at position " +
                                        std::to_string(j) + " outside [-1," + std::to_string(p) + ")");
    }
  }
  LabelState s;
  s.given = std::move(given);
  s.p = p;
  s.n_total = n_total;
  s.f = s.ytilde();
  return s;
}

}  // namespace augsc
