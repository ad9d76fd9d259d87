#include "augsc/synth.hpp"

#include "augsc/rng.hpp"

#include <cmath>

namespace augsc {

std::vector<Matrix> make_bases(double theta_deg) {
  if (!(theta_deg > 0.0) || !(theta_deg <= 90.0)) {
    throw Error(Errc::OutOfRange, "theta must lie in (0, 90] degrees");
  }
  double t = theta_deg * M_PI / 180.0;
  double c = std::cos(t), s = std::sin(t);
  Matrix i3 = Matrix::Identity(3, 3);
  Matrix u1(6, 3), u2(6, 3), u3(6, 3);
  u1 << c * i3, s * i3;
  u2 << c * i3, -s * i3;
  u3 << i3, Matrix::Zero(3, 3);
  return {u1, u2, u3};
}

SyntheticSample sample_union(const std::vector<Matrix>& bases, int n_per, std::uint64_t seed) {
  if (bases.empty()) throw Error(Errc::InvalidDimension, "need at least one basis");
  if (n_per < 1) throw Error(Errc::OutOfRange, "n_per must be positive");
  const int d = static_cast<int>(bases[0].rows());
  for (const Matrix& u : bases) {
    if (u.rows() != d) throw Error(Errc::InvalidDimension, "bases must share ambient dimension");
  }
  const int p = static_cast<int>(bases.size());
  Matrix x(d, p * n_per);
  std::vector<int> labels(static_cast<std::size_t>(p) * n_per);
  Rng rng(seed);
  int col = 0;
  for (int j = 0; j < p; ++j) {
    const Matrix& u = bases[j];
    Vector g(u.cols());
    for (int i = 0; i < n_per; ++i, ++col) {
      for (int r = 0; r < g.size(); ++r) g(r) = rng.gaussian();
      Vector v = u * g;
      double nrm = v.norm();
      if (nrm < 1e-12) {
        throw Error(Errc::NearZeroColumn, "degenerate draw at column " + std::to_string(col));
      }
      x.col(col) = v / nrm;
      labels[col] = j;
    }
  }
  return {DataMatrix(std::move(x), true), std::move(labels)};
}

}  // namespace augsc
