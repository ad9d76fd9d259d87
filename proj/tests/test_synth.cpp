#include "augsc/synth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace augsc;

namespace {

template <typename Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an augsc::Error");
  return Errc::UsageError;
}

}  // namespace

TEST_CASE("bases are orthonormal with the advertised pairwise angles") {
  for (double theta : {10.0, 15.0, 20.0, 45.0, 90.0}) {
    const auto bases = make_bases(theta);
    REQUIRE(bases.size() == 3);
    for (const Matrix& u : bases) {
      REQUIRE(u.rows() == 6);
      REQUIRE(u.cols() == 3);
      CHECK((u.transpose() * u - Matrix::Identity(3, 3)).norm() < 1e-12);
    }
    const double rad = theta * M_PI / 180.0;
    // The tilted pair each meet the axis-aligned block at theta; they meet
    // each other at twice that angle. Principal cosines are the singular
    // values of the basis cross-gram.
    auto principal_cosines = [](const Matrix& a, const Matrix& b) {
      return Eigen::JacobiSVD<Matrix>(a.transpose() * b).singularValues();
    };
    const Vector s13 = principal_cosines(bases[0], bases[2]);
    const Vector s23 = principal_cosines(bases[1], bases[2]);
    const Vector s12 = principal_cosines(bases[0], bases[1]);
    for (int i = 0; i < 3; ++i) {
      CHECK(s13(i) == doctest::Approx(std::cos(rad)).epsilon(1e-12));
      CHECK(s23(i) == doctest::Approx(std::cos(rad)).epsilon(1e-12));
      CHECK(s12(i) == doctest::Approx(std::abs(std::cos(2 * rad))).epsilon(1e-10));
    }
  }
}

TEST_CASE("basis angle domain is validated") {
  CHECK(code_of([] { make_bases(0.0); }) == Errc::OutOfRange);
  CHECK(code_of([] { make_bases(-5.0); }) == Errc::OutOfRange);
  CHECK(code_of([] { make_bases(90.001); }) == Errc::OutOfRange);
  CHECK_NOTHROW(make_bases(90.0));
}

TEST_CASE("samples are unit norm, correctly labeled, and inside their subspace") {
  const auto bases = make_bases(20.0);
  const SyntheticSample s = sample_union(bases, 25, 7);
  REQUIRE(s.x.count() == 75);
  REQUIRE(s.x.dim() == 6);
  REQUIRE(s.labels.size() == 75);
  for (int j = 0; j < 75; ++j) {
    CHECK(s.x.values.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
    const int c = s.labels[static_cast<std::size_t>(j)];
    CHECK(c == j / 25);
    // Projection onto the true basis recovers the sample exactly.
    const Vector proj = bases[static_cast<std::size_t>(c)] *
                        (bases[static_cast<std::size_t>(c)].transpose() * s.x.values.col(j));
    CHECK((proj - s.x.values.col(j)).norm() < 1e-12);
  }
}

TEST_CASE("sampling is seed deterministic") {
  const auto bases = make_bases(15.0);
  const SyntheticSample a = sample_union(bases, 10, 42);
  const SyntheticSample b = sample_union(bases, 10, 42);
  const SyntheticSample c = sample_union(bases, 10, 43);
  CHECK((a.x.values - b.x.values).norm() == 0.0);
  CHECK((a.x.values - c.x.values).norm() > 1e-3);
}

TEST_CASE("sampling validates its inputs") {
  const auto bases = make_bases(15.0);
  CHECK(code_of([&] { sample_union(bases, 0, 1); }) == Errc::OutOfRange);
  CHECK(code_of([] { sample_union({}, 5, 1); }) == Errc::InvalidDimension);
  std::vector<Matrix> mixed = {Matrix::Identity(6, 3), Matrix::Identity(4, 2)};
  CHECK(code_of([&] { sample_union(mixed, 5, 1); }) == Errc::InvalidDimension);
}

TEST_CASE("closer subspaces produce higher cross-cluster coherence") {
  // The tilted subspaces meet the axis-aligned one at exactly theta, so the
  // worst inner product against cluster 2 shrinks as theta grows. (The
  // tilted pair meets at 2 theta and is deliberately left out: that angle
  // folds back past 90 degrees.)
  auto max_cross = [](double theta) {
    const auto bases = make_bases(theta);
    const SyntheticSample s = sample_union(bases, 20, 5);
    double worst = 0.0;
    for (int i = 0; i < s.x.count(); ++i)
      for (int j = 0; j < s.x.count(); ++j) {
        const int li = s.labels[static_cast<std::size_t>(i)];
        const int lj = s.labels[static_cast<std::size_t>(j)];
        if (li == lj || (li != 2 && lj != 2)) continue;
        worst = std::max(worst, std::abs(s.x.values.col(i).dot(s.x.values.col(j))));
      }
    return worst;
  };
  CHECK(max_cross(10.0) > max_cross(30.0));
  CHECK(max_cross(30.0) > max_cross(80.0));
}
