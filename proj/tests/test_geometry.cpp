#include "augsc/geometry.hpp"

#include "augsc/rng.hpp"
#include "augsc/synth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

using namespace augsc;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

bool contains_vertex(const std::vector<Vector>& verts, double x, double y) {
  for (const Vector& v : verts) {
    if (std::abs(v(0) - x) < 1e-9 && std::abs(v(1) - y) < 1e-9) return true;
  }
  return false;
}

// Support radius of {w : |points' w| <= 1} along direction u: how far the ray
// t*u stays feasible.
double feasible_radius(const Matrix& points, const Vector& u) {
  double h = (points.transpose() * u).cwiseAbs().maxCoeff();
  return 1.0 / h;
}

}  // namespace

TEST_CASE("polar vertices of the axis square and the hexagon are analytic") {
  Matrix square(2, 2);
  square << 1, 0,
            0, 1;
  const std::vector<Vector> sq = polar_vertices(square, true);
  REQUIRE(sq.size() == 4);
  CHECK(contains_vertex(sq, 1, 1));
  CHECK(contains_vertex(sq, 1, -1));
  CHECK(contains_vertex(sq, -1, 1));
  CHECK(contains_vertex(sq, -1, -1));
  CHECK(inradius(square, true) == doctest::Approx(1.0 / std::sqrt(2.0)));

  Matrix hex(2, 3);
  for (int k = 0; k < 3; ++k) {
    hex(0, k) = std::cos(k * kPi / 3.0);
    hex(1, k) = std::sin(k * kPi / 3.0);
  }
  const std::vector<Vector> hv = polar_vertices(hex, true);
  CHECK(hv.size() == 6);
  for (const Vector& v : hv) CHECK(v.norm() == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(inradius(hex, true) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("one-sided polytopes enumerate their corners or report unboundedness") {
  Matrix tri(2, 3);
  tri << 1, 0, -1,
         0, 1, -1;
  const std::vector<Vector> tv = polar_vertices(tri, false);
  REQUIRE(tv.size() == 3);
  CHECK(contains_vertex(tv, 1, 1));
  CHECK(contains_vertex(tv, 1, -2));
  CHECK(contains_vertex(tv, -2, 1));
  CHECK(inradius(tri, false) == doctest::Approx(1.0 / std::sqrt(5.0)));

  Matrix open(2, 2);
  open << 1, 0,
          0, 1;  // {w1 <= 1, w2 <= 1} is unbounded below
  CHECK(code_of([&] { polar_vertices(open, false); }) == Errc::DegenerateHull);
}

TEST_CASE("inradius matches a dense direction sweep on random planar hulls") {
  for (int trial = 0; trial < 10; ++trial) {
    Matrix pts = oracles::gaussian_matrix(2, 6, 900 + static_cast<std::uint64_t>(trial));
    for (int j = 0; j < pts.cols(); ++j) pts.col(j).normalize();
    const double r = inradius(pts, true);
    double r_mc = 1e300;
    const int grid = 20000;
    for (int g = 0; g < grid; ++g) {
      const double ang = g * kPi / grid;  // half turn covers the symmetric hull
      Vector u(2);
      u << std::cos(ang), std::sin(ang);
      r_mc = std::min(r_mc, (pts.transpose() * u).cwiseAbs().maxCoeff());
    }
    CHECK(r <= r_mc + 1e-12);
    CHECK(r_mc - r <= 1e-3);
  }
}

TEST_CASE("dual point maximizes over the polar set and breaks ties by norm") {
  Matrix square(2, 2);
  square << 1, 0,
            0, 1;
  Vector a(2);
  a << 1, 0;
  const DualPoint dp = dual_point(square, a);
  // The optimal face is the segment from (1,-1) to (1,1); its least-norm
  // point is (1,0).
  CHECK(dp.objective == doctest::Approx(1.0));
  CHECK(dp.w(0) == doctest::Approx(1.0));
  CHECK(dp.w(1) == doctest::Approx(0.0).epsilon(1e-9));

  // Dense sweep oracle on random instances.
  for (int trial = 0; trial < 8; ++trial) {
    Matrix cols = oracles::gaussian_matrix(2, 5, 300 + static_cast<std::uint64_t>(trial));
    for (int j = 0; j < cols.cols(); ++j) cols.col(j).normalize();
    const Vector obj = oracles::gaussian_matrix(2, 2, 350 + static_cast<std::uint64_t>(trial)).col(0);
    const DualPoint got = dual_point(cols, obj);
    double best = -1e300;
    const int grid = 20000;
    for (int g = 0; g < 2 * grid; ++g) {
      const double ang = g * kPi / grid;
      Vector u(2);
      u << std::cos(ang), std::sin(ang);
      best = std::max(best, obj.dot(u) * feasible_radius(cols, u));
    }
    CHECK(got.objective == doctest::Approx(best).epsilon(1e-3));
    // Feasibility and attainment of the reported point.
    CHECK((cols.transpose() * got.w).cwiseAbs().maxCoeff() <= 1.0 + 1e-8);
    CHECK(obj.dot(got.w) == doctest::Approx(got.objective));
  }

  Matrix line(2, 1);
  line << 1, 0;
  Vector out_of_span(2);
  out_of_span << 0, 1;
  CHECK(code_of([&] { dual_point(line, out_of_span); }) == Errc::UnboundedDual);
  CHECK(code_of([&] { dual_point(square, Vector::Ones(3)); }) == Errc::LengthMismatch);
}

TEST_CASE("minimum l1 representation equals its dual maximum") {
  for (int trial = 0; trial < 10; ++trial) {
    Matrix d = oracles::gaussian_matrix(3, 6, 1200 + static_cast<std::uint64_t>(trial));
    for (int j = 0; j < d.cols(); ++j) d.col(j).normalize();
    // A target inside the span keeps both programs finite.
    Vector c0 = Vector::Zero(6);
    c0(0) = 0.7;
    c0(3) = -0.4;
    c0(5) = 0.2;
    const Vector x = d * c0;
    Vector c_best;
    const double primal = oracles::exact_l1_equality(d, x, &c_best);
    REQUIRE(primal < 1e300);
    CHECK((d * c_best - x).norm() < 1e-8);
    const double dual = dual_point(d, x).objective;
    CHECK(primal == doctest::Approx(dual).epsilon(1e-6));
  }
}

TEST_CASE("orthogonal clusters have vanishing incoherence and pass the condition") {
  // Two orthogonal planes in R^4 with 6 unit samples each.
  Rng rng(71);
  Matrix vals(4, 12);
  std::vector<int> labels(12);
  for (int j = 0; j < 12; ++j) {
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    vals.col(j).setZero();
    const int base = (j < 6) ? 0 : 2;
    vals(base, j) = std::cos(ang);
    vals(base + 1, j) = std::sin(ang);
    labels[static_cast<std::size_t>(j)] = j < 6 ? 0 : 1;
  }
  const DataMatrix x(vals, true);
  for (int j : {0, 3, 7, 11}) {
    CHECK(subspace_incoherence(x, labels, j) < 1e-10);
    const PreservingCheck pc = check_preserving_condition(x, labels, j);
    CHECK(pc.incoherence < 1e-10);
    CHECK(pc.inradius > 0.0);
    CHECK(pc.satisfied);
  }
}

TEST_CASE("incoherence respects the principal angle bound on tilted subspaces") {
  const double theta = 30.0;
  const auto bases = make_bases(theta);
  const SyntheticSample ds = sample_union(bases, 8, 77);
  // A unit dual direction inside one subspace cannot correlate with a unit
  // sample of another beyond the largest cross-subspace cosine.
  const double bound = std::cos(theta * kPi / 180.0) + 1e-9;
  for (int j = 0; j < ds.x.count(); j += 5) {
    const double mu = subspace_incoherence(ds.x, ds.labels, j);
    CHECK(mu >= 0.0);
    CHECK(mu <= bound);
    const PreservingCheck pc = check_preserving_condition(ds.x, ds.labels, j);
    CHECK(pc.satisfied == (pc.incoherence < pc.inradius));
    CHECK(pc.incoherence == doctest::Approx(mu));
  }
}

TEST_CASE("geometry diagnostics refuse oversized or degenerate inputs") {
  CHECK(code_of([&] { polar_vertices(Matrix::Identity(5, 5), true); }) == Errc::DeskScaleExceeded);
  CHECK(code_of([&] { polar_vertices(oracles::gaussian_matrix(2, 16, 1), true); }) ==
        Errc::DeskScaleExceeded);
  Matrix flat(2, 3);
  flat << 1, 2, -1,
          0, 0, 0;  // rank 1 in 2 dimensions
  CHECK(code_of([&] { polar_vertices(flat, true); }) == Errc::DegenerateHull);
  CHECK(code_of([&] { inradius(flat, true); }) == Errc::DegenerateHull);

  const DataMatrix x(oracles::gaussian_matrix(3, 6, 2), false);
  const std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  CHECK(code_of([&] { subspace_incoherence(x, {0, 1}, 0); }) == Errc::LengthMismatch);
  CHECK(code_of([&] { subspace_incoherence(x, labels, 9); }) == Errc::OutOfRange);
  CHECK(code_of([&] { subspace_incoherence(x, {-1, 0, 0, 1, 1, 1}, 0); }) == Errc::OutOfRange);
  CHECK(code_of([&] { subspace_incoherence(x, {0, 2, 2, 1, 1, 1}, 0); }) == Errc::DegenerateHull);
}
