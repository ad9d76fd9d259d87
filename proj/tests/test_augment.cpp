#include "augsc/augment.hpp"

#include "augsc/reference.hpp"
#include "augsc/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <set>

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

// Smooth radially symmetric blob; symmetric images expose resampling bugs
// less, so the blob is offset from the center.
DataMatrix blob_images(int side, int count, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(side * side, count);
  for (int j = 0; j < count; ++j) {
    const double cy = side / 2.0 + rng.uniform(-2.0, 2.0);
    const double cx = side / 2.0 + rng.uniform(-2.0, 2.0);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        const double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
        m(r * side + c, j) = std::exp(-d2 / (side * 0.8));
      }
  }
  return DataMatrix(std::move(m));
}

}  // namespace

TEST_CASE("flip reverses each pixel row and is an involution") {
  const int side = 6;
  const DataMatrix x = blob_images(side, 3, 1);
  const ImageGeometry geom{side, side};
  const DataMatrix f = flip_lr(x, geom);
  for (int j = 0; j < 3; ++j)
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c)
        CHECK(f.values(r * side + c, j) == x.values(r * side + (side - 1 - c), j));
  const DataMatrix ff = flip_lr(f, geom);
  CHECK((ff.values - x.values).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("rotation by zero is identity and small angles roughly round trip") {
  const int side = 16;
  const DataMatrix x = blob_images(side, 2, 2);
  const ImageGeometry geom{side, side};
  CHECK((rotate_image(x, geom, 0.0).values - x.values).lpNorm<Eigen::Infinity>() < 1e-12);
  const DataMatrix once = rotate_image(x, geom, 10.0);
  const DataMatrix back = rotate_image(once, geom, -10.0);
  // Two bilinear resamplings blur; the round trip only holds loosely.
  const double scale = x.values.lpNorm<Eigen::Infinity>();
  CHECK((back.values - x.values).lpNorm<Eigen::Infinity>() < 0.08 * scale);
}

TEST_CASE("rotation moves mass the way the angle says") {
  // A single bright pixel right of center must move up under a positive
  // (counterclockwise, y up) quarter turn or down under the opposite; either
  // convention keeps the four quarter-turn positions distinct. Verify 90 and
  // 180 degree turns map the off-center pixel onto the pixel grid exactly.
  const int side = 9;
  Matrix img = Matrix::Zero(side * side, 2);
  const int center = side / 2;
  img(center * side + (center + 3), 0) = 1.0;  // (row 4, col 7)
  img(center * side + center, 1) = 1.0;        // second column keeps n >= 2
  const DataMatrix x(img);
  const ImageGeometry geom{side, side};
  const Matrix r180 = rotate_image(x, geom, 180.0).values;
  CHECK(r180(center * side + (center - 3), 0) == doctest::Approx(1.0).epsilon(1e-9));
  const Matrix r90 = rotate_image(x, geom, 90.0).values;
  const Matrix r270 = rotate_image(x, geom, 270.0).values;
  const bool up_then_down = r90((center - 3) * side + center, 0) > 0.99 &&
                            r270((center + 3) * side + center, 0) > 0.99;
  const bool down_then_up = r90((center + 3) * side + center, 0) > 0.99 &&
                            r270((center - 3) * side + center, 0) > 0.99;
  CHECK((up_then_down || down_then_up));
}

TEST_CASE("scaling preserves the center pixel and shrinks support when zooming out") {
  const int side = 15;
  const DataMatrix x = blob_images(side, 2, 3);
  const ImageGeometry geom{side, side};
  CHECK((scale_image(x, geom, 1.0).values - x.values).lpNorm<Eigen::Infinity>() < 1e-12);
  const Matrix small = scale_image(x, geom, 0.5).values;
  // Zooming out concentrates the blob: corners go to zero fill.
  CHECK(small(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(small.maxCoeff() > 0.5 * x.values.maxCoeff());
  const DataMatrix round = scale_image(DataMatrix(scale_image(x, geom, 0.8).values), geom, 1.25);
  CHECK((round.values - x.values).lpNorm<Eigen::Infinity>() < 0.15 * x.values.maxCoeff());
}

TEST_CASE("geometry mismatch is rejected") {
  const DataMatrix x = blob_images(4, 2, 4);
  CHECK(code_of([&] { flip_lr(x, ImageGeometry{5, 4}); }) == Errc::GeometryMismatch);
  CHECK(code_of([&] { rotate_image(x, ImageGeometry{3, 3}, 5.0); }) == Errc::GeometryMismatch);
}

TEST_CASE("instance augmentation lays out blocks with correct ownership") {
  const int side = 8, n = 5;
  const DataMatrix x = blob_images(side, n, 5);
  const ImageGeometry geom{side, side};
  const std::vector<AugmentStrategy> strategies = {
      {TransformKind::Flip, 0, 0},
      {TransformKind::Rotate, -10, 10},
      {TransformKind::Scale, 0.9, 1.1},
  };
  const int reps = 2;
  const AugmentedDictionary dict = random_instance_augment(x, geom, strategies, reps, 9);

  // One flip block plus reps blocks for each of rotate and scale.
  const int blocks = 1 + 2 * reps;
  REQUIRE(dict.n == n);
  REQUIRE(dict.total() == n * (1 + blocks));
  REQUIRE(dict.omega.size() == static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto& om = dict.omega[static_cast<std::size_t>(j)];
    REQUIRE(static_cast<int>(om.size()) == 1 + blocks);
    CHECK(om.front() == j);
    for (int b = 0; b < blocks; ++b) {
      const int col = n * (1 + b) + j;
      CHECK(std::find(om.begin(), om.end(), col) != om.end());
      CHECK(dict.parents[static_cast<std::size_t>(col)] == std::vector<int>{j});
      // Augmented columns are unit normalized.
      CHECK(dict.columns.col(col).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  // One tag per augmented column.
  CHECK(dict.strategy_tags.size() == static_cast<std::size_t>(n * blocks));
  CHECK_NOTHROW(dict.validate());

  // The flip block is exactly the flip transform scaled to unit norm.
  for (int j = 0; j < n; ++j) {
    Vector flipped = flip_lr(x, geom).values.col(j);
    flipped /= flipped.norm();
    CHECK((dict.columns.col(n + j) - flipped).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("instance augmentation parameters are seed stable and within range") {
  const std::vector<AugmentStrategy> strategies = {
      {TransformKind::Rotate, -15, 15},
      {TransformKind::Scale, 0.85, 1.15},
  };
  const auto blocks_a = detail::draw_blocks(strategies, 3, 7, 123);
  const auto blocks_b = detail::draw_blocks(strategies, 3, 7, 123);
  REQUIRE(blocks_a.size() == 6);
  for (std::size_t b = 0; b < blocks_a.size(); ++b) {
    CHECK(blocks_a[b].kind == blocks_b[b].kind);
    REQUIRE(blocks_a[b].params.size() == 7);
    for (std::size_t j = 0; j < 7; ++j) {
      CHECK(blocks_a[b].params[j] == blocks_b[b].params[j]);
      const bool rotate = blocks_a[b].kind == TransformKind::Rotate;
      const double lo = rotate ? -15 : 0.85, hi = rotate ? 15 : 1.15;
      CHECK(blocks_a[b].params[j] >= lo);
      CHECK(blocks_a[b].params[j] <= hi);
    }
  }
}

TEST_CASE("serial instance augmentation matches the parallel builder bit for bit") {
  const int side = 8, n = 6;
  const DataMatrix x = blob_images(side, n, 6);
  const ImageGeometry geom{side, side};
  const std::vector<AugmentStrategy> strategies = {
      {TransformKind::Flip, 0, 0},
      {TransformKind::Rotate, -12, 12},
      {TransformKind::Scale, 0.9, 1.1},
  };
  const AugmentedDictionary par = random_instance_augment(x, geom, strategies, 2, 77);
  const AugmentedDictionary ser = reference::instance_augment_serial(x, geom, strategies, 2, 77);
  REQUIRE(par.columns.size() == ser.columns.size());
  CHECK(std::memcmp(par.columns.data(), ser.columns.data(),
                    sizeof(double) * static_cast<std::size_t>(par.columns.size())) == 0);
  CHECK(par.omega == ser.omega);
  CHECK(par.strategy_tags == ser.strategy_tags);
}

TEST_CASE("interpolated columns combine exactly q in-cluster labeled parents") {
  const Matrix pts = oracles::gaussian_matrix(4, 12, 8);
  DataMatrix x(pts);
  normalize_columns(x);
  // Clusters 0/1/2 own columns 0-3/4-7/8-11; label two per cluster.
  std::vector<int> labels(12, -1);
  labels[0] = 0;
  labels[2] = 0;
  labels[5] = 1;
  labels[7] = 1;
  labels[8] = 2;
  labels[11] = 2;

  InterpolationSpec spec;
  spec.n_a = 4;
  spec.q = 2;
  spec.seed = 31;
  const AugmentedDictionary dict = linear_interpolation_augment(x, labels, 3, spec);
  REQUIRE(dict.n == 12);
  REQUIRE(dict.total() == 12 + 3 * 4);
  CHECK_NOTHROW(dict.validate());
  for (int a = 0; a < 12; ++a) {
    const int col = 12 + a;
    const int cluster = a / 4;
    const auto& par = dict.parents[static_cast<std::size_t>(col)];
    REQUIRE(par.size() == 2);
    for (int parent : par) CHECK(labels[static_cast<std::size_t>(parent)] == cluster);
    CHECK(par[0] != par[1]);
    CHECK(dict.columns.col(col).norm() == doctest::Approx(1.0).epsilon(1e-12));
    // The column lies in the span of its parents.
    Matrix basis(4, 2);
    basis.col(0) = x.values.col(par[0]);
    basis.col(1) = x.values.col(par[1]);
    const Vector coef = basis.colPivHouseholderQr().solve(dict.columns.col(col));
    CHECK((basis * coef - dict.columns.col(col)).norm() < 1e-10);
  }
  // Original omegas stay singletons in interpolation mode.
  for (int j = 0; j < 12; ++j)
    CHECK(dict.omega[static_cast<std::size_t>(j)] == std::vector<int>{j});
}

TEST_CASE("uniform weights are a convex-like l1 combination, gaussian weights are raw") {
  const Vector w_parents = Vector::LinSpaced(3, 1.0, 3.0);
  Matrix pts(2, 3);
  pts << 1, 0, 1, 0, 1, 1;
  const Vector mix = interpolate_column(pts, {0, 1, 2}, w_parents);
  CHECK(mix(0) == doctest::Approx(1.0 * 1 + 0.0 * 2 + 1.0 * 3));
  CHECK(mix(1) == doctest::Approx(0.0 * 1 + 1.0 * 2 + 1.0 * 3));

  // UniformL1 weights must sum to one per augmented column; raw gaussian
  // weights must not be systematically normalized. Recover the weights by
  // solving against the parent baseline (normalize=false keeps raw scale).
  const Matrix base = oracles::gaussian_matrix(6, 9, 14);
  DataMatrix x(base);
  std::vector<int> labels(9, 0);
  InterpolationSpec spec;
  spec.n_a = 24;
  spec.q = 3;
  spec.normalize = false;
  spec.seed = 5;

  spec.weights = WeightMode::UniformL1;
  const AugmentedDictionary uni = linear_interpolation_augment(x, labels, 1, spec);
  spec.weights = WeightMode::Gaussian;
  const AugmentedDictionary gau = linear_interpolation_augment(x, labels, 1, spec);
  int sum_one = 0, negative = 0;
  for (int a = 0; a < spec.n_a; ++a) {
    auto recover = [&](const AugmentedDictionary& d) {
      const auto& par = d.parents[static_cast<std::size_t>(9 + a)];
      Matrix basis(6, static_cast<Eigen::Index>(par.size()));
      for (std::size_t i = 0; i < par.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = base.col(par[i]);
      return Vector(basis.colPivHouseholderQr().solve(d.columns.col(9 + a)));
    };
    const Vector wu = recover(uni);
    CHECK(wu.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(wu.minCoeff() >= -1e-12);
    const Vector wg = recover(gau);
    if (std::abs(wg.sum() - 1.0) < 1e-6) ++sum_one;
    if (wg.minCoeff() < 0) ++negative;
  }
  CHECK(sum_one == 0);  // raw gaussian weights do not land on the simplex
  CHECK(negative > 4);  // and a fair share must be negative
}

TEST_CASE("interpolation validates labels and cluster sizes") {
  const Matrix base = oracles::gaussian_matrix(3, 6, 21);
  DataMatrix x(base);
  InterpolationSpec spec;
  spec.n_a = 2;
  spec.q = 2;
  std::vector<int> labels = {0, 0, 1, -1, -1, -1};
  CHECK(code_of([&] { linear_interpolation_augment(x, labels, 2, spec); }) ==
        Errc::InsufficientLabels);  // cluster 1 has one labeled sample < q
  labels[3] = 1;
  CHECK_NOTHROW(linear_interpolation_augment(x, labels, 2, spec));
  labels[3] = 7;
  CHECK(code_of([&] { linear_interpolation_augment(x, labels, 2, spec); }) == Errc::OutOfRange);
  labels[3] = 1;
  std::vector<int> short_labels = {0, 0, 1};
  CHECK(code_of([&] { linear_interpolation_augment(x, short_labels, 2, spec); }) ==
        Errc::LengthMismatch);
  spec.q = 1;
  CHECK(code_of([&] { linear_interpolation_augment(x, labels, 2, spec); }) == Errc::OutOfRange);
}

TEST_CASE("cannot-link sets combine ownership, children, and label conflicts") {
  const Matrix base = oracles::gaussian_matrix(4, 6, 33);
  DataMatrix x(base);
  std::vector<int> labels = {0, 0, 1, 1, -1, -1};
  InterpolationSpec spec;
  spec.n_a = 2;
  spec.q = 2;
  spec.seed = 3;
  const AugmentedDictionary dict = linear_interpolation_augment(x, labels, 2, spec);
  LabelState ls = LabelState::make(labels, 2, dict.total());
  const auto phi = cannot_link_sets(dict, ls);
  REQUIRE(phi.size() == 6);

  for (int j = 0; j < 6; ++j) {
    const std::set<int> s(phi[static_cast<std::size_t>(j)].begin(),
                          phi[static_cast<std::size_t>(j)].end());
    CHECK(s.count(j) == 1);  // self exclusion always present
    if (labels[static_cast<std::size_t>(j)] >= 0) {
      // Labeled columns exclude all labeled samples of the other cluster.
      for (int i = 0; i < 6; ++i) {
        if (labels[static_cast<std::size_t>(i)] >= 0 &&
            labels[static_cast<std::size_t>(i)] != labels[static_cast<std::size_t>(j)]) {
          CHECK(s.count(i) == 1);
        }
      }
      // And every augmented child they contributed to.
      for (int col = 6; col < dict.total(); ++col) {
        const auto& par = dict.parents[static_cast<std::size_t>(col)];
        if (std::find(par.begin(), par.end(), j) != par.end()) CHECK(s.count(col) == 1);
      }
    } else {
      // Unlabeled columns exclude only themselves.
      CHECK(s.size() == 1);
    }
  }
}
