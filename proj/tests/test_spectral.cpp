#include "augsc/spectral.hpp"

#include "augsc/metrics.hpp"
#include "augsc/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <functional>
#include <vector>

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

// Two dense blocks {0,1,2} and {3,4,5} with unit weights and no cross mass.
Matrix two_block_affinity() {
  Matrix af = Matrix::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (i != j && (i < 3) == (j < 3)) af(i, j) = 1.0;
    }
  }
  return af;
}

}  // namespace

TEST_CASE("collapse folds derived rows onto their original sample") {
  Matrix ctilde(5, 2);
  ctilde << 1.0, -2.0,
            0.5,  0.0,
           -3.0,  4.0,
            0.0,  1.5,
            2.0, -1.0;
  const std::vector<std::vector<int>> omega = {{0, 2}, {1, 3, 4}};
  const Matrix cf = collapse(ctilde, omega);
  REQUIRE(cf.rows() == 2);
  REQUIRE(cf.cols() == 2);
  CHECK(cf(0, 0) == doctest::Approx(1.0 + 3.0));
  CHECK(cf(0, 1) == doctest::Approx(2.0 + 4.0));
  CHECK(cf(1, 0) == doctest::Approx(0.5 + 0.0 + 2.0));
  CHECK(cf(1, 1) == doctest::Approx(0.0 + 1.5 + 1.0));

  CHECK(code_of([&] { collapse(ctilde, {{0}}); }) == Errc::LengthMismatch);
  CHECK(code_of([&] { collapse(ctilde, {{0}, {7}}); }) == Errc::OutOfRange);
}

TEST_CASE("block-diagonal affinities cluster perfectly and deterministically") {
  const Matrix af = two_block_affinity();
  const std::vector<int> truth = {0, 0, 0, 1, 1, 1};
  const ClusteringResult r1 = spectral_cluster(af, 2, 42);
  CHECK(error_rate(truth, r1.labels) == 0.0);
  CHECK(r1.zero_degree.empty());
  CHECK(r1.embedding.rows() == 6);
  CHECK(r1.embedding.cols() == 2);
  const ClusteringResult r2 = spectral_cluster(af, 2, 42);
  CHECK(r1.labels == r2.labels);
  CHECK(r1.best_restart == r2.best_restart);
}

TEST_CASE("relabeling the nodes relabels the clusters and nothing else") {
  const Matrix af = two_block_affinity();
  const std::vector<int> truth = {0, 0, 0, 1, 1, 1};
  const std::vector<int> perm = {3, 0, 4, 1, 5, 2};  // new index of each node
  Matrix paf(6, 6);
  std::vector<int> ptruth(6);
  for (int i = 0; i < 6; ++i) {
    ptruth[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = truth[static_cast<std::size_t>(i)];
    for (int j = 0; j < 6; ++j) {
      paf(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = af(i, j);
    }
  }
  const ClusteringResult r = spectral_cluster(paf, 2, 7);
  CHECK(error_rate(ptruth, r.labels) == 0.0);
}

TEST_CASE("isolated nodes are reported as zero-degree") {
  Matrix af = Matrix::Zero(7, 7);
  af.topLeftCorner(6, 6) = two_block_affinity();
  const ClusteringResult r = spectral_cluster(af, 2, 3);
  REQUIRE(r.zero_degree.size() == 1);
  CHECK(r.zero_degree[0] == 6);
  CHECK(static_cast<int>(r.labels.size()) == 7);
}

TEST_CASE("affinity validation rejects bad inputs") {
  Matrix af = two_block_affinity();
  Matrix asym = af;
  asym(0, 1) += 1.0;
  CHECK(code_of([&] { spectral_cluster(asym, 2, 1); }) == Errc::OutOfRange);
  Matrix neg = af;
  neg(0, 1) = neg(1, 0) = -0.5;
  CHECK(code_of([&] { spectral_cluster(neg, 2, 1); }) == Errc::OutOfRange);
  CHECK(code_of([&] { spectral_cluster(af, 0, 1); }) == Errc::OutOfRange);
  CHECK(code_of([&] { spectral_cluster(af, 7, 1); }) == Errc::OutOfRange);
  CHECK(code_of([&] { spectral_cluster(af, 2, 1, 0); }) == Errc::OutOfRange);
  CHECK(code_of([&] { spectral_cluster(Matrix::Zero(3, 4), 2, 1); }) == Errc::InvalidDimension);
}

TEST_CASE("kmeans recovers separated planar blobs") {
  Rng rng(19);
  const int per = 20;
  Matrix pts(3 * per, 2);
  std::vector<int> truth(static_cast<std::size_t>(3 * per));
  const double cx[3] = {0.0, 10.0, 0.0};
  const double cy[3] = {0.0, 0.0, 10.0};
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < per; ++i) {
      const int row = c * per + i;
      pts(row, 0) = cx[c] + 0.3 * rng.gaussian();
      pts(row, 1) = cy[c] + 0.3 * rng.gaussian();
      truth[static_cast<std::size_t>(row)] = c;
    }
  }
  const KmeansResult km = kmeans(pts, 3, 5);
  CHECK(error_rate(truth, km.labels) == 0.0);
  CHECK(km.inertia < 3 * per * 0.3 * 0.3 * 2 * 4.0);
  const KmeansResult again = kmeans(pts, 3, 5);
  CHECK(km.labels == again.labels);
  CHECK(km.inertia == doctest::Approx(again.inertia));
  CHECK(code_of([&] { kmeans(pts, 0, 1); }) == Errc::OutOfRange);
  CHECK(code_of([&] { kmeans(pts, 61, 1); }) == Errc::OutOfRange);
}

TEST_CASE("kmeans survives duplicate points and k equal to n") {
  Matrix pts(4, 1);
  pts << 1.0, 1.0, 5.0, 5.0;
  const KmeansResult km = kmeans(pts, 2, 11);
  CHECK(error_rate({0, 0, 1, 1}, km.labels) == 0.0);
  const KmeansResult all = kmeans(pts, 4, 11);
  CHECK(static_cast<int>(all.labels.size()) == 4);
  CHECK(all.inertia >= 0.0);
}
