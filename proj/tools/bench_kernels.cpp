#include "augsc/augment.hpp"
#include "augsc/parallel.hpp"
#include "augsc/reference.hpp"
#include "augsc/rng.hpp"
#include "augsc/solvers.hpp"
#include "augsc/spectral.hpp"
#include "augsc/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

using namespace augsc;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
  std::printf("%-18s %10.1f ms %10.1f ms %8.2fx   max|diff| %.3g\n", name, serial_ms, parallel_ms,
              serial_ms / std::max(parallel_ms, 1e-9), max_diff);
}

}  // namespace

int main(int argc, char** argv) {
  int n = 160;
  int side = 24;
  if (argc > 1) n = std::max(8, std::atoi(argv[1]));
  if (argc > 2) side = std::max(8, std::atoi(argv[2]));
  const int d = side * side;

  // Smooth random images so the transforms do meaningful interpolation work.
  Rng rng(42);
  Matrix imgs(d, n);
  for (int j = 0; j < n; ++j) {
    const double cx = rng.uniform(side * 0.25, side * 0.75);
    const double cy = rng.uniform(side * 0.25, side * 0.75);
    const double s = rng.uniform(2.0, 6.0);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        const double dx = (c - cx) / s, dy = (r - cy) / s;
        imgs(r * side + c, j) = std::exp(-0.5 * (dx * dx + dy * dy));
      }
  }
  const DataMatrix x = normalize_columns(DataMatrix{imgs});
  const ImageGeometry geom{side, side};
  const std::vector<AugmentStrategy> strategies = {
      {TransformKind::Flip, 0, 0},
      {TransformKind::Rotate, -15.0, 15.0},
      {TransformKind::Scale, 0.85, 1.15},
  };

  std::printf("benchmarking with n=%d images of %dx%d, %d thread(s)\n", n, side, side,
              max_threads());
  std::printf("%-18s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  AugmentedDictionary dict_par, dict_ser;
  const double aug_par = time_ms([&] {
    dict_par = random_instance_augment(x, geom, strategies, 2, 7);
  });
  const double aug_ser = time_ms([&] {
    dict_ser = reference::instance_augment_serial(x, geom, strategies, 2, 7);
  });
  report("instance_augment", aug_ser, aug_par,
         (dict_par.columns - dict_ser.columns).cwiseAbs().maxCoeff());

  const int k = std::min(40, dict_par.total() - static_cast<int>(dict_par.omega[0].size()) - 1);
  std::vector<std::vector<int>> knn_par, knn_ser;
  const double knn_par_ms = time_ms([&] { knn_par = knn_all(dict_par, k); });
  const double knn_ser_ms = time_ms([&] { knn_ser = reference::knn_all_serial(dict_par, k); });
  double knn_diff = 0.0;
  for (std::size_t j = 0; j < knn_par.size(); ++j)
    if (knn_par[j] != knn_ser[j]) knn_diff = 1.0;
  report("knn_select", knn_ser_ms, knn_par_ms, knn_diff);

  SolverConfig cfg;
  cfg.regularizer = Regularizer::L1;
  cfg.k = k;
  CoefficientMatrix sol_par, sol_ser;
  const double solve_par = time_ms([&] { sol_par = solve_unsupervised(x, dict_par, cfg); });
  const double solve_ser = time_ms([&] {
    sol_ser = reference::solve_knn_l1_serial(x, dict_par, cfg, dict_par.omega);
  });
  report("ak_solve_l1", solve_ser, solve_par,
         (sol_par.ctilde - sol_ser.ctilde).cwiseAbs().maxCoeff());

  Matrix col_par, col_ser;
  const double col_par_ms = time_ms([&] { col_par = collapse(sol_par.ctilde, dict_par.omega); });
  const double col_ser_ms = time_ms([&] {
    col_ser = reference::collapse_serial(sol_par.ctilde, dict_par.omega);
  });
  report("collapse", col_ser_ms, col_par_ms, (col_par - col_ser).cwiseAbs().maxCoeff());

  return 0;
}
