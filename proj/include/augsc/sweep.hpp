#pragma once

#include "augsc/semi.hpp"
#include "augsc/synth.hpp"

#include <cstdint>
#include <vector>

namespace augsc {

struct SyntheticSemiSetup {
  double theta_deg = 10.0;   // angle between the tilted subspace pair
  int n_per = 20;            // samples drawn per subspace
  int labels_per_cluster = 2;
  int n_aug = 10;            // interpolated columns per cluster; 0 disables augmentation
  SolverConfig solver;
};

struct SemiRunStats {
  // Graph observable: spectral-clustering error (percent) of each iteration's
  // pruned affinity; the first entry is the label-free augmented baseline.
  std::vector<double> err_per_iter;
  // Soft-label observable: error of argmax F per iteration.
  std::vector<double> err_f_per_iter;
  double first_err = 100.0;
  double final_err = 100.0;
  double final_err_f = 100.0;
  int outer_iterations = 0;
  bool outer_converged = false;
  bool admm_all_converged = true;
  double max_admm_residual = 0.0;
  double final_rel_f = 0.0;
  int zero_iteration = -1;    // first iteration whose graph error hits 0, -1 if none
  int zero_iteration_f = -1;  // same for the argmax-F error
  int free_nodes = 0;
};

// Draws three tilted subspaces, samples and labels them, augments by
// within-cluster interpolation, and runs the semi-supervised solver. The
// seed determines the sample draw, the labeled subset, and the interpolation
// weights through independent substreams.
SemiRunStats run_synthetic_semi(const SyntheticSemiSetup& setup, std::uint64_t seed);

// Picks `count` labeled indices per cluster; every other entry is -1.
std::vector<int> pick_labels(const std::vector<int>& truth, int p, int count, std::uint64_t seed);

}  // namespace augsc
