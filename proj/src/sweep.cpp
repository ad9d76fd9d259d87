#include "augsc/sweep.hpp"

#include "augsc/augment.hpp"
#include "augsc/rng.hpp"

#include <algorithm>
#include <cmath>

namespace augsc {

std::vector<int> pick_labels(const std::vector<int>& truth, int p, int count, std::uint64_t seed) {
  const int n = static_cast<int>(truth.size());
  if (p < 1) throw Error(Errc::InvalidDimension, "cluster count must be positive");
  if (count < 1) throw Error(Errc::InsufficientLabels, "need at least one label per cluster");
  std::vector<std::vector<int>> members(static_cast<std::size_t>(p));
  for (int i = 0; i < n; ++i) {
    if (truth[i] < 0 || truth[i] >= p)
      throw Error(Errc::OutOfRange, "truth label " + std::to_string(truth[i]) + " outside [0, " +
                                        std::to_string(p) + ")");
    members[static_cast<std::size_t>(truth[i])].push_back(i);
  }
  std::vector<int> given(static_cast<std::size_t>(n), -1);
  Rng rng(seed);
  for (int c = 0; c < p; ++c) {
    auto& pool = members[static_cast<std::size_t>(c)];
    if (static_cast<int>(pool.size()) < count)
      throw Error(Errc::InsufficientLabels, "cluster " + std::to_string(c) + " has only " +
                                                std::to_string(pool.size()) + " samples, need " +
                                                std::to_string(count));
    // Partial Fisher-Yates: the first `count` slots become the labeled picks.
    for (int t = 0; t < count; ++t) {
      const std::size_t swap_with =
          static_cast<std::size_t>(t) + rng.uniform_index(pool.size() - static_cast<std::size_t>(t));
      std::swap(pool[static_cast<std::size_t>(t)], pool[swap_with]);
      given[static_cast<std::size_t>(pool[static_cast<std::size_t>(t)])] = c;
    }
  }
  return given;
}

SemiRunStats run_synthetic_semi(const SyntheticSemiSetup& setup, std::uint64_t seed) {
  if (setup.n_per < 2) throw Error(Errc::InvalidDimension, "need at least two samples per subspace");
  if (setup.n_aug < 0) throw Error(Errc::OutOfRange, "augmentation count cannot be negative");

  const auto bases = make_bases(setup.theta_deg);
  const int p = static_cast<int>(bases.size());
  const SyntheticSample sample = sample_union(bases, setup.n_per, derive_seed(seed, 0));
  const std::vector<int> given =
      pick_labels(sample.labels, p, setup.labels_per_cluster, derive_seed(seed, 1));

  AugmentedDictionary dict;
  if (setup.n_aug > 0) {
    InterpolationSpec spec;
    spec.n_a = setup.n_aug;
    spec.q = setup.labels_per_cluster;
    spec.weights = WeightMode::Gaussian;
    spec.seed = derive_seed(seed, 2);
    dict = linear_interpolation_augment(sample.x, given, p, spec);
  } else {
    dict = AugmentedDictionary::plain(sample.x);
  }

  const LabelState ls = LabelState::make(given, p, dict.total());
  const SemiResult res = run_as_sc(sample.x, dict, ls, setup.solver, &sample.labels);

  SemiRunStats stats;
  stats.outer_iterations = res.outer_iterations;
  stats.outer_converged = res.converged;
  stats.free_nodes = res.free_nodes;
  for (const OuterTrace& row : res.trace) {
    stats.err_per_iter.push_back(row.err);
    stats.err_f_per_iter.push_back(row.err_f);
    stats.admm_all_converged = stats.admm_all_converged && row.admm_converged;
    stats.max_admm_residual = std::max(stats.max_admm_residual, row.admm_residual);
    stats.final_rel_f = row.rel_f;
    if (stats.zero_iteration < 0 && row.err <= 1e-12) stats.zero_iteration = row.iteration;
    if (stats.zero_iteration_f < 0 && row.err_f <= 1e-12) stats.zero_iteration_f = row.iteration;
  }
  if (!stats.err_per_iter.empty()) {
    stats.first_err = stats.err_per_iter.front();
    stats.final_err = stats.err_per_iter.back();
    stats.final_err_f = stats.err_f_per_iter.back();
  }
  return stats;
}

}  // namespace augsc
