#pragma once

#include "augsc/augment.hpp"
#include "augsc/solvers.hpp"
#include "augsc/types.hpp"

#include <cstdint>
#include <vector>

namespace augsc::reference {

// Serial counterparts of the OpenMP kernels. They perform the same per-item
// arithmetic in a plain loop, so their outputs must match the parallel
// versions bit for bit; tests and the kernel benchmark rely on that.

Matrix collapse_serial(const Matrix& ctilde, const std::vector<std::vector<int>>& omega);

std::vector<std::vector<int>> knn_all_serial(const AugmentedDictionary& dict, int k);

AugmentedDictionary instance_augment_serial(const DataMatrix& x, const ImageGeometry& geom,
                                            const std::vector<AugmentStrategy>& strategies,
                                            int reps, std::uint64_t seed, bool normalize = true);

// Serial driver over the shared per-column solver used by the l1
// neighborhood path (label-free).
CoefficientMatrix solve_knn_l1_serial(const DataMatrix& x, const AugmentedDictionary& dict,
                                      const SolverConfig& cfg,
                                      const std::vector<std::vector<int>>& exclusions);

}  // namespace augsc::reference
