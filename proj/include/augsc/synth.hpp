#pragma once

#include "augsc/types.hpp"

#include <cstdint>
#include <vector>

namespace augsc {

// Three 3-dimensional subspaces of R^6 whose pairwise angle is controlled by
// theta: two symmetric tilts of the same frame plus one axis-aligned block.
// Columns of each basis are orthonormal.
std::vector<Matrix> make_bases(double theta_deg);

struct SyntheticSample {
  DataMatrix x;             // unit columns, subspace-major order
  std::vector<int> labels;  // ground-truth subspace index per column
};

// Draws n_per unit-norm samples per subspace with standard normal weights.
// Same seed reproduces the matrix bit for bit.
SyntheticSample sample_union(const std::vector<Matrix>& bases, int n_per, std::uint64_t seed);

}  // namespace augsc
