#pragma once

#include "augsc/types.hpp"

#include <vector>

namespace augsc {

// Minimum-cost assignment on a square cost matrix; returns the column picked
// for each row. O(n^3), deterministic.
std::vector<int> hungarian_min_assign(const Matrix& cost);

// Clustering error in percent: 100 * (1 - best-matching accuracy), where the
// match between predicted and true cluster ids is optimized by assignment on
// the confusion matrix (equivalent to minimizing over all id permutations).
double error_rate(const std::vector<int>& truth, const std::vector<int>& pred);

// Normalized mutual information in percent with natural logarithms,
// I(t,p)/sqrt(H(t)H(p)). Degenerate cases: both sides single-cluster -> 100,
// exactly one side single-cluster -> 0.
double nmi(const std::vector<int>& truth, const std::vector<int>& pred);

struct PreservingRate {
  double value = 0.0;  // percent, averaged over columns
  int zero_columns = 0;  // columns whose total off-diagonal mass vanished
};

// Fraction of each column's absolute coefficient mass that stays inside the
// column's own cluster, averaged over columns of the collapsed matrix.
PreservingRate subspace_preserving_rate(const Matrix& cf, const std::vector<int>& labels);

// Sum over path lengths 1..hops of the Frobenius mass of affinity-graph walks
// connecting differently-labeled nodes: sum_h || W .* A^h ||_F with
// W(i,j) = 1 iff labels differ.
double path_strength(const Matrix& af, const std::vector<int>& labels, int hops,
                     std::vector<double>* per_hop = nullptr);

}  // namespace augsc
