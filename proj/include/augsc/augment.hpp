#pragma once

#include "augsc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace augsc {

// Row-major image shape for columns that hold flattened images.
struct ImageGeometry {
  int height = 0;
  int width = 0;

  void check(int dim) const;
};

enum class TransformKind { Flip, Rotate, Scale };

// One augmentation strategy. Flip ignores the range; Rotate draws angles in
// degrees from [lo, hi]; Scale draws zoom factors from [lo, hi].
struct AugmentStrategy {
  TransformKind kind = TransformKind::Flip;
  double lo = 0.0;
  double hi = 0.0;
};

// Per-column image transforms. Rotation and scaling resample bilinearly about
// the image center and fill pixels that map outside the source with zero.
DataMatrix flip_lr(const DataMatrix& x, const ImageGeometry& geom);
DataMatrix rotate_image(const DataMatrix& x, const ImageGeometry& geom, double angle_deg);
DataMatrix scale_image(const DataMatrix& x, const ImageGeometry& geom, double factor);

// Builds [X | X_hat] where X_hat consists of one block per flip strategy and
// `reps` blocks per rotate/scale strategy; block k's column j is the block's
// transform applied to X(:,j) with a parameter drawn per column. omega[j]
// collects j and all of its transformed copies. Augmented columns are
// rescaled to unit norm unless normalize is false.
AugmentedDictionary random_instance_augment(const DataMatrix& x, const ImageGeometry& geom,
                                            const std::vector<AugmentStrategy>& strategies,
                                            int reps, std::uint64_t seed, bool normalize = true);

enum class WeightMode { UniformL1, Gaussian };

// Interpolation recipe: per cluster, n_a new columns, each a random linear
// combination of q randomly chosen labeled samples of that cluster.
struct InterpolationSpec {
  int n_a = 0;
  int q = 2;
  WeightMode weights = WeightMode::Gaussian;
  std::uint64_t seed = 0;
  bool normalize = true;
};

// Exposed for direct verification of the combination step.
Vector interpolate_column(const Matrix& x, const std::vector<int>& parents,
                          const Vector& weights);

// Builds [X | X_bar] with p blocks of n_a interpolated columns in cluster
// order. Requires every cluster to have at least spec.q labeled samples.
// omega[j] = {j}; parent lists record the combined samples.
AugmentedDictionary linear_interpolation_augment(const DataMatrix& x,
                                                 const std::vector<int>& labels, int p,
                                                 const InterpolationSpec& spec);

// phi[j]: dictionary rows forced to zero in column j of a semi-supervised
// solve. Contains omega[j], every augmented column derived from j, and every
// labeled sample whose label differs from j's (when j is labeled).
std::vector<std::vector<int>> cannot_link_sets(const AugmentedDictionary& dict,
                                               const LabelState& labels);

namespace detail {

// Shared between the parallel builder and its serial reference so both see
// identical parameter draws and per-column arithmetic.
struct TransformBlock {
  TransformKind kind;
  std::vector<double> params;  // one per column; unused for flips
};

std::vector<TransformBlock> draw_blocks(const std::vector<AugmentStrategy>& strategies, int reps,
                                        int n, std::uint64_t seed);

void apply_transform_column(TransformKind kind, double param, const double* src, double* dst,
                            const ImageGeometry& geom);

std::string transform_tag(TransformKind kind, double param);

}  // namespace detail

}  // namespace augsc
