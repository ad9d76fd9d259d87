#include "augsc/augment.hpp"

#include "augsc/parallel.hpp"
#include "augsc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace augsc {

namespace {

// Bilinear lookup treating everything outside the h x w grid as zero.
double sample_zero_fill(const double* img, int h, int w, double y, double x) {
  if (y <= -1.0 || y >= double(h) || x <= -1.0 || x >= double(w)) return 0.0;
  int y0 = static_cast<int>(std::floor(y));
  int x0 = static_cast<int>(std::floor(x));
  double fy = y - y0, fx = x - x0;
  auto at = [&](int r, int c) -> double {
    if (r < 0 || r >= h || c < 0 || c >= w) return 0.0;
    return img[static_cast<std::size_t>(r) * w + c];
  };
  return (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x0 + 1)) +
         fy * ((1 - fx) * at(y0 + 1, x0) + fx * at(y0 + 1, x0 + 1));
}

void warp_column(const double* src, double* dst, const ImageGeometry& g, double m00, double m01,
                 double m10, double m11) {
  // dst(r,c) samples src at center + M * (dest - center).
  double cy = 0.5 * (g.height - 1), cx = 0.5 * (g.width - 1);
  for (int r = 0; r < g.height; ++r) {
    double dy = r - cy;
    for (int c = 0; c < g.width; ++c) {
      double dx = c - cx;
      double sx = cx + m00 * dx + m01 * dy;
      double sy = cy + m10 * dx + m11 * dy;
      dst[static_cast<std::size_t>(r) * g.width + c] = sample_zero_fill(src, g.height, g.width, sy, sx);
    }
  }
}

DataMatrix transform_all(const DataMatrix& x, const ImageGeometry& geom, TransformKind kind,
                         double param) {
  geom.check(x.dim());
  if (kind == TransformKind::Scale && !(param > 0.0)) {
    throw Error(Errc::OutOfRange, "scale factor must be positive");
  }
  Matrix out(x.dim(), x.count());
  const Matrix& in = x.values;
  parallel_for(x.count(), [&](int j) {
    detail::apply_transform_column(kind, param, in.col(j).data(), out.col(j).data(), geom);
  });
  return DataMatrix(std::move(out), false);
}

const char* kind_name(TransformKind k) {
  switch (k) {
    case TransformKind::Flip: return "flip";
    case TransformKind::Rotate: return "rotate";
    case TransformKind::Scale: return "scale";
  }
  return "?";
}

}  // namespace

namespace detail {

void apply_transform_column(TransformKind kind, double param, const double* src, double* dst,
                            const ImageGeometry& g) {
  switch (kind) {
    case TransformKind::Flip:
      for (int r = 0; r < g.height; ++r)
        for (int c = 0; c < g.width; ++c)
          dst[static_cast<std::size_t>(r) * g.width + c] = src[static_cast<std::size_t>(r) * g.width + (g.width - 1 - c)];
      break;
    case TransformKind::Rotate: {
      double t = param * M_PI / 180.0;
      double ct = std::cos(t), st = std::sin(t);
      // Inverse rotation of the destination offset locates the source pixel.
      warp_column(src, dst, g, ct, st, -st, ct);
      break;
    }
    case TransformKind::Scale: {
      double inv = 1.0 / param;
      warp_column(src, dst, g, inv, 0.0, 0.0, inv);
      break;
    }
  }
}

std::vector<TransformBlock> draw_blocks(const std::vector<AugmentStrategy>& strategies, int reps,
                                        int n, std::uint64_t seed) {
  std::vector<TransformBlock> blocks;
  Rng rng(seed);
  for (const AugmentStrategy& s : strategies) {
    int b = (s.kind == TransformKind::Flip) ? 1 : reps;
    for (int r = 0; r < b; ++r) {
      TransformBlock blk;
      blk.kind = s.kind;
      blk.params.resize(static_cast<std::size_t>(n), 0.0);
      if (s.kind != TransformKind::Flip) {
        for (int j = 0; j < n; ++j) blk.params[static_cast<std::size_t>(j)] = rng.uniform(s.lo, s.hi);
      }
      blocks.push_back(std::move(blk));
    }
  }
  return blocks;
}

std::string transform_tag(TransformKind kind, double param) {
  if (kind == TransformKind::Flip) return "flip";
  char tag[48];
  std::snprintf(tag, sizeof tag, "%s(%.6g)", kind_name(kind), param);
  return tag;
}

}  // namespace detail

void ImageGeometry::check(int dim) const {
  if (height < 1 || width < 1 || static_cast<std::size_t>(height) * width != static_cast<std::size_t>(dim)) {
    throw Error(Errc::GeometryMismatch, "geometry " + std::to_string(height) + "x" +
                                            std::to_string(width) + " does not match dimension " +
                                            std::to_string(dim));
  }
}

DataMatrix flip_lr(const DataMatrix& x, const ImageGeometry& geom) {
  return transform_all(x, geom, TransformKind::Flip, 0.0);
}

DataMatrix rotate_image(const DataMatrix& x, const ImageGeometry& geom, double angle_deg) {
  return transform_all(x, geom, TransformKind::Rotate, angle_deg);
}

DataMatrix scale_image(const DataMatrix& x, const ImageGeometry& geom, double factor) {
  return transform_all(x, geom, TransformKind::Scale, factor);
}

AugmentedDictionary random_instance_augment(const DataMatrix& x, const ImageGeometry& geom,
                                            const std::vector<AugmentStrategy>& strategies,
                                            int reps, std::uint64_t seed, bool normalize) {
  geom.check(x.dim());
  if (strategies.empty()) throw Error(Errc::UsageError, "need at least one strategy");
  if (reps < 1) throw Error(Errc::OutOfRange, "reps must be positive");
  for (const AugmentStrategy& s : strategies) {
    if (s.kind != TransformKind::Flip && !(s.lo <= s.hi)) {
      throw Error(Errc::OutOfRange, "strategy range must satisfy lo <= hi");
    }
    if (s.kind == TransformKind::Scale && !(s.lo > 0.0)) {
      throw Error(Errc::OutOfRange, "scale range must be positive");
    }
  }
  const int n = x.count();

  // One block per flip strategy, `reps` blocks per rotate/scale strategy.
  std::vector<detail::TransformBlock> blocks = detail::draw_blocks(strategies, reps, n, seed);

  const int m = static_cast<int>(blocks.size());
  const int total = n * (m + 1);
  AugmentedDictionary dict;
  dict.columns.resize(x.dim(), total);
  dict.columns.leftCols(n) = x.values;
  dict.n = n;
  dict.omega.assign(static_cast<std::size_t>(n), {});
  dict.parents.assign(static_cast<std::size_t>(total), {});
  dict.strategy_tags.resize(static_cast<std::size_t>(n) * m);

  for (int j = 0; j < n; ++j) {
    dict.omega[static_cast<std::size_t>(j)].reserve(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) dict.omega[static_cast<std::size_t>(j)].push_back(j + k * n);
  }

  Matrix& cols = dict.columns;
  const Matrix& in = x.values;
  parallel_for(n * m, [&](int idx) {
    int k = idx / n;  // block
    int j = idx % n;  // source column
    int col = n * (k + 1) + j;
    const detail::TransformBlock& blk = blocks[static_cast<std::size_t>(k)];
    detail::apply_transform_column(blk.kind, blk.params[static_cast<std::size_t>(j)], in.col(j).data(),
                                   cols.col(col).data(), geom);
    if (normalize) {
      double nrm = cols.col(col).norm();
      if (nrm < 1e-12) {
        throw Error(Errc::NearZeroColumn, "augmented column " + std::to_string(col) +
                                              " vanished under " + kind_name(blk.kind));
      }
      cols.col(col) /= nrm;
    }
    dict.parents[static_cast<std::size_t>(col)] = {j};
    dict.strategy_tags[static_cast<std::size_t>(col - n)] = detail::transform_tag(blk.kind, blk.params[static_cast<std::size_t>(j)]);
  });

  dict.validate();
  return dict;
}

Vector interpolate_column(const Matrix& x, const std::vector<int>& parents, const Vector& weights) {
  if (static_cast<Eigen::Index>(parents.size()) != weights.size()) {
    throw Error(Errc::LengthMismatch, "parents and weights differ in length");
  }
  Vector v = Vector::Zero(x.rows());
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i] < 0 || parents[i] >= x.cols()) {
      throw Error(Errc::OutOfRange, "parent index " + std::to_string(parents[i]) + " out of range");
    }
    v += weights(static_cast<Eigen::Index>(i)) * x.col(parents[i]);
  }
  return v;
}

AugmentedDictionary linear_interpolation_augment(const DataMatrix& x,
                                                 const std::vector<int>& labels, int p,
                                                 const InterpolationSpec& spec) {
  const int n = x.count();
  if (static_cast<int>(labels.size()) != n) {
    throw Error(Errc::LengthMismatch, "labels length differs from sample count");
  }
  if (p < 1) throw Error(Errc::OutOfRange, "p must be positive");
  if (spec.n_a < 1) throw Error(Errc::OutOfRange, "n_a must be positive");
  if (spec.q < 2) throw Error(Errc::OutOfRange, "q must be at least 2");

  std::vector<std::vector<int>> labeled(static_cast<std::size_t>(p));
  for (int j = 0; j < n; ++j) {
    if (labels[static_cast<std::size_t>(j)] >= p) {
      throw Error(Errc::OutOfRange, "label " + std::to_string(labels[static_cast<std::size_t>(j)]) +
                                        " outside [-1," + std::to_string(p) + ")");
    }
    if (labels[static_cast<std::size_t>(j)] >= 0) labeled[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])].push_back(j);
  }
  for (int c = 0; c < p; ++c) {
    if (static_cast<int>(labeled[static_cast<std::size_t>(c)].size()) < spec.q) {
      throw Error(Errc::InsufficientLabels,
                  "cluster " + std::to_string(c) + " has " +
                      std::to_string(labeled[static_cast<std::size_t>(c)].size()) + " labeled samples, needs " +
                      std::to_string(spec.q));
    }
  }

  const int total = n + p * spec.n_a;
  AugmentedDictionary dict;
  dict.columns.resize(x.dim(), total);
  dict.columns.leftCols(n) = x.values;
  dict.n = n;
  dict.omega.assign(static_cast<std::size_t>(n), {});
  for (int j = 0; j < n; ++j) dict.omega[static_cast<std::size_t>(j)] = {j};
  dict.parents.assign(static_cast<std::size_t>(total), {});
  dict.strategy_tags.assign(static_cast<std::size_t>(total - n), "interp");

  // All draws happen up front in cluster-major column order so the layout is
  // a pure function of the seed.
  Rng rng(spec.seed);
  std::vector<std::vector<int>> chosen(static_cast<std::size_t>(total - n));
  std::vector<Vector> weights(static_cast<std::size_t>(total - n));
  for (int c = 0; c < p; ++c) {
    std::vector<int> pool = labeled[static_cast<std::size_t>(c)];
    for (int t = 0; t < spec.n_a; ++t) {
      int idx = c * spec.n_a + t;
      std::vector<int> pick(pool);
      for (int i = 0; i < spec.q; ++i) {
        int swap = i + static_cast<int>(rng.uniform_index(std::uint64_t(pick.size() - i)));
        std::swap(pick[static_cast<std::size_t>(i)], pick[static_cast<std::size_t>(swap)]);
      }
      pick.resize(static_cast<std::size_t>(spec.q));
      std::sort(pick.begin(), pick.end());
      Vector w(spec.q);
      if (spec.weights == WeightMode::Gaussian) {
        for (int i = 0; i < spec.q; ++i) w(i) = rng.gaussian();
      } else {
        double sum = 0.0;
        do {
          sum = 0.0;
          for (int i = 0; i < spec.q; ++i) {
            w(i) = rng.uniform01();
            sum += w(i);
          }
        } while (sum < 1e-9);
        w /= sum;
      }
      chosen[static_cast<std::size_t>(idx)] = std::move(pick);
      weights[static_cast<std::size_t>(idx)] = std::move(w);
    }
  }

  Matrix& cols = dict.columns;
  const Matrix& in = x.values;
  parallel_for(total - n, [&](int idx) {
    Vector v = interpolate_column(in, chosen[static_cast<std::size_t>(idx)], weights[static_cast<std::size_t>(idx)]);
    if (spec.normalize) {
      double nrm = v.norm();
      if (nrm < 1e-12) {
        throw Error(Errc::NearZeroColumn,
                    "interpolated column " + std::to_string(n + idx) + " vanished");
      }
      v /= nrm;
    }
    cols.col(n + idx) = v;
    dict.parents[static_cast<std::size_t>(n + idx)] = chosen[static_cast<std::size_t>(idx)];
  });

  dict.validate();
  return dict;
}

std::vector<std::vector<int>> cannot_link_sets(const AugmentedDictionary& dict,
                                               const LabelState& labels) {
  dict.validate();
  const int n = dict.n;
  if (labels.n() != n) throw Error(Errc::LengthMismatch, "label vector does not match dictionary");
  if (labels.n_total != dict.total()) {
    throw Error(Errc::LengthMismatch, "label state n_total does not match dictionary");
  }

  std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
  for (int i = n; i < dict.total(); ++i) {
    for (int parent : dict.parents[static_cast<std::size_t>(i)]) {
      if (parent < 0 || parent >= n) {
        throw Error(Errc::OutOfRange, "augmented column " + std::to_string(i) +
                                          " references parent " + std::to_string(parent));
      }
      children[static_cast<std::size_t>(parent)].push_back(i);
    }
  }

  std::vector<int> labeled;
  for (int j = 0; j < n; ++j)
    if (labels.given[static_cast<std::size_t>(j)] >= 0) labeled.push_back(j);

  std::vector<std::vector<int>> phi(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::set<int> s(dict.omega[static_cast<std::size_t>(j)].begin(), dict.omega[static_cast<std::size_t>(j)].end());
    s.insert(children[static_cast<std::size_t>(j)].begin(), children[static_cast<std::size_t>(j)].end());
    if (labels.given[static_cast<std::size_t>(j)] >= 0) {
      for (int i : labeled)
        if (labels.given[static_cast<std::size_t>(i)] != labels.given[static_cast<std::size_t>(j)]) s.insert(i);
    }
    phi[static_cast<std::size_t>(j)].assign(s.begin(), s.end());
  }
  return phi;
}

}  // namespace augsc
