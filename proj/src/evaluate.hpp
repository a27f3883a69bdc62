#pragma once

#include <cstdint>
#include <vector>

#include "dense_tensor.hpp"

namespace ttc {

/// Samples f(x) = sin(x/4) * cos(x^2) at prod(dims) uniformly spaced points
/// on [0,1] (endpoints included) and reshapes to dims in layout order.
DenseTensor gen_sin_tensor(std::vector<Index> dims);

/// Binary mask with exactly round((1 - missing_rate) * prod(dims)) ones
/// placed uniformly at random without replacement; deterministic in seed.
DenseTensor gen_random_mask(std::vector<Index> dims, double missing_rate,
                            std::uint64_t seed);

/// Completion composition Z = (1-W)*X + W*Y: observed entries copied from y,
/// missing entries filled from x.
DenseTensor compose(const DenseTensor& y, const DenseTensor& w,
                    const DenseTensor& x);

/// Relative squared error ||ref - z||_F / ||ref||_F.
double rse(const DenseTensor& ref, const DenseTensor& z);

/// Completed tensor together with its quality metrics and run stats.
struct CompletionResult {
  DenseTensor z;
  double rse = 0.0;
  double psnr = 0.0;  // +inf when z == truth
  double elapsed_seconds = 0.0;
  std::int64_t iterations = 0;
};

/// Composes Z = (1-W)*X + W*Y and scores it against the ground truth.
CompletionResult evaluate_completion(const DenseTensor& truth,
                                     const DenseTensor& w,
                                     const DenseTensor& x,
                                     double elapsed_seconds,
                                     std::int64_t iterations);

/// 10*log10(255^2 / MSE) after affinely rescaling both tensors by the map
/// that takes ref's value range onto [0, 255].  Returns +infinity when z
/// equals ref.
double psnr(const DenseTensor& ref, const DenseTensor& z);

struct NormalizeResult {
  DenseTensor tensor;
  double lo = 0.0;
  double hi = 1.0;
};

/// Affine map of the full value range onto [0,1]; errors on constant input.
NormalizeResult normalize(const DenseTensor& t);

/// Same, but the range is taken over the entries where mask == 1 (what a
/// completion run can actually see); the map is applied to every entry.
NormalizeResult normalize_masked(const DenseTensor& t, const DenseTensor& mask);

/// Exact inverse of the normalize map: t * (hi - lo) + lo.
DenseTensor denormalize(const DenseTensor& t, double lo, double hi);

}  // namespace ttc
