#include "evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ttc {

DenseTensor gen_sin_tensor(std::vector<Index> dims) {
  DenseTensor t(std::move(dims));
  const Index total = t.size();
  for (Index i = 0; i < total; ++i) {
    const double x =
        total > 1 ? static_cast<double>(i) / static_cast<double>(total - 1)
                  : 0.0;
    t[i] = std::sin(x / 4.0) * std::cos(x * x);
  }
  return t;
}

DenseTensor gen_random_mask(std::vector<Index> dims, double missing_rate,
                            std::uint64_t seed) {
  require(missing_rate >= 0.0 && missing_rate <= 1.0, Errc::invalid_argument,
          "missing rate must be in [0,1]");
  DenseTensor w(std::move(dims));
  const Index total = w.size();
  const Index observed = std::llround((1.0 - missing_rate) * total);

  // Partial Fisher-Yates: the first `observed` entries of the shuffle are the
  // observed positions.
  std::vector<Index> pos(static_cast<std::size_t>(total));
  std::iota(pos.begin(), pos.end(), Index{0});
  std::mt19937_64 rng(seed);
  for (Index k = 0; k < observed; ++k) {
    std::uniform_int_distribution<Index> pick(k, total - 1);
    std::swap(pos[k], pos[pick(rng)]);
    w[pos[k]] = 1.0;
  }
  return w;
}

DenseTensor compose(const DenseTensor& y, const DenseTensor& w,
                    const DenseTensor& x) {
  validate_weight_tensor(y, w);
  require(x.same_dims(y), Errc::shape_mismatch, "compose: dims differ");
  DenseTensor z(y.dims());
  for (Index i = 0; i < z.size(); ++i) z[i] = w[i] == 1.0 ? y[i] : x[i];
  return z;
}

double rse(const DenseTensor& ref, const DenseTensor& z) {
  require(ref.same_dims(z), Errc::shape_mismatch, "rse: dims differ");
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < ref.size(); ++i) {
    const double d = ref[i] - z[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  require(den > 0.0, Errc::invalid_argument, "rse: reference norm is zero");
  return std::sqrt(num) / std::sqrt(den);
}

CompletionResult evaluate_completion(const DenseTensor& truth,
                                     const DenseTensor& w,
                                     const DenseTensor& x,
                                     double elapsed_seconds,
                                     std::int64_t iterations) {
  DenseTensor z = compose(truth, w, x);
  const double r = rse(truth, z);
  const double p = psnr(truth, z);
  return CompletionResult{std::move(z), r, p, elapsed_seconds, iterations};
}

double psnr(const DenseTensor& ref, const DenseTensor& z) {
  require(ref.same_dims(z), Errc::shape_mismatch, "psnr: dims differ");
  double err_sq = 0.0;
  for (Index i = 0; i < ref.size(); ++i) {
    const double d = ref[i] - z[i];
    err_sq += d * d;
  }
  if (err_sq == 0.0) return std::numeric_limits<double>::infinity();

  const auto [lo_it, hi_it] =
      std::minmax_element(ref.values().begin(), ref.values().end());
  const double range = *hi_it - *lo_it;
  require(range > 0.0, Errc::invalid_argument,
          "psnr: reference has zero value range");
  const double scale = 255.0 / range;
  const double mse = err_sq * scale * scale / static_cast<double>(ref.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

NormalizeResult normalize_with_range(const DenseTensor& t, double lo,
                                     double hi) {
  require(hi > lo, Errc::invalid_argument,
          "normalize: constant data has no range");
  DenseTensor out(t.dims());
  const double inv = 1.0 / (hi - lo);
  for (Index i = 0; i < t.size(); ++i) out[i] = (t[i] - lo) * inv;
  return NormalizeResult{std::move(out), lo, hi};
}

}  // namespace

NormalizeResult normalize(const DenseTensor& t) {
  const auto [lo_it, hi_it] =
      std::minmax_element(t.values().begin(), t.values().end());
  return normalize_with_range(t, *lo_it, *hi_it);
}

NormalizeResult normalize_masked(const DenseTensor& t,
                                 const DenseTensor& mask) {
  validate_weight_tensor(t, mask);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < t.size(); ++i) {
    if (mask[i] == 1.0) {
      lo = std::min(lo, t[i]);
      hi = std::max(hi, t[i]);
    }
  }
  require(std::isfinite(lo), Errc::invalid_argument,
          "normalize: mask has no observed entries");
  return normalize_with_range(t, lo, hi);
}

DenseTensor denormalize(const DenseTensor& t, double lo, double hi) {
  DenseTensor out(t.dims());
  for (Index i = 0; i < t.size(); ++i) out[i] = t[i] * (hi - lo) + lo;
  return out;
}

}  // namespace ttc
