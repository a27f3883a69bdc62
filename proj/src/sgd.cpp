#include "sgd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace ttc {

namespace {

using Clock = std::chrono::steady_clock;

// Exact observed-set objective 0.5 * sum_k (x_k - y_k)^2; used for logging.
double observed_objective(const TtCores& g, const ObservedSet& obs,
                          std::vector<Index>& idx_scratch) {
  double f = 0.0;
  for (Index k = 0; k < obs.count(); ++k) {
    obs.decode(obs.offset(k), idx_scratch);
    const double r = eval_entry(g, idx_scratch) - obs.value(k);
    f += r * r;
  }
  return 0.5 * f;
}

}  // namespace

ObservedSet::ObservedSet(std::vector<Index> dims, std::vector<Index> offsets,
                         std::vector<double> values)
    : dims_(std::move(dims)),
      offsets_(std::move(offsets)),
      values_(std::move(values)) {
  require(offsets_.size() == values_.size(), Errc::invalid_argument,
          "observed offsets/values length mismatch");
  const Index total = dim_product(dims_);
  for (Index off : offsets_)
    require(off >= 0 && off < total, Errc::invalid_argument,
            "observed offset out of range");
  for (double v : values_)
    require(std::isfinite(v), Errc::invalid_argument,
            "observed values must be finite");
  std::vector<Index> sorted = offsets_;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          Errc::invalid_argument, "observed offsets must be unique");
}

ObservedSet ObservedSet::from_dense(const DenseTensor& y,
                                    const DenseTensor& w) {
  validate_weight_tensor(y, w);
  std::vector<Index> offsets;
  std::vector<double> values;
  for (Index i = 0; i < y.size(); ++i) {
    if (w[i] == 1.0) {
      offsets.push_back(i);
      values.push_back(y[i]);
    }
  }
  return ObservedSet(y.dims(), std::move(offsets), std::move(values));
}

double ObservedSet::norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

void ObservedSet::decode(Index offset, std::span<Index> idx_out) const {
  for (std::size_t n = 0; n < dims_.size(); ++n) {
    idx_out[n] = offset % dims_[n];
    offset /= dims_[n];
  }
}

EntryGradient entry_gradient(const TtCores& g, std::span<const Index> idx,
                             double y_val) {
  const Index N = g.order();
  require(static_cast<Index>(idx.size()) == N, Errc::invalid_argument,
          "entry index order mismatch");

  // Partial slice products: before[n] = product of slices < n (row vector),
  // after[n] = product of slices > n (column vector).
  std::vector<Eigen::RowVectorXd> before(static_cast<std::size_t>(N) + 1);
  std::vector<Eigen::VectorXd> after(static_cast<std::size_t>(N) + 1);
  before[0] = Eigen::RowVectorXd::Ones(1);
  for (Index n = 0; n < N; ++n) before[n + 1] = before[n] * g.slice(n, idx[n]);
  after[N] = Eigen::VectorXd::Ones(1);
  for (Index n = N - 1; n >= 0; --n) after[n] = g.slice(n, idx[n]) * after[n + 1];

  EntryGradient out;
  out.residual = before[N](0) - y_val;
  out.slice_grads.reserve(static_cast<std::size_t>(N));
  for (Index n = 0; n < N; ++n)
    out.slice_grads.push_back(out.residual *
                              (before[n].transpose() * after[n + 1].transpose()));
  return out;
}

SolveResult run_sgd(const std::vector<Index>& dims, const ObservedSet& observed,
                    const SolverConfig& config) {
  require(dims == observed.dims(), Errc::shape_mismatch,
          "observed set dims mismatch");
  require(observed.count() > 0, Errc::invalid_argument, "empty observed set");
  require(config.max_iters >= 0, Errc::invalid_argument, "negative max_iters");

  const Index N = static_cast<Index>(dims.size());
  TtCores g = TtCores::random_init(dims, config.rank_chain(N), config.seed,
                                   config.init_scale);
  AdamState adam(g, config.adam_params());

  // Keep the sampling stream separate from the init stream so the same seed
  // controls both without coupling them.
  std::mt19937_64 sampler(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<Index> pick(0, observed.count() - 1);

  const double norm_yw = observed.norm();
  std::vector<Index> idx(static_cast<std::size_t>(N));

  SolveResult result{std::move(g), {}, 0, StopReason::max_iters};
  const auto t0 = Clock::now();
  std::int64_t last_logged = -1;
  const auto log_row = [&](std::int64_t iter) {
    if (iter == last_logged) return;
    const double f = observed_objective(result.model, observed, idx);
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    const double rse = norm_yw > 0.0 ? std::sqrt(2.0 * f) / norm_yw : 0.0;
    result.log.push_back({iter, f, rse, ms});
    last_logged = iter;
  };

  log_row(0);

  const Index epoch_len = observed.count();
  double epoch_sum = 0.0;
  double prev_epoch_mean = std::numeric_limits<double>::quiet_NaN();

  for (std::int64_t iter = 1; iter <= config.max_iters; ++iter) {
    const Index k = pick(sampler);
    observed.decode(observed.offset(k), idx);
    EntryGradient eg = entry_gradient(result.model, idx, observed.value(k));
    if (!std::isfinite(eg.residual))
      fail(Errc::diverged,
           "sample loss became non-finite at iteration " + std::to_string(iter));
    adam.update_slices(result.model, idx, eg.slice_grads);
    result.iterations = iter;
    epoch_sum += 0.5 * eg.residual * eg.residual;

    if (iter % config.log_every == 0) log_row(iter);

    if (iter % epoch_len == 0) {
      const double mean = epoch_sum / static_cast<double>(epoch_len);
      epoch_sum = 0.0;
      if (std::isfinite(prev_epoch_mean) &&
          std::abs(mean - prev_epoch_mean) <= config.tol) {
        result.stop = StopReason::tolerance;
        log_row(iter);
        return result;
      }
      prev_epoch_mean = mean;
    }
  }
  if (config.max_iters > 0) log_row(config.max_iters);
  return result;
}

SolveResult run_sgd(const DenseTensor& y, const DenseTensor& w,
                    const SolverConfig& config) {
  return run_sgd(y.dims(), ObservedSet::from_dense(y, w), config);
}

}  // namespace ttc
