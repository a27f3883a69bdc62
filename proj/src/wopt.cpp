#include "wopt.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace ttc {

namespace {

using MatView = Eigen::Map<const Matrix>;
using MutMatView = Eigen::Map<Matrix>;
using Clock = std::chrono::steady_clock;

DenseTensor masked_residual(const DenseTensor& y, const DenseTensor& w,
                            const TtCores& g, double* f_out) {
  DenseTensor e = full_reconstruct(g);
  double f = 0.0;
  for (Index i = 0; i < e.size(); ++i) {
    e[i] = w[i] * (e[i] - y[i]);
    f += e[i] * e[i];
  }
  *f_out = 0.5 * f;
  return e;
}

}  // namespace

double wopt_objective(const DenseTensor& y, const DenseTensor& w,
                      const TtCores& g) {
  require(y.same_dims(w), Errc::shape_mismatch, "objective: dims differ");
  require(y.dims() == g.dims(), Errc::shape_mismatch,
          "objective: model dims differ from data");
  double f = 0.0;
  masked_residual(y, w, g, &f);
  return f;
}

std::pair<double, CoreGrads> wopt_gradients(const DenseTensor& y,
                                            const DenseTensor& w,
                                            const TtCores& g) {
  require(y.same_dims(w), Errc::shape_mismatch, "gradients: dims differ");
  require(y.dims() == g.dims(), Errc::shape_mismatch,
          "gradients: model dims differ from data");
  const Index N = g.order();

  double f = 0.0;
  const DenseTensor e = masked_residual(y, w, g, &f);

  // Suffix merges G^{>n} for every n, each laid out R_n x (product of the
  // trailing extents).
  std::vector<std::vector<double>> suffix(static_cast<std::size_t>(N));
  std::vector<Index> suffix_cols(static_cast<std::size_t>(N));
  suffix[N - 1] = {1.0};
  suffix_cols[N - 1] = 1;
  for (Index n = N - 2; n >= 0; --n) {
    const Index k = n + 1;
    const Index rb = g.rank_before(k), ra = g.rank_after(k), ik = g.dims()[k];
    suffix[n].resize(static_cast<std::size_t>(rb * ik * suffix_cols[k]));
    MutMatView out(suffix[n].data(), rb * ik, suffix_cols[k]);
    out.noalias() = MatView(g.core(k).data(), rb * ik, ra) *
                    MatView(suffix[k].data(), ra, suffix_cols[k]);
    suffix_cols[n] = ik * suffix_cols[k];
  }

  CoreGrads grads(static_cast<std::size_t>(N));

  // Running prefix G^{<n} as (I_0*...*I_{n-1}) x R_{n-1}.  For each mode the
  // gradient is assembled by two products that contract the residual with
  // the prefix and the suffix; the result lands directly in core layout.
  std::vector<double> prefix{1.0};
  Index prefix_rows = 1;
  for (Index n = 0; n < N; ++n) {
    const Index rb = g.rank_before(n), ra = g.rank_after(n), in = g.dims()[n];
    const Index rest = suffix_cols[n];

    std::vector<double> mid(static_cast<std::size_t>(rb * in * rest));
    MutMatView mid_view(mid.data(), rb, in * rest);
    mid_view.noalias() =
        MatView(prefix.data(), prefix_rows, rb).transpose() *
        MatView(e.data(), prefix_rows, in * rest);

    grads[n].resize(static_cast<std::size_t>(rb * in * ra));
    MutMatView grad_view(grads[n].data(), rb * in, ra);
    grad_view.noalias() = MatView(mid.data(), rb * in, rest) *
                          MatView(suffix[n].data(), ra, rest).transpose();

    if (n + 1 < N) {
      std::vector<double> next(static_cast<std::size_t>(prefix_rows * in * ra));
      MutMatView out(next.data(), prefix_rows, in * ra);
      out.noalias() = MatView(prefix.data(), prefix_rows, rb) *
                      MatView(g.core(n).data(), rb, in * ra);
      prefix = std::move(next);
      prefix_rows *= in;
    }
  }
  return {f, std::move(grads)};
}

SolveResult run_wopt(const DenseTensor& y, const DenseTensor& w,
                     const SolverConfig& config) {
  validate_weight_tensor(y, w);
  require(config.max_iters >= 1, Errc::invalid_argument,
          "wopt needs max_iters >= 1");

  TtCores g = TtCores::random_init(y.dims(), config.rank_chain(y.order()),
                                   config.seed, config.init_scale);
  auto stepper = make_wopt_stepper(config.optimizer, g, config.adam_params());
  const auto objective = [&](const TtCores& trial) {
    return wopt_objective(y, w, trial);
  };

  double norm_yw = 0.0;
  for (Index i = 0; i < y.size(); ++i) norm_yw += w[i] * y[i] * y[i];
  norm_yw = std::sqrt(norm_yw);

  SolveResult result{std::move(g), {}, 0, StopReason::max_iters};
  const auto t0 = Clock::now();
  double f_prev = std::numeric_limits<double>::quiet_NaN();
  double f_initial = 0.0;

  for (std::int64_t iter = 0;; ++iter) {
    auto [f, grads] = wopt_gradients(y, w, result.model);
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    const double rse_obs = norm_yw > 0.0 ? std::sqrt(2.0 * f) / norm_yw : 0.0;
    result.log.push_back({iter, f, rse_obs, elapsed_ms});

    if (!std::isfinite(f))
      fail(Errc::diverged,
           "objective became non-finite at iteration " + std::to_string(iter));
    if (iter == 0) {
      f_initial = f;
    } else {
      if (f > 1e6 * f_initial)
        fail(Errc::diverged,
             "objective exceeded 1e6x its initial value at iteration " +
                 std::to_string(iter));
      if (std::abs(f - f_prev) <= config.tol) {
        result.stop = StopReason::tolerance;
        break;
      }
    }
    if (iter == config.max_iters) {
      result.stop = StopReason::max_iters;
      break;
    }
    if (!stepper->step(result.model, grads, f, objective)) {
      result.stop = StopReason::stalled;
      break;
    }
    result.iterations = iter + 1;
    f_prev = f;
  }
  return result;
}

}  // namespace ttc
