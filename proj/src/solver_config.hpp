#pragma once

#include <cstdint>
#include <vector>

#include "optimizer.hpp"
#include "tt_model.hpp"

namespace ttc {

/// Shared solver configuration. `ranks` is the full chain R_0..R_N; leave
/// empty to expand `uniform_rank` to (1, r, ..., r, 1) for the data's order.
struct SolverConfig {
  std::vector<Index> ranks;
  Index uniform_rank = 10;

  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool adam_bias_correction = false;

  double tol = 1e-4;
  std::int64_t max_iters = 500;  // TT-SGD callers typically use 100000
  std::uint64_t seed = 0;
  double init_scale = 0.1;
  std::int64_t log_every = 1000;  // TT-SGD log cadence; TT-WOPT logs each iter

  WoptOptimizer optimizer = WoptOptimizer::adam;

  std::vector<Index> rank_chain(Index order) const {
    return ranks.empty() ? TtCores::uniform_rank_chain(order, uniform_rank)
                         : ranks;
  }

  AdamParams adam_params() const {
    return AdamParams{learning_rate, beta1, beta2, epsilon,
                      adam_bias_correction};
  }
};

struct SolveLogRow {
  std::int64_t iter = 0;
  double objective = 0.0;
  double rse_observed = 0.0;
  double elapsed_ms = 0.0;
};

enum class StopReason { tolerance, max_iters, stalled };

struct SolveResult {
  TtCores model;
  std::vector<SolveLogRow> log;
  std::int64_t iterations = 0;  // update steps actually performed
  StopReason stop = StopReason::max_iters;
};

}  // namespace ttc
