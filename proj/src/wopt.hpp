#pragma once

#include <utility>

#include "solver_config.hpp"

namespace ttc {

/// Weighted least-squares objective 0.5 * ||W*Y - W*X||_F^2 with
/// X = full_reconstruct(g).  Values of y at unobserved positions (w == 0)
/// never enter the sum.
double wopt_objective(const DenseTensor& y, const DenseTensor& w,
                      const TtCores& g);

/// Objective value together with the per-core gradients
/// d f / d G^(n), each in core layout (R_{n-1} x I_n x R_n).
std::pair<double, CoreGrads> wopt_gradients(const DenseTensor& y,
                                            const DenseTensor& w,
                                            const TtCores& g);

/// TT-WOPT: full-gradient descent on the weighted objective, all cores
/// updated simultaneously from one gradient evaluation per iteration.
/// Stops when |f_t - f_{t-1}| <= tol or after max_iters updates; aborts with
/// Errc::diverged if the objective turns non-finite or exceeds 1e6x its
/// initial value.
SolveResult run_wopt(const DenseTensor& y, const DenseTensor& w,
                     const SolverConfig& config);

}  // namespace ttc
