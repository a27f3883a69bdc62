#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tt_model.hpp"

namespace ttc {

struct AdamParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // The update rule is applied exactly as printed, without bias correction;
  // this flag opts into the standard m/(1-beta1^t), v/(1-beta2^t) variant.
  bool bias_correction = false;
};

/// In-place Adam update of one contiguous parameter block:
///   m <- b1*m + (1-b1)*g;  v <- b2*v + (1-b2)*g^2;
///   theta <- theta - lr * m / (sqrt(v) + eps)
/// `t` is the 1-based step count (used only when bias correction is on).
void adam_apply(std::span<double> theta, std::span<double> m,
                std::span<double> v, std::span<const double> grad,
                const AdamParams& p, std::int64_t t);

/// Per-core gradient buffers matching a TT model's core shapes.
using CoreGrads = std::vector<std::vector<double>>;

/// First/second moment accumulators shaped like a TT model's cores, with a
/// shared step counter.  Supports dense whole-model updates (TT-WOPT) and
/// sparse per-slice updates (TT-SGD); moments of untouched slices are left
/// as-is rather than decayed.
class AdamState {
public:
  AdamState(const TtCores& model, AdamParams params);

  const AdamParams& params() const { return params_; }
  std::int64_t step_count() const { return t_; }

  std::span<const double> moment1(Index n) const { return m_[n]; }
  std::span<const double> moment2(Index n) const { return v_[n]; }

  /// One dense step over every core entry.
  void update_all(TtCores& model, const CoreGrads& grads);

  /// One sparse step touching only the N slices addressed by idx.
  /// grad_slices[n] must be R_{n-1} x R_n.
  void update_slices(TtCores& model, std::span<const Index> idx,
                     const std::vector<Matrix>& grad_slices);

private:
  AdamParams params_;
  std::vector<std::vector<double>> m_, v_;
  std::int64_t t_ = 0;
};

enum class WoptOptimizer { adam, gd_linesearch };

/// Strategy applied once per TT-WOPT iteration to turn the per-core
/// gradients into a model update.
class WoptStepper {
public:
  virtual ~WoptStepper() = default;

  /// `objective` evaluates trial models (used by line-searching steppers).
  /// Returns false if no progress could be made.
  virtual bool step(TtCores& model, const CoreGrads& grads, double f_current,
                    const std::function<double(const TtCores&)>& objective) = 0;
};

class AdamStepper final : public WoptStepper {
public:
  AdamStepper(const TtCores& model, AdamParams params)
      : state_(model, params) {}

  bool step(TtCores& model, const CoreGrads& grads, double,
            const std::function<double(const TtCores&)>&) override {
    state_.update_all(model, grads);
    return true;
  }

  const AdamState& state() const { return state_; }

private:
  AdamState state_;
};

/// Steepest descent with backtracking: halve the step until the objective
/// decreases, up to max_halvings; the accepted step is doubled for the next
/// iteration.
class BacktrackingGdStepper final : public WoptStepper {
public:
  explicit BacktrackingGdStepper(double initial_step = 1.0,
                                 int max_halvings = 30)
      : step_size_(initial_step), max_halvings_(max_halvings) {}

  bool step(TtCores& model, const CoreGrads& grads, double f_current,
            const std::function<double(const TtCores&)>& objective) override;

  double step_size() const { return step_size_; }

private:
  double step_size_;
  int max_halvings_;
};

std::unique_ptr<WoptStepper> make_wopt_stepper(WoptOptimizer kind,
                                               const TtCores& model,
                                               AdamParams params);

}  // namespace ttc
