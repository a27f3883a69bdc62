#include "optimizer.hpp"

#include <cmath>

namespace ttc {

void adam_apply(std::span<double> theta, std::span<double> m,
                std::span<double> v, std::span<const double> grad,
                const AdamParams& p, std::int64_t t) {
  require(theta.size() == m.size() && theta.size() == v.size() &&
              theta.size() == grad.size(),
          Errc::shape_mismatch, "adam_apply: block sizes differ");
  double m_scale = 1.0, v_scale = 1.0;
  if (p.bias_correction) {
    m_scale = 1.0 / (1.0 - std::pow(p.beta1, static_cast<double>(t)));
    v_scale = 1.0 / (1.0 - std::pow(p.beta2, static_cast<double>(t)));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = grad[i];
    m[i] = p.beta1 * m[i] + (1.0 - p.beta1) * g;
    v[i] = p.beta2 * v[i] + (1.0 - p.beta2) * g * g;
    theta[i] -= p.learning_rate * (m_scale * m[i]) /
                (std::sqrt(v_scale * v[i]) + p.epsilon);
  }
}

AdamState::AdamState(const TtCores& model, AdamParams params)
    : params_(params) {
  m_.resize(model.order());
  v_.resize(model.order());
  for (Index n = 0; n < model.order(); ++n) {
    m_[n].assign(static_cast<std::size_t>(model.core_size(n)), 0.0);
    v_[n].assign(static_cast<std::size_t>(model.core_size(n)), 0.0);
  }
}

void AdamState::update_all(TtCores& model, const CoreGrads& grads) {
  require(static_cast<Index>(grads.size()) == model.order(),
          Errc::shape_mismatch, "gradient core count mismatch");
  ++t_;
  for (Index n = 0; n < model.order(); ++n)
    adam_apply(model.core(n), m_[n], v_[n], grads[n], params_, t_);
}

void AdamState::update_slices(TtCores& model, std::span<const Index> idx,
                              const std::vector<Matrix>& grad_slices) {
  require(static_cast<Index>(idx.size()) == model.order() &&
              grad_slices.size() == idx.size(),
          Errc::shape_mismatch, "slice gradient count mismatch");
  ++t_;
  double m_scale = 1.0, v_scale = 1.0;
  if (params_.bias_correction) {
    m_scale = 1.0 / (1.0 - std::pow(params_.beta1, static_cast<double>(t_)));
    v_scale = 1.0 / (1.0 - std::pow(params_.beta2, static_cast<double>(t_)));
  }
  for (Index n = 0; n < model.order(); ++n) {
    const Index rb = model.rank_before(n), ra = model.rank_after(n);
    const Index in = model.dims()[n];
    require(grad_slices[n].rows() == rb && grad_slices[n].cols() == ra,
            Errc::shape_mismatch, "slice gradient shape mismatch");
    double* core = model.core(n).data();
    double* m = m_[n].data();
    double* v = v_[n].data();
    const Index base = idx[n] * rb;
    const Index stride = rb * in;
    for (Index s = 0; s < ra; ++s) {
      for (Index r = 0; r < rb; ++r) {
        const Index k = base + s * stride + r;
        const double g = grad_slices[n](r, s);
        m[k] = params_.beta1 * m[k] + (1.0 - params_.beta1) * g;
        v[k] = params_.beta2 * v[k] + (1.0 - params_.beta2) * g * g;
        core[k] -= params_.learning_rate * (m_scale * m[k]) /
                   (std::sqrt(v_scale * v[k]) + params_.epsilon);
      }
    }
  }
}

bool BacktrackingGdStepper::step(
    TtCores& model, const CoreGrads& grads, double f_current,
    const std::function<double(const TtCores&)>& objective) {
  double s = step_size_;
  for (int h = 0; h <= max_halvings_; ++h, s *= 0.5) {
    TtCores trial = model;
    for (Index n = 0; n < model.order(); ++n) {
      double* c = trial.core(n).data();
      const double* g = grads[n].data();
      for (Index i = 0; i < model.core_size(n); ++i) c[i] -= s * g[i];
    }
    const double f_trial = objective(trial);
    if (std::isfinite(f_trial) && f_trial < f_current) {
      model = std::move(trial);
      step_size_ = s * 2.0;
      return true;
    }
  }
  return false;
}

std::unique_ptr<WoptStepper> make_wopt_stepper(WoptOptimizer kind,
                                               const TtCores& model,
                                               AdamParams params) {
  switch (kind) {
    case WoptOptimizer::adam:
      return std::make_unique<AdamStepper>(model, params);
    case WoptOptimizer::gd_linesearch:
      return std::make_unique<BacktrackingGdStepper>();
  }
  fail(Errc::invalid_argument, "unknown optimizer kind");
}

}  // namespace ttc
