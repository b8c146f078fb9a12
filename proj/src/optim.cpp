#include "semiret/optim.hpp"

#include <cmath>

#include "semiret/errors.hpp"

namespace semiret {

AdamState AdamState::for_model(const EncoderModel& model) {
  AdamState s;
  for (const auto& p : model.parameters()) {
    s.m.emplace_back(p.value.rows(), p.value.cols());
    s.v.emplace_back(p.value.rows(), p.value.cols());
  }
  return s;
}

void adam_step(EncoderModel& model, const GradientSet& grads, AdamState& state, double lr,
               const AdamConfig& config) {
  auto& params = model.parameters();
  if (!grads.congruent_with(model) || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw InternalError("adam_step: optimizer state not congruent with model");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!grads.grads[i].all_finite()) {
      throw TrainingError("non-finite gradient in parameter '" + params[i].name + "'");
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(config.beta1, t);
  const double bc2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].value.values();
    auto g = grads.grads[i].values();
    auto m = state.m[i].values();
    auto v = state.v[i].values();
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = config.beta1 * m[j] + (1.0 - config.beta1) * g[j];
      v[j] = config.beta2 * v[j] + (1.0 - config.beta2) * g[j] * g[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      w[j] -= lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

double lr_schedule(std::uint64_t step, double peak_lr, std::uint64_t warmup_steps,
                   std::uint64_t total_steps) {
  if (step >= total_steps) return 0.0;
  if (step < warmup_steps) {
    return peak_lr * static_cast<double>(step) / static_cast<double>(warmup_steps);
  }
  const double remaining = static_cast<double>(total_steps - step);
  const double span = static_cast<double>(total_steps - warmup_steps);
  return peak_lr * remaining / span;
}

}  // namespace semiret
