#pragma once

#include <cstdint>
#include <vector>

#include "semiret/encoder.hpp"

namespace semiret {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment estimates for one EncoderModel.
struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::uint64_t step = 0;

  static AdamState for_model(const EncoderModel& model);
};

// One bias-corrected Adam update in place. Throws TrainingError naming the
// parameter if any gradient entry is non-finite (the model is left untouched).
void adam_step(EncoderModel& model, const GradientSet& grads, AdamState& state, double lr,
               const AdamConfig& config = {});

// Linear warmup from 0 to peak_lr over warmup_steps, then linear decay to 0 at
// total_steps; 0 past the end.
double lr_schedule(std::uint64_t step, double peak_lr, std::uint64_t warmup_steps,
                   std::uint64_t total_steps);

}  // namespace semiret
