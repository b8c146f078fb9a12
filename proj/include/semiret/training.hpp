#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "semiret/checkpoint.hpp"
#include "semiret/dataset.hpp"
#include "semiret/matchers.hpp"

namespace semiret {

struct TrainConfig {
  Mechanism mechanism = Mechanism::kSemiInteractive;
  std::size_t n_relevant = 3;
  double alpha = 0.7;
  bool use_embedding_reuse = false;
  bool use_distillation = false;
  std::size_t batch_size = 64;
  double peak_lr = 1e-3;
  std::uint64_t warmup_steps = 0;  // 0: a tenth of total_steps
  std::uint64_t total_steps = 0;   // 0: max_epochs * steps per epoch
  std::size_t max_epochs = 30;
  std::size_t patience = 3;
  std::uint64_t seed = 1;
  EncoderConfig encoder;

  void validate(bool have_teacher) const;  // throws ConfigError
  // Relevant queries the document tower sees (0 for non-interactive).
  std::size_t effective_n_relevant() const;
};

nlohmann::json train_config_to_json(const TrainConfig& config);
// Missing keys keep their defaults; "mechanism" accepts the parse_mechanism spellings.
TrainConfig train_config_from_json(const nlohmann::json& j);

struct StepRecord {
  std::uint64_t step = 0;
  std::size_t epoch = 0;
  double lr = 0.0;
  double alpha = 1.0;  // weight actually applied; 1 when distillation is off
  double l_cross = 0.0;
  double l_distill = 0.0;
  double l = 0.0;
};

struct EvalRecord {
  std::size_t epoch = 0;
  double val_auc = 0.0;
};

struct TrainReport {
  std::vector<StepRecord> steps;
  std::vector<EvalRecord> evals;
  std::size_t stopping_epoch = 0;
  std::size_t best_epoch = 0;
  double best_val_auc = 0.0;
  double seconds_per_step = 0.0;

  // One JSON object per step and per evaluation; timing is left out so the
  // file is reproducible.
  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;
};

struct TrainResult {
  AnyModel model;
  TrainReport report;
};

// Relevant queries used for a sample's document: the sample's own query (compared
// by its lowercased word sequence) is removed, then the first `n` are kept.
std::vector<std::string> relevant_for_sample(const TrainingSample& sample, std::size_t n);

// Teacher probabilities for each sample, teacher in inference mode.
std::vector<double> teacher_scores(const InteractiveModel& teacher,
                                   std::span<const TrainingSample> batch);

// Copies the teacher's token embeddings into both student towers.
DualModel reuse_embeddings(const InteractiveModel& teacher, DualModel student);

// Mini-batch Adam with warmup/decay and early stopping on validation AUC; the
// returned model is the best-validation snapshot. Deterministic given the seed.
TrainResult train(const TrainConfig& config, std::shared_ptr<const Vocabulary> vocab,
                  const Dataset& train_set, const Dataset& valid_set,
                  const InteractiveModel* teacher = nullptr);

// Inference scores (calibrated) for each sample under any model. Dual models
// use up to `n_relevant` relevant queries per document (sample's own query removed).
std::vector<double> score_samples(const AnyModel& model, std::span<const TrainingSample> samples);

}  // namespace semiret
