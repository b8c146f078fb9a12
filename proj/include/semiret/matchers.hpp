#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semiret/encoder.hpp"
#include "semiret/text.hpp"

namespace semiret {

using Representation = std::vector<double>;

enum class Mechanism { kInteractive, kNonInteractive, kSemiInteractive };

std::string to_string(Mechanism m);
Mechanism parse_mechanism(std::string_view text);

// Log-losses need scores strictly inside (0,1); every calibrated score is
// clamped to [kScoreEpsilon, 1 - kScoreEpsilon].
inline constexpr double kScoreEpsilon = 1e-7;

struct RelevanceScore {
  double raw = 0.0;         // sigmoid output or cosine
  double calibrated = 0.5;  // in (0,1)
};

double calibrate_cosine(double raw);
double calibrate_probability(double raw);

// Joint scorer: sigmoid(head(mean(Encoder([CLS] Q [SEP] D [SEP])))).
struct InteractiveModel {
  std::shared_ptr<const Vocabulary> vocab;
  EncoderModel encoder;  // carries the scoring head

  static InteractiveModel create(std::shared_ptr<const Vocabulary> vocab,
                                 const EncoderConfig& config, std::uint64_t seed);
  std::size_t max_len() const { return encoder.config().max_seq_len; }
};

// Two towers scored by cosine. In semi-interactive mode the document tower
// reads the document followed by up to n_relevant relevant queries.
struct DualModel {
  std::shared_ptr<const Vocabulary> vocab;
  EncoderModel query_encoder;
  EncoderModel document_encoder;
  Mechanism mode = Mechanism::kNonInteractive;
  std::size_t n_relevant = 0;

  // Both towers start from the same initial weights.
  static DualModel create(std::shared_ptr<const Vocabulary> vocab, const EncoderConfig& config,
                          Mechanism mode, std::size_t n_relevant, std::uint64_t seed);
  std::size_t max_len() const { return query_encoder.config().max_seq_len; }
  void validate() const;
  // Same weights, different document layout (used for train/test usage ablations).
  DualModel with_relevant(Mechanism mode, std::size_t n_relevant) const;
};

RelevanceScore score_interactive(const InteractiveModel& model, std::string_view query,
                                 std::string_view document);
Representation encode_query(const DualModel& model, std::string_view query);
Representation encode_document(const DualModel& model, std::string_view document,
                               std::span<const std::string> relevant_queries);
RelevanceScore score_dual(std::span<const double> q, std::span<const double> d);

// Differentiable paths used by training and gradient checks. Sequences are
// expected without padding (see TokenSequence::trimmed).
struct InteractivePass {
  EncoderTrace trace;
  Representation pooled;
  double logit = 0.0;
  RelevanceScore score;
};

InteractivePass interactive_forward(const EncoderModel& encoder, std::span<const TokenId> ids,
                                    const ForwardOptions& options);
// d_score is d(loss)/d(calibrated score).
void interactive_backward(const EncoderModel& encoder, const InteractivePass& pass,
                          double d_score, GradientSet& grads);

struct TowerPass {
  EncoderTrace trace;
  Representation pooled;
};

TowerPass tower_forward(const EncoderModel& encoder, std::span<const TokenId> ids,
                        const ForwardOptions& options);
void tower_backward(const EncoderModel& encoder, const TowerPass& pass,
                    std::span<const double> d_pooled, GradientSet& grads);

struct CosineGrad {
  Representation d_query;
  Representation d_document;
};

// Gradients of the calibrated cosine score scaled by d_score; zero when the
// calibration clamp is active.
CosineGrad dual_score_backward(std::span<const double> q, std::span<const double> d,
                               double d_score);

}  // namespace semiret
