#include "semiret/matchers.hpp"

#include <algorithm>
#include <cmath>

#include "semiret/errors.hpp"

namespace semiret {

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kInteractive:
      return "interactive";
    case Mechanism::kNonInteractive:
      return "non-interactive";
    case Mechanism::kSemiInteractive:
      return "semi-interactive";
  }
  return "unknown";
}

Mechanism parse_mechanism(std::string_view text) {
  if (text == "interactive") return Mechanism::kInteractive;
  if (text == "non-interactive" || text == "non") return Mechanism::kNonInteractive;
  if (text == "semi-interactive" || text == "semi") return Mechanism::kSemiInteractive;
  throw ConfigError("unknown mechanism '" + std::string(text) + "'");
}

double calibrate_cosine(double raw) {
  return std::clamp((raw + 1.0) / 2.0, kScoreEpsilon, 1.0 - kScoreEpsilon);
}

double calibrate_probability(double raw) {
  return std::clamp(raw, kScoreEpsilon, 1.0 - kScoreEpsilon);
}

InteractiveModel InteractiveModel::create(std::shared_ptr<const Vocabulary> vocab,
                                          const EncoderConfig& config, std::uint64_t seed) {
  if (!vocab) throw ConfigError("interactive model needs a vocabulary");
  EncoderConfig cfg = config;
  cfg.vocab_size = vocab->size();
  return InteractiveModel{std::move(vocab), EncoderModel::initialized(cfg, true, seed)};
}

DualModel DualModel::create(std::shared_ptr<const Vocabulary> vocab, const EncoderConfig& config,
                            Mechanism mode, std::size_t n_relevant, std::uint64_t seed) {
  if (!vocab) throw ConfigError("dual model needs a vocabulary");
  EncoderConfig cfg = config;
  cfg.vocab_size = vocab->size();
  EncoderModel tower = EncoderModel::initialized(cfg, false, seed);
  DualModel model{std::move(vocab), tower, tower, mode, n_relevant};
  model.validate();
  return model;
}

void DualModel::validate() const {
  if (mode == Mechanism::kInteractive) throw ConfigError("dual model cannot be interactive");
  if ((n_relevant == 0) != (mode == Mechanism::kNonInteractive)) {
    throw ConfigError("n_relevant must be 0 exactly when the model is non-interactive");
  }
  const auto& qc = query_encoder.config();
  const auto& dc = document_encoder.config();
  if (qc.hidden_dim != dc.hidden_dim || qc.vocab_size != dc.vocab_size) {
    throw ConfigError("query and document encoders disagree on hidden_dim or vocab_size");
  }
  if (vocab && vocab->size() != qc.vocab_size) {
    throw ConfigError("vocabulary size does not match encoder vocab_size");
  }
}

DualModel DualModel::with_relevant(Mechanism new_mode, std::size_t new_n) const {
  DualModel copy = *this;
  copy.mode = new_mode;
  copy.n_relevant = new_n;
  copy.validate();
  return copy;
}

InteractivePass interactive_forward(const EncoderModel& encoder, std::span<const TokenId> ids,
                                    const ForwardOptions& options) {
  if (!encoder.has_head()) throw ConfigError("interactive scoring needs an encoder with a head");
  InteractivePass pass;
  pass.trace = forward_trace(encoder, ids, options);
  pass.pooled = mean_pool(pass.trace.hidden);
  const auto& params = encoder.parameters();
  const Matrix& w = params[encoder.head_weight_index()].value;
  double logit = params[encoder.head_bias_index()].value(0, 0);
  for (std::size_t c = 0; c < pass.pooled.size(); ++c) logit += w(c, 0) * pass.pooled[c];
  pass.logit = logit;
  pass.score.raw = sigmoid(logit);
  pass.score.calibrated = calibrate_probability(pass.score.raw);
  return pass;
}

void interactive_backward(const EncoderModel& encoder, const InteractivePass& pass,
                          double d_score, GradientSet& grads) {
  const double s = pass.score.raw;
  // Clamped scores do not move with the logit.
  if (s != pass.score.calibrated) return;
  const double d_logit = d_score * s * (1.0 - s);
  const auto& params = encoder.parameters();
  const Matrix& w = params[encoder.head_weight_index()].value;
  Matrix& dw = grads.grads[encoder.head_weight_index()];
  grads.grads[encoder.head_bias_index()](0, 0) += d_logit;
  Representation d_pooled(pass.pooled.size());
  for (std::size_t c = 0; c < pass.pooled.size(); ++c) {
    dw(c, 0) += d_logit * pass.pooled[c];
    d_pooled[c] = d_logit * w(c, 0);
  }
  backward(encoder, pass.trace, mean_pool_backward(d_pooled, pass.trace.hidden.rows()), grads);
}

TowerPass tower_forward(const EncoderModel& encoder, std::span<const TokenId> ids,
                        const ForwardOptions& options) {
  TowerPass pass;
  pass.trace = forward_trace(encoder, ids, options);
  pass.pooled = mean_pool(pass.trace.hidden);
  return pass;
}

void tower_backward(const EncoderModel& encoder, const TowerPass& pass,
                    std::span<const double> d_pooled, GradientSet& grads) {
  backward(encoder, pass.trace, mean_pool_backward(d_pooled, pass.trace.hidden.rows()), grads);
}

CosineGrad dual_score_backward(std::span<const double> q, std::span<const double> d,
                               double d_score) {
  CosineGrad out{Representation(q.size(), 0.0), Representation(d.size(), 0.0)};
  const double nq = l2_norm(q);
  const double nd = l2_norm(d);
  if (nq == 0.0 || nd == 0.0) throw InputError("cosine: zero-norm vector");
  const double cos = dot(q, d) / (nq * nd);
  const double cal = (cos + 1.0) / 2.0;
  if (cal <= kScoreEpsilon || cal >= 1.0 - kScoreEpsilon) return out;
  const double d_cos = 0.5 * d_score;
  for (std::size_t i = 0; i < q.size(); ++i) {
    out.d_query[i] = d_cos * (d[i] / (nq * nd) - cos * q[i] / (nq * nq));
    out.d_document[i] = d_cos * (q[i] / (nq * nd) - cos * d[i] / (nd * nd));
  }
  return out;
}

RelevanceScore score_interactive(const InteractiveModel& model, std::string_view query,
                                 std::string_view document) {
  if (query.empty() || document.empty()) throw InputError("score_interactive: empty text");
  const TokenSequence seq =
      assemble_interactive(*model.vocab, query, document, model.max_len()).trimmed();
  return interactive_forward(model.encoder, seq.ids, {}).score;
}

Representation encode_query(const DualModel& model, std::string_view query) {
  const TokenSequence seq = assemble_query(*model.vocab, query, model.max_len()).trimmed();
  return tower_forward(model.query_encoder, seq.ids, {}).pooled;
}

Representation encode_document(const DualModel& model, std::string_view document,
                               std::span<const std::string> relevant_queries) {
  if (relevant_queries.size() > model.n_relevant) {
    throw InputError("encode_document: " + std::to_string(relevant_queries.size()) +
                     " relevant queries exceed n_relevant " + std::to_string(model.n_relevant));
  }
  const TokenSequence seq =
      assemble_document_semi(*model.vocab, document, relevant_queries, model.max_len()).trimmed();
  return tower_forward(model.document_encoder, seq.ids, {}).pooled;
}

RelevanceScore score_dual(std::span<const double> q, std::span<const double> d) {
  const double raw = cosine(q, d);
  return {raw, calibrate_cosine(raw)};
}

}  // namespace semiret
