#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semiret/matrix.hpp"
#include "semiret/text.hpp"

namespace semiret {

struct EncoderConfig {
  std::size_t num_layers = 2;
  std::size_t hidden_dim = 64;
  std::size_t num_heads = 4;
  std::size_t ffn_dim = 128;
  std::size_t max_seq_len = 64;
  std::size_t vocab_size = kReservedTokens;
  double dropout_rate = 0.1;
  // Standard deviation of the normal weight initialisation.
  double init_std = 0.1;

  void validate() const;  // throws ConfigError
  bool operator==(const EncoderConfig&) const = default;
};

struct Parameter {
  std::string name;
  Matrix value;
};

// Parameters of one pre-layernorm transformer encoder with learned absolute
// positions and a final layernorm. An optional single-unit scoring head sits
// on top for the interactive scorer.
class EncoderModel {
 public:
  enum Slot : std::size_t {
    kLn1Gain,
    kLn1Bias,
    kWq,
    kBq,
    kWk,
    kBk,
    kWv,
    kBv,
    kWo,
    kBo,
    kLn2Gain,
    kLn2Bias,
    kW1,
    kB1,
    kW2,
    kB2,
    kLayerSlots
  };

  EncoderModel() = default;
  // All weights zero, layernorm gains one.
  EncoderModel(const EncoderConfig& config, bool with_head);
  // Weights ~ N(0, config.init_std^2), biases zero, layernorm gains one.
  static EncoderModel initialized(const EncoderConfig& config, bool with_head,
                                  std::uint64_t seed);

  const EncoderConfig& config() const { return config_; }
  bool has_head() const { return has_head_; }

  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  std::size_t parameter_count() const;

  Matrix& token_embeddings() { return params_[0].value; }
  const Matrix& token_embeddings() const { return params_[0].value; }
  Matrix& position_embeddings() { return params_[1].value; }
  const Matrix& position_embeddings() const { return params_[1].value; }

  static std::size_t layer_index(std::size_t layer, Slot slot) {
    return 2 + layer * kLayerSlots + slot;
  }
  std::size_t final_gain_index() const { return 2 + config_.num_layers * kLayerSlots; }
  std::size_t final_bias_index() const { return final_gain_index() + 1; }
  std::size_t head_weight_index() const { return final_gain_index() + 2; }
  std::size_t head_bias_index() const { return final_gain_index() + 3; }

  const Matrix& layer_param(std::size_t layer, Slot slot) const {
    return params_[layer_index(layer, slot)].value;
  }
  Matrix& layer_param(std::size_t layer, Slot slot) {
    return params_[layer_index(layer, slot)].value;
  }

  bool operator==(const EncoderModel& other) const;

 private:
  EncoderConfig config_;
  bool has_head_ = false;
  std::vector<Parameter> params_;
};

// One gradient matrix per model parameter, same order and shapes.
struct GradientSet {
  std::vector<Matrix> grads;

  static GradientSet zeros_like(const EncoderModel& model);
  void set_zero();
  void add(const GradientSet& other);
  void scale(double factor);
  bool congruent_with(const EncoderModel& model) const;
  bool all_zero() const;
};

struct LayerTrace {
  Matrix input;
  Matrix ln1_hat;
  std::vector<double> ln1_rstd;
  Matrix attn_in;
  Matrix q, k, v;
  std::vector<Matrix> probs;  // one T x T matrix per head
  Matrix context;
  Matrix attn_drop;  // dropout multipliers (empty when inactive)
  Matrix ln2_hat;
  std::vector<double> ln2_rstd;
  Matrix ffn_in;
  Matrix pre_act;
  Matrix act;
  Matrix ffn_drop;
};

// Intermediates of a forward pass over the active tokens of one sequence,
// everything backward() needs.
struct EncoderTrace {
  std::vector<TokenId> ids;
  Matrix emb_drop;
  std::vector<LayerTrace> layers;
  Matrix final_hat;
  std::vector<double> final_rstd;
  Matrix hidden;  // active_len x hidden_dim
};

struct ForwardOptions {
  bool train_mode = false;
  std::uint64_t rng_seed = 0;
};

// Runs the encoder over `ids` (all treated as active). Throws InputError on an
// empty sequence, overlong sequence or out-of-range id.
EncoderTrace forward_trace(const EncoderModel& model, std::span<const TokenId> ids,
                           const ForwardOptions& options = {});

// Per-token hidden states for a full (possibly padded) sequence. Padding
// positions are never attended to and their output rows are zero.
Matrix forward_encoder(const EncoderModel& model, const TokenSequence& tokens,
                       bool train_mode = false, std::uint64_t rng_seed = 0);

// Accumulates d(loss)/d(parameters) into `grads` given d(loss)/d(hidden).
void backward(const EncoderModel& model, const EncoderTrace& trace, const Matrix& d_hidden,
              GradientSet& grads);
GradientSet backward(const EncoderModel& model, const EncoderTrace& trace,
                     const Matrix& d_hidden);

// Mean over active rows. Throws InputError when nothing is active.
std::vector<double> mean_pool(const Matrix& hidden, std::span<const std::uint8_t> mask);
std::vector<double> mean_pool(const Matrix& hidden);  // all rows active
// d(loss)/d(hidden) for an all-active mean pool.
Matrix mean_pool_backward(std::span<const double> d_pooled, std::size_t rows);

double sigmoid(double x);
// Throws InputError on zero norm or width mismatch; clamped to [-1, 1].
double cosine(std::span<const double> u, std::span<const double> v);

// Counter-based uniform in [0,1) keyed by (seed, layer, site, index).
double dropout_uniform(std::uint64_t seed, std::uint64_t layer, std::uint64_t site,
                       std::uint64_t index);

}  // namespace semiret
