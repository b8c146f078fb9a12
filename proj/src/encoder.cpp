#include "semiret/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "semiret/errors.hpp"
#include "semiret/kernels.hpp"

namespace semiret {
namespace {

using kernels::Op;

constexpr double kLayerNormEps = 1e-5;

// Dropout sites within a layer.
constexpr std::uint64_t kSiteEmbedding = 0;
constexpr std::uint64_t kSiteAttention = 1;
constexpr std::uint64_t kSiteFfn = 2;

void gemm(const Matrix& a, Op op_a, const Matrix& b, Op op_b, Matrix& c, bool acc = false) {
  kernels::parallel::gemm(a, op_a, b, op_b, c, acc);
}

void add_bias(Matrix& m, const Matrix& bias) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] += bias(0, c);
  }
}

void accumulate_colsum(const Matrix& m, Matrix& out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) out(0, c) += row[c];
  }
}

// y = gain * (x - mean) * rstd + bias, row-wise.
Matrix layer_norm(const Matrix& x, const Matrix& gain, const Matrix& bias, Matrix& hat,
                  std::vector<double>& rstd) {
  const std::size_t n = x.cols();
  Matrix y(x.rows(), n);
  hat = Matrix(x.rows(), n);
  rstd.assign(x.rows(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto xr = x.row(r);
    double mean = 0.0;
    for (double v : xr) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : xr) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double rs = 1.0 / std::sqrt(var + kLayerNormEps);
    rstd[r] = rs;
    for (std::size_t c = 0; c < n; ++c) {
      const double h = (xr[c] - mean) * rs;
      hat(r, c) = h;
      y(r, c) = gain(0, c) * h + bias(0, c);
    }
  }
  return y;
}

// Returns dx; accumulates gain/bias gradients.
Matrix layer_norm_backward(const Matrix& dy, const Matrix& hat, const std::vector<double>& rstd,
                           const Matrix& gain, Matrix& d_gain, Matrix& d_bias) {
  const std::size_t n = dy.cols();
  Matrix dx(dy.rows(), n);
  std::vector<double> dhat(n);
  for (std::size_t r = 0; r < dy.rows(); ++r) {
    double mean_dhat = 0.0;
    double mean_dhat_hat = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      d_gain(0, c) += dy(r, c) * hat(r, c);
      d_bias(0, c) += dy(r, c);
      dhat[c] = dy(r, c) * gain(0, c);
      mean_dhat += dhat[c];
      mean_dhat_hat += dhat[c] * hat(r, c);
    }
    mean_dhat /= static_cast<double>(n);
    mean_dhat_hat /= static_cast<double>(n);
    for (std::size_t c = 0; c < n; ++c) {
      dx(r, c) = rstd[r] * (dhat[c] - mean_dhat - hat(r, c) * mean_dhat_hat);
    }
  }
  return dx;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

// Inverted-dropout multipliers, or an empty matrix when dropout is inactive.
Matrix dropout_mask(std::size_t rows, std::size_t cols, double rate, const ForwardOptions& opt,
                    std::uint64_t layer, std::uint64_t site) {
  if (!opt.train_mode || rate <= 0.0) return {};
  Matrix mask(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask.values()[i] = dropout_uniform(opt.rng_seed, layer, site, i) < rate ? 0.0 : keep_scale;
  }
  return mask;
}

void apply_mask(Matrix& m, const Matrix& mask) {
  if (mask.empty()) return;
  for (std::size_t i = 0; i < m.size(); ++i) m.values()[i] *= mask.values()[i];
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void EncoderConfig::validate() const {
  if (num_layers == 0) throw ConfigError("encoder needs at least one layer");
  if (hidden_dim == 0 || num_heads == 0 || ffn_dim == 0 || max_seq_len == 0) {
    throw ConfigError("encoder dimensions must be positive");
  }
  if (hidden_dim % num_heads != 0) {
    throw ConfigError("hidden_dim " + std::to_string(hidden_dim) +
                      " is not divisible by num_heads " + std::to_string(num_heads));
  }
  if (vocab_size < kReservedTokens) {
    throw ConfigError("vocab_size must cover the 4 reserved tokens");
  }
  if (!(init_std > 0.0)) throw ConfigError("init_std must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout_rate must lie in [0, 1)");
  }
}

EncoderModel::EncoderModel(const EncoderConfig& config, bool with_head)
    : config_(config), has_head_(with_head) {
  config_.validate();
  const std::size_t d = config.hidden_dim;
  const std::size_t f = config.ffn_dim;
  params_.push_back({"embeddings.token", Matrix(config.vocab_size, d)});
  params_.push_back({"embeddings.position", Matrix(config.max_seq_len, d)});
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    params_.push_back({p + "ln1.gain", Matrix(1, d, 1.0)});
    params_.push_back({p + "ln1.bias", Matrix(1, d)});
    params_.push_back({p + "attn.wq", Matrix(d, d)});
    params_.push_back({p + "attn.bq", Matrix(1, d)});
    params_.push_back({p + "attn.wk", Matrix(d, d)});
    params_.push_back({p + "attn.bk", Matrix(1, d)});
    params_.push_back({p + "attn.wv", Matrix(d, d)});
    params_.push_back({p + "attn.bv", Matrix(1, d)});
    params_.push_back({p + "attn.wo", Matrix(d, d)});
    params_.push_back({p + "attn.bo", Matrix(1, d)});
    params_.push_back({p + "ln2.gain", Matrix(1, d, 1.0)});
    params_.push_back({p + "ln2.bias", Matrix(1, d)});
    params_.push_back({p + "ffn.w1", Matrix(d, f)});
    params_.push_back({p + "ffn.b1", Matrix(1, f)});
    params_.push_back({p + "ffn.w2", Matrix(f, d)});
    params_.push_back({p + "ffn.b2", Matrix(1, d)});
  }
  params_.push_back({"final_ln.gain", Matrix(1, d, 1.0)});
  params_.push_back({"final_ln.bias", Matrix(1, d)});
  if (with_head) {
    params_.push_back({"head.weight", Matrix(d, 1)});
    params_.push_back({"head.bias", Matrix(1, 1)});
  }
}

EncoderModel EncoderModel::initialized(const EncoderConfig& config, bool with_head,
                                       std::uint64_t seed) {
  EncoderModel model(config, with_head);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, config.init_std);
  for (auto& p : model.params_) {
    // 1-row matrices are biases or layernorm parameters and keep their defaults.
    if (p.value.rows() == 1) continue;
    for (double& v : p.value.values()) v = normal(rng);
  }
  return model;
}

std::size_t EncoderModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

bool EncoderModel::operator==(const EncoderModel& other) const {
  if (!(config_ == other.config_) || has_head_ != other.has_head_ ||
      params_.size() != other.params_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name != other.params_[i].name || !(params_[i].value == other.params_[i].value)) {
      return false;
    }
  }
  return true;
}

GradientSet GradientSet::zeros_like(const EncoderModel& model) {
  GradientSet g;
  g.grads.reserve(model.parameters().size());
  for (const auto& p : model.parameters()) g.grads.emplace_back(p.value.rows(), p.value.cols());
  return g;
}

void GradientSet::set_zero() {
  for (auto& g : grads) g.set_zero();
}

void GradientSet::add(const GradientSet& other) {
  if (other.grads.size() != grads.size()) throw InternalError("GradientSet::add: size mismatch");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!grads[i].same_shape(other.grads[i])) {
      throw InternalError("GradientSet::add: shape mismatch");
    }
    auto dst = grads[i].values();
    auto src = other.grads[i].values();
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
  }
}

void GradientSet::scale(double factor) {
  for (auto& g : grads) {
    for (double& v : g.values()) v *= factor;
  }
}

bool GradientSet::congruent_with(const EncoderModel& model) const {
  if (grads.size() != model.parameters().size()) return false;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!grads[i].same_shape(model.parameters()[i].value)) return false;
  }
  return true;
}

bool GradientSet::all_zero() const {
  for (const auto& g : grads) {
    for (double v : g.values()) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

double dropout_uniform(std::uint64_t seed, std::uint64_t layer, std::uint64_t site,
                       std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (layer * 0x100000001b3ULL + site));
  h = splitmix64(h ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

EncoderTrace forward_trace(const EncoderModel& model, std::span<const TokenId> ids,
                           const ForwardOptions& options) {
  const EncoderConfig& cfg = model.config();
  if (ids.empty()) throw InputError("forward_encoder: empty sequence");
  if (ids.size() > cfg.max_seq_len) {
    throw InputError("forward_encoder: sequence length " + std::to_string(ids.size()) +
                     " exceeds max_seq_len " + std::to_string(cfg.max_seq_len));
  }
  for (TokenId id : ids) {
    if (id >= cfg.vocab_size) {
      throw InputError("forward_encoder: token id " + std::to_string(id) +
                       " out of range for vocab_size " + std::to_string(cfg.vocab_size));
    }
  }
  const std::size_t t_len = ids.size();
  const std::size_t d = cfg.hidden_dim;
  const std::size_t heads = cfg.num_heads;
  const std::size_t hd = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

  EncoderTrace tr;
  tr.ids.assign(ids.begin(), ids.end());
  Matrix x(t_len, d);
  const Matrix& tok = model.token_embeddings();
  const Matrix& pos = model.position_embeddings();
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t c = 0; c < d; ++c) x(t, c) = tok(ids[t], c) + pos(t, c);
  }
  tr.emb_drop = dropout_mask(t_len, d, cfg.dropout_rate, options, 0, kSiteEmbedding);
  apply_mask(x, tr.emb_drop);

  tr.layers.resize(cfg.num_layers);
  for (std::size_t l = 0; l < cfg.num_layers; ++l) {
    LayerTrace& lt = tr.layers[l];
    using S = EncoderModel::Slot;
    lt.input = x;
    lt.attn_in = layer_norm(x, model.layer_param(l, S::kLn1Gain), model.layer_param(l, S::kLn1Bias),
                            lt.ln1_hat, lt.ln1_rstd);
    gemm(lt.attn_in, Op::kNone, model.layer_param(l, S::kWq), Op::kNone, lt.q);
    add_bias(lt.q, model.layer_param(l, S::kBq));
    gemm(lt.attn_in, Op::kNone, model.layer_param(l, S::kWk), Op::kNone, lt.k);
    add_bias(lt.k, model.layer_param(l, S::kBk));
    gemm(lt.attn_in, Op::kNone, model.layer_param(l, S::kWv), Op::kNone, lt.v);
    add_bias(lt.v, model.layer_param(l, S::kBv));

    lt.context = Matrix(t_len, d);
    lt.probs.assign(heads, Matrix(t_len, t_len));
    for (std::size_t h = 0; h < heads; ++h) {
      const std::size_t off = h * hd;
      Matrix& p = lt.probs[h];
      for (std::size_t i = 0; i < t_len; ++i) {
        double max_s = -INFINITY;
        for (std::size_t j = 0; j < t_len; ++j) {
          double s = 0.0;
          for (std::size_t c = 0; c < hd; ++c) s += lt.q(i, off + c) * lt.k(j, off + c);
          p(i, j) = s * scale;
          max_s = std::max(max_s, p(i, j));
        }
        double z = 0.0;
        for (std::size_t j = 0; j < t_len; ++j) {
          p(i, j) = std::exp(p(i, j) - max_s);
          z += p(i, j);
        }
        for (std::size_t j = 0; j < t_len; ++j) p(i, j) /= z;
        for (std::size_t j = 0; j < t_len; ++j) {
          const double pij = p(i, j);
          for (std::size_t c = 0; c < hd; ++c) lt.context(i, off + c) += pij * lt.v(j, off + c);
        }
      }
    }
    Matrix attn_out;
    gemm(lt.context, Op::kNone, model.layer_param(l, S::kWo), Op::kNone, attn_out);
    add_bias(attn_out, model.layer_param(l, S::kBo));
    lt.attn_drop = dropout_mask(t_len, d, cfg.dropout_rate, options, l, kSiteAttention);
    apply_mask(attn_out, lt.attn_drop);
    for (std::size_t i = 0; i < x.size(); ++i) x.values()[i] += attn_out.values()[i];

    lt.ffn_in = layer_norm(x, model.layer_param(l, S::kLn2Gain), model.layer_param(l, S::kLn2Bias),
                           lt.ln2_hat, lt.ln2_rstd);
    gemm(lt.ffn_in, Op::kNone, model.layer_param(l, S::kW1), Op::kNone, lt.pre_act);
    add_bias(lt.pre_act, model.layer_param(l, S::kB1));
    lt.act = Matrix(lt.pre_act.rows(), lt.pre_act.cols());
    for (std::size_t i = 0; i < lt.act.size(); ++i) lt.act.values()[i] = gelu(lt.pre_act.values()[i]);
    Matrix ffn_out;
    gemm(lt.act, Op::kNone, model.layer_param(l, S::kW2), Op::kNone, ffn_out);
    add_bias(ffn_out, model.layer_param(l, S::kB2));
    lt.ffn_drop = dropout_mask(t_len, d, cfg.dropout_rate, options, l, kSiteFfn);
    apply_mask(ffn_out, lt.ffn_drop);
    for (std::size_t i = 0; i < x.size(); ++i) x.values()[i] += ffn_out.values()[i];
  }
  const auto& params = model.parameters();
  tr.hidden = layer_norm(x, params[model.final_gain_index()].value,
                         params[model.final_bias_index()].value, tr.final_hat, tr.final_rstd);
  return tr;
}

Matrix forward_encoder(const EncoderModel& model, const TokenSequence& tokens, bool train_mode,
                       std::uint64_t rng_seed) {
  if (tokens.ids.empty()) throw InputError("forward_encoder: empty sequence");
  if (tokens.mask.size() != tokens.ids.size()) {
    throw InputError("forward_encoder: mask and ids differ in length");
  }
  const std::size_t active = tokens.active_length();
  for (std::size_t i = active; i < tokens.mask.size(); ++i) {
    if (tokens.mask[i] != 0) throw InputError("forward_encoder: active position after padding");
  }
  if (active == 0) throw InputError("forward_encoder: no active positions");
  if (tokens.length() > model.config().max_seq_len) {
    throw InputError("forward_encoder: sequence longer than max_seq_len");
  }
  EncoderTrace tr = forward_trace(model, std::span(tokens.ids).first(active),
                                  ForwardOptions{train_mode, rng_seed});
  Matrix out(tokens.length(), model.config().hidden_dim);
  std::copy(tr.hidden.values().begin(), tr.hidden.values().end(), out.values().begin());
  return out;
}

void backward(const EncoderModel& model, const EncoderTrace& tr, const Matrix& d_hidden,
              GradientSet& grads) {
  const EncoderConfig& cfg = model.config();
  if (!grads.congruent_with(model)) throw InternalError("backward: gradient set not congruent");
  if (d_hidden.rows() != tr.hidden.rows() || d_hidden.cols() != tr.hidden.cols()) {
    throw InternalError("backward: hidden gradient shape mismatch");
  }
  const std::size_t t_len = tr.ids.size();
  const std::size_t d = cfg.hidden_dim;
  const std::size_t heads = cfg.num_heads;
  const std::size_t hd = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  const auto& params = model.parameters();
  auto& g = grads.grads;
  using S = EncoderModel::Slot;

  Matrix dx = layer_norm_backward(d_hidden, tr.final_hat, tr.final_rstd,
                                  params[model.final_gain_index()].value,
                                  g[model.final_gain_index()], g[model.final_bias_index()]);

  for (std::size_t li = cfg.num_layers; li-- > 0;) {
    const LayerTrace& lt = tr.layers[li];
    auto G = [&](S slot) -> Matrix& { return g[EncoderModel::layer_index(li, slot)]; };

    // Feed-forward residual branch.
    Matrix d_ffn = dx;
    apply_mask(d_ffn, lt.ffn_drop);
    gemm(lt.act, Op::kTranspose, d_ffn, Op::kNone, G(S::kW2), true);
    accumulate_colsum(d_ffn, G(S::kB2));
    Matrix d_act;
    gemm(d_ffn, Op::kNone, model.layer_param(li, S::kW2), Op::kTranspose, d_act);
    for (std::size_t i = 0; i < d_act.size(); ++i) {
      d_act.values()[i] *= gelu_grad(lt.pre_act.values()[i]);
    }
    gemm(lt.ffn_in, Op::kTranspose, d_act, Op::kNone, G(S::kW1), true);
    accumulate_colsum(d_act, G(S::kB1));
    Matrix d_ffn_in;
    gemm(d_act, Op::kNone, model.layer_param(li, S::kW1), Op::kTranspose, d_ffn_in);
    Matrix d_mid = layer_norm_backward(d_ffn_in, lt.ln2_hat, lt.ln2_rstd,
                                       model.layer_param(li, S::kLn2Gain), G(S::kLn2Gain),
                                       G(S::kLn2Bias));
    for (std::size_t i = 0; i < dx.size(); ++i) dx.values()[i] += d_mid.values()[i];

    // Attention residual branch.
    Matrix d_attn = dx;
    apply_mask(d_attn, lt.attn_drop);
    gemm(lt.context, Op::kTranspose, d_attn, Op::kNone, G(S::kWo), true);
    accumulate_colsum(d_attn, G(S::kBo));
    Matrix d_ctx;
    gemm(d_attn, Op::kNone, model.layer_param(li, S::kWo), Op::kTranspose, d_ctx);

    Matrix dq(t_len, d), dk(t_len, d), dv(t_len, d);
    std::vector<double> dp(t_len);
    for (std::size_t h = 0; h < heads; ++h) {
      const std::size_t off = h * hd;
      const Matrix& p = lt.probs[h];
      for (std::size_t i = 0; i < t_len; ++i) {
        double row_dot = 0.0;
        for (std::size_t j = 0; j < t_len; ++j) {
          double s = 0.0;
          for (std::size_t c = 0; c < hd; ++c) s += d_ctx(i, off + c) * lt.v(j, off + c);
          dp[j] = s;
          row_dot += s * p(i, j);
          const double pij = p(i, j);
          for (std::size_t c = 0; c < hd; ++c) dv(j, off + c) += pij * d_ctx(i, off + c);
        }
        for (std::size_t j = 0; j < t_len; ++j) {
          const double ds = p(i, j) * (dp[j] - row_dot) * scale;
          if (ds == 0.0) continue;
          for (std::size_t c = 0; c < hd; ++c) {
            dq(i, off + c) += ds * lt.k(j, off + c);
            dk(j, off + c) += ds * lt.q(i, off + c);
          }
        }
      }
    }
    gemm(lt.attn_in, Op::kTranspose, dq, Op::kNone, G(S::kWq), true);
    accumulate_colsum(dq, G(S::kBq));
    gemm(lt.attn_in, Op::kTranspose, dk, Op::kNone, G(S::kWk), true);
    accumulate_colsum(dk, G(S::kBk));
    gemm(lt.attn_in, Op::kTranspose, dv, Op::kNone, G(S::kWv), true);
    accumulate_colsum(dv, G(S::kBv));
    Matrix d_attn_in;
    gemm(dq, Op::kNone, model.layer_param(li, S::kWq), Op::kTranspose, d_attn_in);
    gemm(dk, Op::kNone, model.layer_param(li, S::kWk), Op::kTranspose, d_attn_in, true);
    gemm(dv, Op::kNone, model.layer_param(li, S::kWv), Op::kTranspose, d_attn_in, true);
    Matrix d_in = layer_norm_backward(d_attn_in, lt.ln1_hat, lt.ln1_rstd,
                                      model.layer_param(li, S::kLn1Gain), G(S::kLn1Gain),
                                      G(S::kLn1Bias));
    for (std::size_t i = 0; i < dx.size(); ++i) dx.values()[i] += d_in.values()[i];
  }

  apply_mask(dx, tr.emb_drop);
  Matrix& d_tok = g[0];
  Matrix& d_pos = g[1];
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t c = 0; c < d; ++c) {
      d_tok(tr.ids[t], c) += dx(t, c);
      d_pos(t, c) += dx(t, c);
    }
  }
}

GradientSet backward(const EncoderModel& model, const EncoderTrace& trace,
                     const Matrix& d_hidden) {
  GradientSet grads = GradientSet::zeros_like(model);
  backward(model, trace, d_hidden, grads);
  return grads;
}

std::vector<double> mean_pool(const Matrix& hidden, std::span<const std::uint8_t> mask) {
  if (mask.size() != hidden.rows()) throw InputError("mean_pool: mask length mismatch");
  std::vector<double> out(hidden.cols(), 0.0);
  std::size_t active = 0;
  for (std::size_t r = 0; r < hidden.rows(); ++r) {
    if (!mask[r]) continue;
    ++active;
    auto row = hidden.row(r);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += row[c];
  }
  if (active == 0) throw InputError("mean_pool: all positions masked");
  for (double& v : out) v /= static_cast<double>(active);
  return out;
}

std::vector<double> mean_pool(const Matrix& hidden) {
  std::vector<std::uint8_t> mask(hidden.rows(), 1);
  return mean_pool(hidden, mask);
}

Matrix mean_pool_backward(std::span<const double> d_pooled, std::size_t rows) {
  Matrix d(rows, d_pooled.size());
  const double inv = 1.0 / static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < d_pooled.size(); ++c) d(r, c) = d_pooled[c] * inv;
  }
  return d;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw InputError("cosine: width mismatch " + std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()));
  }
  const double nu = l2_norm(u);
  const double nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) throw InputError("cosine: zero-norm vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

}  // namespace semiret
