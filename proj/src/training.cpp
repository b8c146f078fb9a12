#include "semiret/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "semiret/errors.hpp"
#include "semiret/losses.hpp"
#include "semiret/metrics.hpp"
#include "semiret/optim.hpp"

namespace semiret {
namespace {

// Gradient accumulation is split into this many fixed chunks, summed in chunk
// order, so results do not depend on the OpenMP thread count.
constexpr std::size_t kGradChunks = 4;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t dropout_seed(std::uint64_t seed, std::uint64_t step, std::uint64_t sample,
                           std::uint64_t tower) {
  return mix(mix(mix(seed) ^ step) ^ (sample * 4 + tower));
}

struct Prepared {
  std::vector<TokenId> first;   // joint sequence, or the query tower input
  std::vector<TokenId> second;  // document tower input (dual only)
  int label = 0;
  double teacher = 0.0;
};

std::vector<Prepared> prepare(const Vocabulary& vocab, std::span<const TrainingSample> samples,
                              Mechanism mechanism, std::size_t n_relevant, std::size_t max_len) {
  std::vector<Prepared> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    Prepared p;
    p.label = s.label;
    if (mechanism == Mechanism::kInteractive) {
      p.first = assemble_interactive(vocab, s.query, s.document, max_len).trimmed().ids;
    } else {
      p.first = assemble_query(vocab, s.query, max_len).trimmed().ids;
      const auto rel = relevant_for_sample(s, n_relevant);
      p.second = assemble_document_semi(vocab, s.document, rel, max_len).trimmed().ids;
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct SampleLoss {
  double l_cross = 0.0;
  double l_distill = 0.0;
};

SampleLoss sample_loss(double s, int label, double teacher, bool distill) {
  SampleLoss l;
  l.l_cross = label == 1 ? -std::log(s) : -std::log1p(-s);
  if (distill && teacher != 0.0) l.l_distill = -teacher * std::log(s);
  return l;
}

// Parameters + optimizer state for either mechanism, behind one interface.
class Learner {
 public:
  Learner(AnyModel model) : model_(std::move(model)) {
    if (auto* m = std::get_if<InteractiveModel>(&model_)) {
      towers_.push_back(&m->encoder);
    } else {
      auto& d = std::get<DualModel>(model_);
      towers_.push_back(&d.query_encoder);
      towers_.push_back(&d.document_encoder);
    }
    for (auto* t : towers_) {
      state_.push_back(AdamState::for_model(*t));
      total_.push_back(GradientSet::zeros_like(*t));
    }
    chunks_.resize(kGradChunks);
    for (auto& chunk : chunks_) {
      for (auto* t : towers_) chunk.push_back(GradientSet::zeros_like(*t));
    }
  }

  bool interactive() const { return towers_.size() == 1; }
  const AnyModel& model() const { return model_; }

  // Forward + backward for one batch; returns the batch-mean loss parts.
  SampleLoss accumulate(std::span<const Prepared> data, std::span<const std::size_t> batch,
                        std::uint64_t step, std::uint64_t seed, double alpha, bool distill) {
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    std::vector<SampleLoss> losses(batch.size());
    const long chunks = static_cast<long>(kGradChunks);
#pragma omp parallel for schedule(static, 1)
    for (long c = 0; c < chunks; ++c) {
      auto& grads = chunks_[static_cast<std::size_t>(c)];
      for (auto& g : grads) g.set_zero();
      const std::size_t lo = batch.size() * static_cast<std::size_t>(c) / kGradChunks;
      const std::size_t hi = batch.size() * static_cast<std::size_t>(c + 1) / kGradChunks;
      for (std::size_t b = lo; b < hi; ++b) {
        const std::size_t idx = batch[b];
        const Prepared& p = data[idx];
        if (interactive()) {
          const ForwardOptions opt{true, dropout_seed(seed, step, idx, 0)};
          const InteractivePass pass = interactive_forward(*towers_[0], p.first, opt);
          const double s = pass.score.calibrated;
          losses[b] = sample_loss(s, p.label, p.teacher, distill);
          const double d_s = combined_loss_grad(alpha, s, p.label, p.teacher) * inv_b;
          interactive_backward(*towers_[0], pass, d_s, grads[0]);
        } else {
          const TowerPass q = tower_forward(*towers_[0], p.first,
                                            {true, dropout_seed(seed, step, idx, 0)});
          const TowerPass d = tower_forward(*towers_[1], p.second,
                                            {true, dropout_seed(seed, step, idx, 1)});
          const double s = score_dual(q.pooled, d.pooled).calibrated;
          losses[b] = sample_loss(s, p.label, p.teacher, distill);
          const double d_s = combined_loss_grad(alpha, s, p.label, p.teacher) * inv_b;
          const CosineGrad cg = dual_score_backward(q.pooled, d.pooled, d_s);
          tower_backward(*towers_[0], q, cg.d_query, grads[0]);
          tower_backward(*towers_[1], d, cg.d_document, grads[1]);
        }
      }
    }
    for (std::size_t t = 0; t < towers_.size(); ++t) {
      total_[t].set_zero();
      for (auto& chunk : chunks_) total_[t].add(chunk[t]);
    }
    SampleLoss mean;
    for (const auto& l : losses) {
      mean.l_cross += l.l_cross;
      mean.l_distill += l.l_distill;
    }
    mean.l_cross *= inv_b;
    mean.l_distill *= inv_b;
    return mean;
  }

  void apply(double lr) {
    for (std::size_t t = 0; t < towers_.size(); ++t) adam_step(*towers_[t], total_[t], state_[t], lr);
  }

 private:
  AnyModel model_;
  std::vector<EncoderModel*> towers_;
  std::vector<AdamState> state_;
  std::vector<GradientSet> total_;
  std::vector<std::vector<GradientSet>> chunks_;
};

std::string normalized(const std::string& text) {
  std::string out;
  for (const auto& w : split_words(text)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

void TrainConfig::validate(bool have_teacher) const {
  encoder.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
  if (!(peak_lr > 0.0)) throw ConfigError("peak_lr must be positive");
  if (total_steps != 0 && warmup_steps >= total_steps) {
    throw ConfigError("warmup_steps must be smaller than total_steps");
  }
  if (mechanism == Mechanism::kInteractive && (use_distillation || use_embedding_reuse)) {
    throw ConfigError("knowledge transfer applies to dual-encoder students only");
  }
  if ((use_distillation || use_embedding_reuse) && !have_teacher) {
    throw ConfigError("knowledge transfer requested but no teacher checkpoint supplied");
  }
  if (mechanism == Mechanism::kSemiInteractive && n_relevant == 0) {
    throw ConfigError("semi-interactive training needs n_relevant >= 1");
  }
}

std::size_t TrainConfig::effective_n_relevant() const {
  return mechanism == Mechanism::kSemiInteractive ? n_relevant : 0;
}

nlohmann::json train_config_to_json(const TrainConfig& c) {
  return {{"mechanism", to_string(c.mechanism)},
          {"n_relevant", c.n_relevant},
          {"alpha", c.alpha},
          {"use_embedding_reuse", c.use_embedding_reuse},
          {"use_distillation", c.use_distillation},
          {"batch_size", c.batch_size},
          {"peak_lr", c.peak_lr},
          {"warmup_steps", c.warmup_steps},
          {"total_steps", c.total_steps},
          {"max_epochs", c.max_epochs},
          {"patience", c.patience},
          {"seed", c.seed},
          {"encoder", config_to_json(c.encoder)}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    if (j.contains("mechanism")) c.mechanism = parse_mechanism(j.at("mechanism").get<std::string>());
    c.n_relevant = j.value("n_relevant", c.n_relevant);
    c.alpha = j.value("alpha", c.alpha);
    c.use_embedding_reuse = j.value("use_embedding_reuse", c.use_embedding_reuse);
    c.use_distillation = j.value("use_distillation", c.use_distillation);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.peak_lr = j.value("peak_lr", c.peak_lr);
    c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
    c.total_steps = j.value("total_steps", c.total_steps);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
    if (j.contains("encoder")) c.encoder = config_from_json(j.at("encoder"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad training config: ") + e.what());
  }
  return c;
}

std::string TrainReport::to_jsonl() const {
  std::string out;
  for (const auto& s : steps) {
    out += nlohmann::json{{"step", s.step},       {"epoch", s.epoch}, {"lr", s.lr},
                          {"alpha", s.alpha},     {"l_cross", s.l_cross},
                          {"l_distill", s.l_distill}, {"l", s.l}}
               .dump();
    out += '\n';
  }
  for (const auto& e : evals) {
    out += nlohmann::json{{"epoch", e.epoch}, {"val_auc", e.val_auc}}.dump();
    out += '\n';
  }
  return out;
}

void TrainReport::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write report " + path.string());
  out << to_jsonl();
}

std::vector<std::string> relevant_for_sample(const TrainingSample& sample, std::size_t n) {
  std::vector<std::string> out;
  if (n == 0) return out;
  const std::string own = normalized(sample.query);
  for (const auto& rq : sample.relevant_queries) {
    if (normalized(rq) == own) continue;
    out.push_back(rq);
    if (out.size() == n) break;
  }
  return out;
}

std::vector<double> teacher_scores(const InteractiveModel& teacher,
                                   std::span<const TrainingSample> batch) {
  std::vector<double> out(batch.size());
  const long n = static_cast<long>(batch.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    const auto& s = batch[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = score_interactive(teacher, s.query, s.document).calibrated;
  }
  return out;
}

DualModel reuse_embeddings(const InteractiveModel& teacher, DualModel student) {
  const Matrix& src = teacher.encoder.token_embeddings();
  for (EncoderModel* tower : {&student.query_encoder, &student.document_encoder}) {
    Matrix& dst = tower->token_embeddings();
    if (!dst.same_shape(src)) {
      throw ConfigError("embedding reuse: teacher embeddings are " + std::to_string(src.rows()) +
                        "x" + std::to_string(src.cols()) + " but student embeddings are " +
                        std::to_string(dst.rows()) + "x" + std::to_string(dst.cols()));
    }
    dst = src;
  }
  return student;
}

std::vector<double> score_samples(const AnyModel& model, std::span<const TrainingSample> samples) {
  std::vector<double> scores(samples.size());
  const long n = static_cast<long>(samples.size());
  if (const auto* im = std::get_if<InteractiveModel>(&model)) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      const auto& s = samples[static_cast<std::size_t>(i)];
      scores[static_cast<std::size_t>(i)] = score_interactive(*im, s.query, s.document).calibrated;
    }
    return scores;
  }
  const auto& dm = std::get<DualModel>(model);
  // Many samples share a query or a document layout; encode each once.
  std::map<std::string, std::size_t> query_slot;
  std::map<std::vector<std::string>, std::size_t> doc_slot;
  std::vector<std::string> queries;
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& s : samples) {
    auto [qit, qnew] = query_slot.try_emplace(s.query, queries.size());
    if (qnew) queries.push_back(s.query);
    std::vector<std::string> key = relevant_for_sample(s, dm.n_relevant);
    auto rel = key;
    key.insert(key.begin(), s.document);
    auto [dit, dnew] = doc_slot.try_emplace(std::move(key), docs.size());
    if (dnew) docs.emplace_back(s.document, std::move(rel));
    pairs.emplace_back(qit->second, dit->second);
  }
  std::vector<Representation> qrep(queries.size());
  std::vector<Representation> drep(docs.size());
  const long nq = static_cast<long>(queries.size());
  const long nd = static_cast<long>(docs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < nq; ++i) {
    qrep[static_cast<std::size_t>(i)] = encode_query(dm, queries[static_cast<std::size_t>(i)]);
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < nd; ++i) {
    const auto& [doc, rel] = docs[static_cast<std::size_t>(i)];
    drep[static_cast<std::size_t>(i)] = encode_document(dm, doc, rel);
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    scores[i] = score_dual(qrep[pairs[i].first], drep[pairs[i].second]).calibrated;
  }
  return scores;
}

TrainResult train(const TrainConfig& config, std::shared_ptr<const Vocabulary> vocab,
                  const Dataset& train_set, const Dataset& valid_set,
                  const InteractiveModel* teacher) {
  config.validate(teacher != nullptr);
  if (train_set.empty() || valid_set.empty()) throw InputError("train: empty dataset");
  if (!vocab) throw ConfigError("train: missing vocabulary");

  const std::size_t n_rel = config.effective_n_relevant();
  AnyModel initial = [&]() -> AnyModel {
    if (config.mechanism == Mechanism::kInteractive) {
      return InteractiveModel::create(vocab, config.encoder, config.seed);
    }
    DualModel dm = DualModel::create(vocab, config.encoder, config.mechanism, n_rel, config.seed);
    if (config.use_embedding_reuse) dm = reuse_embeddings(*teacher, std::move(dm));
    return dm;
  }();
  const std::size_t max_len = config.encoder.max_seq_len;

  std::vector<Prepared> data = prepare(*vocab, train_set.samples, config.mechanism, n_rel, max_len);
  const bool distill = config.use_distillation;
  const double alpha = distill ? config.alpha : 1.0;
  if (distill) {
    const auto t = teacher_scores(*teacher, train_set.samples);
    for (std::size_t i = 0; i < data.size(); ++i) data[i].teacher = t[i];
  }

  const std::size_t steps_per_epoch =
      (data.size() + config.batch_size - 1) / config.batch_size;
  const std::uint64_t total_steps =
      config.total_steps != 0 ? config.total_steps : config.max_epochs * steps_per_epoch;
  const std::uint64_t warmup = config.warmup_steps != 0 ? config.warmup_steps : total_steps / 10;

  std::vector<int> valid_labels;
  for (const auto& s : valid_set.samples) valid_labels.push_back(s.label);

  Learner learner(std::move(initial));
  TrainResult result{learner.model(), {}};
  TrainReport& report = result.report;
  report.best_val_auc = -1.0;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t step = 0;
  std::size_t since_best = 0;
  double step_seconds = 0.0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs && step < total_steps; ++epoch) {
    std::mt19937_64 rng(mix(config.seed) ^ epoch);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size() && step < total_steps;
         start += config.batch_size) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      ++step;
      const SampleLoss loss = learner.accumulate(data, batch, step, config.seed, alpha, distill);
      StepRecord rec;
      rec.step = step;
      rec.epoch = epoch;
      rec.alpha = alpha;
      rec.l_cross = loss.l_cross;
      rec.l_distill = loss.l_distill;
      rec.l = combined_loss(alpha, loss.l_cross, loss.l_distill);
      if (!std::isfinite(rec.l)) {
        throw TrainingError("non-finite loss at step " + std::to_string(step));
      }
      rec.lr = lr_schedule(step, config.peak_lr, warmup, total_steps + 1);
      learner.apply(rec.lr);
      report.steps.push_back(rec);
      step_seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    const auto val_scores = score_samples(learner.model(), valid_set.samples);
    const double val_auc = auc(val_scores, valid_labels);
    report.evals.push_back({epoch, val_auc});
    report.stopping_epoch = epoch;
    if (val_auc > report.best_val_auc) {
      report.best_val_auc = val_auc;
      report.best_epoch = epoch;
      result.model = learner.model();
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  report.seconds_per_step = step == 0 ? 0.0 : step_seconds / static_cast<double>(step);
  return result;
}

}  // namespace semiret
