#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "semiret/checkpoint.hpp"
#include "semiret/corpus.hpp"
#include "semiret/errors.hpp"
#include "semiret/evaluation.hpp"
#include "semiret/index.hpp"
#include "semiret/losses.hpp"
#include "semiret/metrics.hpp"
#include "semiret/mining.hpp"
#include "semiret/training.hpp"

using namespace semiret;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1 -------------------------------------------------------------------------

Outcome gradient_suite() {
  const auto t0 = Clock::now();
  testing::GradCheckOptions opt;
  opt.num_layers = 2;
  opt.hidden_dim = 32;
  opt.num_heads = 4;
  opt.ffn_dim = 64;
  opt.epsilon = 1e-5;
  double worst = 0.0;
  std::string where;
  for (Mechanism m : {Mechanism::kInteractive, Mechanism::kNonInteractive,
                      Mechanism::kSemiInteractive}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = testing::check_mechanism_gradients(m, seed, opt);
      if (r.max_rel_error > worst) {
        worst = r.max_rel_error;
        where = to_string(m) + "/" + r.worst_parameter;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-5 && secs < 120.0,
          fmt("max relative error %.3g at %s, %.1f s", worst, where.c_str(), secs)};
}

// 2 -------------------------------------------------------------------------

Outcome metric_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t auc_bad = 0, ndcg_bad = 0, search_bad = 0;
  double ndcg_worst = 0.0;

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = (trial % 2 == 0) ? static_cast<double>(rng() % 10) : std::ldexp(static_cast<double>(rng() >> 11), -53);
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[n - 1] = 0;
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (y[i] != 1 || y[j] != 0) continue;
        pairs += 1.0;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
    if (auc(s, y) != wins / pairs) ++auc_bad;
  }

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    std::vector<int> judged(n);
    for (auto& g : judged) g = static_cast<int>(rng() % 4);
    std::vector<int> retrieved = judged;
    std::shuffle(retrieved.begin(), retrieved.end(), rng);
    const std::size_t k = 1 + rng() % 12;
    auto dcg = [k](const std::vector<int>& g) {
      double total = 0.0;
      for (std::size_t i = 0; i < std::min(k, g.size()); ++i) {
        total += (std::pow(2.0, g[i]) - 1.0) / std::log2(static_cast<double>(i + 2));
      }
      return total;
    };
    std::vector<int> ideal = judged;
    std::sort(ideal.rbegin(), ideal.rend());
    const double expect = dcg(ideal) == 0.0 ? 0.0 : dcg(retrieved) / dcg(ideal);
    const double err = std::abs(ndcg_at_k({retrieved, judged}, k) - expect);
    ndcg_worst = std::max(ndcg_worst, err);
    if (err > 1e-12) ++ndcg_bad;
  }

  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t docs = 1 + rng() % 200;
    const std::size_t dim = 2 + rng() % 31;
    std::vector<IndexEntry> entries;
    for (std::size_t i = 0; i < docs; ++i) {
      std::vector<double> v(dim);
      double norm = 0.0;
      for (auto& x : v) {
        x = g(rng);
        norm += x * x;
      }
      for (auto& x : v) x /= std::sqrt(norm);
      entries.push_back({"d" + std::to_string(rng() % 100000) + "-" + std::to_string(i), v, {}});
    }
    const Index index(entries, dim, "oracle");
    std::vector<double> q(dim);
    double qn = 0.0;
    for (auto& x : q) {
      x = g(rng);
      qn += x * x;
    }
    std::vector<std::pair<double, std::string>> brute;
    for (const auto& e : entries) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) dot += e.vector[j] * (q[j] / std::sqrt(qn));
      brute.emplace_back(dot, e.doc_id);
    }
    std::sort(brute.begin(), brute.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    const std::size_t k = 1 + rng() % 20;
    const auto hits = index.search(q, k);
    bool same = hits.size() == std::min(k, docs);
    for (std::size_t i = 0; same && i < hits.size(); ++i) same = hits[i].doc_id == brute[i].second;
    if (!same) ++search_bad;
  }
  const double secs = seconds_since(t0);
  return {auc_bad == 0 && ndcg_bad == 0 && search_bad == 0 && secs < 60.0,
          fmt("auc mismatches %zu/200, ndcg mismatches %zu/200 (worst %.2g), search mismatches %zu/100, %.1f s",
              auc_bad, ndcg_bad, ndcg_worst, search_bad, secs)};
}

// 3 -------------------------------------------------------------------------

Outcome loss_exactness() {
  const double ce = cross_entropy_loss(std::vector<double>{0.5}, std::vector<int>{1});
  const double ce0 = cross_entropy_loss(std::vector<double>{0.5}, std::vector<int>{0});
  const double kd = distill_loss(std::vector<double>{0.5}, std::vector<double>{0.8});
  const double mix = combined_loss(0.7, 1.0, 0.5);
  const double e1 = std::abs(ce - 0.6931471805599453);
  const double e2 = std::abs(ce0 - 0.6931471805599453);
  const double e3 = std::abs(kd - 0.5545177444479562);
  const double e4 = std::abs(mix - 0.85);
  const double worst = std::max({e1, e2, e3, e4});
  return {worst < 1e-9, fmt("cross %.11f, distill %.11f, mix %.11f, worst error %.2g", ce, kd, mix, worst)};
}

// 4 and 5 -------------------------------------------------------------------

struct QualityRuns {
  std::map<std::string, std::vector<double>> auc;
  double core_seconds = 0.0;   // interactive, non, semi, semi+kt
  double extra_seconds = 0.0;  // initialize-only, distillation-only

  double mean(const std::string& name) const {
    const auto& v = auc.at(name);
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }
};

double test_auc(const AnyModel& model, const Dataset& test) {
  const auto scores = score_samples(model, test.samples);
  std::vector<int> labels;
  for (const auto& s : test.samples) labels.push_back(s.label);
  return auc(scores, labels);
}

QualityRuns quality_runs() {
  QualityRuns runs;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SynthConfig synth;
    synth.seed = synth.seed + seed - 1;
    const Dataset ds = generate_corpus(synth).dataset;
    const Dataset train_set = ds.subset(Split::kTrain);
    const Dataset valid_set = ds.subset(Split::kValid);
    const Dataset test_set = ds.subset(Split::kTest);
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::build(train_set.texts()));

    TrainConfig base;
    base.seed = seed;
    base.encoder.vocab_size = vocab->size();
    auto run = [&](const std::string& name, TrainConfig c, const InteractiveModel* teacher,
                   double& clock) {
      const auto t0 = Clock::now();
      TrainResult r = train(c, vocab, train_set, valid_set, teacher);
      const double a = test_auc(r.model, test_set);
      clock += seconds_since(t0);
      runs.auc[name].push_back(a);
      std::printf("  seed %llu %-22s test AUC %.4f (best epoch %zu)\n",
                  static_cast<unsigned long long>(seed), name.c_str(), a, r.report.best_epoch);
      std::fflush(stdout);
      return r;
    };

    TrainConfig ci = base;
    ci.mechanism = Mechanism::kInteractive;
    const TrainResult teacher_run = run("interactive", ci, nullptr, runs.core_seconds);
    const auto& teacher = std::get<InteractiveModel>(teacher_run.model);

    TrainConfig cn = base;
    cn.mechanism = Mechanism::kNonInteractive;
    run("non-interactive", cn, nullptr, runs.core_seconds);

    TrainConfig cs = base;
    cs.mechanism = Mechanism::kSemiInteractive;
    run("semi-interactive", cs, nullptr, runs.core_seconds);

    TrainConfig ck = cs;
    ck.use_embedding_reuse = true;
    ck.use_distillation = true;
    run("semi-interactive+kt", ck, &teacher, runs.core_seconds);

    TrainConfig ce = cs;
    ce.use_embedding_reuse = true;
    run("semi+initialize", ce, &teacher, runs.extra_seconds);

    TrainConfig cd = cs;
    cd.use_distillation = true;
    run("semi+distillation", cd, &teacher, runs.extra_seconds);
  }
  return runs;
}

Outcome quality_ordering(const QualityRuns& r) {
  const double i = r.mean("interactive"), k = r.mean("semi-interactive+kt");
  const double s = r.mean("semi-interactive"), n = r.mean("non-interactive");
  const bool ordered = i - k >= 0.01 && k - s >= 0.01 && s - n >= 0.01;
  const bool in_time = r.core_seconds < 1800.0;
  return {ordered && in_time,
          fmt("interactive %.4f, semi+kt %.4f, semi %.4f, non %.4f (gaps %+.4f %+.4f %+.4f), %.0f s",
              i, k, s, n, i - k, k - s, s - n, r.core_seconds)};
}

Outcome ablation_directions(const QualityRuns& r) {
  constexpr double tol = 0.005;
  const double n3 = r.mean("semi-interactive"), n0 = r.mean("non-interactive");
  const double both = r.mean("semi-interactive+kt");
  const double init = r.mean("semi+initialize"), dist = r.mean("semi+distillation");
  const double best_single = std::max(init, dist);
  const bool fig_n = n3 > n0;
  const bool kt_order = both >= best_single - tol && best_single >= n3 - tol;
  const bool usage = n3 - n0 >= 0.01;
  return {fig_n && kt_order && usage,
          fmt("N=3 %.4f vs N=0 %.4f; init+distill %.4f, initialize %.4f, distillation %.4f, "
              "semi %.4f; relevant queries in train+test minus neither %+.4f",
              n3, n0, both, init, dist, n3, n3 - n0)};
}

// 6 -------------------------------------------------------------------------

Outcome latency_asymmetry() {
  const auto t0 = Clock::now();
  SynthConfig synth;
  const Dataset ds = generate_corpus(synth).dataset;
  std::vector<IndexDocument> corpus;
  std::vector<std::string> queries;
  std::set<std::string> seen;
  for (const auto& s : ds.samples) {
    if (corpus.size() < 256 && seen.insert(s.doc_id).second) {
      corpus.push_back({s.doc_id, s.document, s.relevant_queries});
    }
    if (queries.size() < 20 && s.split == Split::kTest && s.label == 1) queries.push_back(s.query);
  }
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::build(ds.texts()));
  EncoderConfig enc;
  enc.vocab_size = vocab->size();
  const InteractiveModel inter = InteractiveModel::create(vocab, enc, 1);
  const DualModel non = DualModel::create(vocab, enc, Mechanism::kNonInteractive, 0, 1);
  const DualModel semi = DualModel::create(vocab, enc, Mechanism::kSemiInteractive, 3, 1);
  BenchOptions opt;
  opt.iterations = 3;
  const LatencyReport rep = bench_latency(inter, non, semi, corpus, queries, opt);
  const double mi = rep.get(Mechanism::kInteractive).mean_ms;
  const double mn = rep.get(Mechanism::kNonInteractive).mean_ms;
  const double ms = rep.get(Mechanism::kSemiInteractive).mean_ms;
  const double secs = seconds_since(t0);
  const double ratio = mi / mn;
  const double semi_gap = std::abs(ms - mn) / mn;
  return {ratio >= 4.0 && semi_gap <= 0.15 && secs < 300.0,
          fmt("interactive %.3f ms, non %.3f ms, semi %.3f ms per query over %zu docs; ratio %.1fx, "
              "semi vs non %.1f%%, %.1f s",
              mi, mn, ms, corpus.size(), ratio, 100.0 * semi_gap, secs)};
}

// 7 -------------------------------------------------------------------------

Outcome mining_recovery() {
  std::size_t same = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SynthConfig synth;
    synth.seed += seed;
    const SynthCorpus corpus = generate_corpus(synth);
    const ClickGraph graph = build_graph(corpus.click_log);
    for (const auto& doc : graph.documents()) {
      for (const auto& q : top_n_queries(graph, doc, 3)) {
        ++total;
        if (corpus.topic_of_query(q.query) == corpus.topic_of_doc(doc)) ++same;
      }
    }
  }
  const double share = total == 0 ? 0.0 : static_cast<double>(same) / static_cast<double>(total);

  std::mt19937_64 rng(77);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ClickLogRecord> records;
    const std::size_t nq = 1 + rng() % 15;
    for (std::size_t q = 0; q < nq; ++q) {
      const std::size_t shown = 1 + rng() % 10;
      for (std::size_t i = 0; i < shown; ++i) {
        records.push_back({"q" + std::to_string(q), "xx", "doc", rng() % 3 == 0});
      }
    }
    std::shuffle(records.begin(), records.end(), rng);
    const std::size_t n = 1 + rng() % 5;
    const std::uint64_t min_imp = rng() % 5;
    const double smoothing = static_cast<double>(rng() % 3) * 0.5;
    std::map<std::string, std::pair<double, double>> counts;
    for (const auto& r : records) {
      counts[r.query_text].first += 1.0;
      counts[r.query_text].second += r.clicked ? 1.0 : 0.0;
    }
    std::vector<std::tuple<double, double, std::string>> rows;
    for (const auto& [q, c] : counts) {
      if (c.first < static_cast<double>(min_imp)) continue;
      rows.emplace_back((c.second + smoothing) / (c.first + 2.0 * smoothing), c.second, q);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
      return std::get<2>(a) < std::get<2>(b);
    });
    if (rows.size() > n) rows.resize(n);
    const auto got = top_n_queries(build_graph(records), "doc", n, min_imp, smoothing);
    bool same_list = got.size() == rows.size();
    for (std::size_t i = 0; same_list && i < got.size(); ++i) same_list = got[i].query == std::get<2>(rows[i]);
    if (!same_list) ++mismatches;
  }
  return {share >= 0.9 && mismatches == 0,
          fmt("same-topic share of top-3 %.4f over %zu mined queries; oracle mismatches %zu/100",
              share, total, mismatches)};
}

// 8 -------------------------------------------------------------------------

Outcome pca_suite() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  double ortho_worst = 0.0;
  bool monotone = true;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rng() % 60, d = 3 + rng() % 20;
    std::vector<std::vector<double>> v(n, std::vector<double>(d));
    for (auto& row : v) {
      for (std::size_t j = 0; j < d; ++j) row[j] = g(rng) * static_cast<double>(j + 1);
    }
    const PcaProjection p = pca_project(v);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) dot += p.components[a][j] * p.components[b][j];
        ortho_worst = std::max(ortho_worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
      }
    }
    const auto& e = p.explained_variance_ratio;
    monotone = monotone && e[0] >= e[1] && e[1] >= e[2];
  }

  std::vector<std::vector<double>> line;
  for (int i = 0; i < 8; ++i) line.push_back({0.5 * i, -1.0 * i, 2.0 * i + 1.0});
  const auto ratios = pca_project(line).explained_variance_ratio;
  const bool collinear = std::abs(ratios[0] - 1.0) < 1e-12 && std::abs(ratios[1]) < 1e-12 &&
                         std::abs(ratios[2]) < 1e-12;

  const Dataset ds = generate_corpus(testing::small_corpus_config(3)).dataset;
  auto vocab = testing::vocabulary_for(ds);
  const DualModel model = DualModel::create(vocab, testing::tiny_encoder(vocab->size()),
                                            Mechanism::kSemiInteractive, 3, 2);
  const RepresentationCloud cloud = collect_representations(model, ds.subset(Split::kTest).samples);
  const std::string csv = pca_to_csv(pca_project(cloud.vectors), cloud.labels);
  std::istringstream in(csv);
  std::string line_text;
  std::getline(in, line_text);
  bool parses = line_text == "x,y,z,kind,lang";
  std::size_t rows = 0;
  while (std::getline(in, line_text)) {
    ++rows;
    std::istringstream fields(line_text);
    std::string f;
    std::vector<std::string> cols;
    while (std::getline(fields, f, ',')) cols.push_back(f);
    parses = parses && cols.size() == 5 && (cols[3] == "query" || cols[3] == "document");
    for (int c = 0; parses && c < 3; ++c) {
      std::size_t used = 0;
      std::stod(cols[c], &used);
      parses = used == cols[c].size();
    }
  }
  const bool row_count = rows == cloud.vectors.size();
  return {ortho_worst < 1e-8 && monotone && collinear && parses && row_count,
          fmt("orthonormality error %.2g, variance non-increasing %s, collinear ratios [%.3g, %.3g, %.3g], "
              "csv rows %zu for %zu vectors",
              ortho_worst, monotone ? "yes" : "no", ratios[0], ratios[1], ratios[2], rows,
              cloud.vectors.size())};
}

// 9 -------------------------------------------------------------------------

Outcome determinism() {
  testing::TempDir dir("acceptance");
  SynthConfig synth = testing::small_corpus_config(42);
  std::string gen[2];
  for (int i = 0; i < 2; ++i) {
    const SynthCorpus c = generate_corpus(synth);
    const auto path = dir / ("dataset" + std::to_string(i) + ".jsonl");
    save_dataset(c.dataset, path);
    write_click_log(c.click_log, dir / ("clicks" + std::to_string(i) + ".tsv"));
    gen[i] = testing::read_file(path) + testing::read_file(dir / ("clicks" + std::to_string(i) + ".tsv"));
  }
  const Dataset ds = load_dataset(dir / "dataset0.jsonl");
  const Dataset train_set = ds.subset(Split::kTrain), valid_set = ds.subset(Split::kValid);
  auto vocab = testing::vocabulary_for(train_set);
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.batch_size = 16;
  cfg.encoder = testing::tiny_encoder(vocab->size());
  std::string ckpt[2], index[2];
  std::vector<IndexDocument> docs;
  std::set<std::string> seen;
  for (const auto& s : ds.samples) {
    if (seen.insert(s.doc_id).second) docs.push_back({s.doc_id, s.document, s.relevant_queries});
  }
  for (int i = 0; i < 2; ++i) {
    const TrainResult r = train(cfg, vocab, train_set, valid_set);
    const auto path = dir / ("model" + std::to_string(i) + ".json");
    save_checkpoint(r.model, path);
    ckpt[i] = testing::read_file(path) + r.report.to_jsonl();
    const auto ipath = dir / ("index" + std::to_string(i) + ".json");
    save_index(build_index(std::get<DualModel>(r.model), docs), ipath);
    index[i] = testing::read_file(ipath);
  }
  const bool g = gen[0] == gen[1] && !gen[0].empty();
  const bool t = ckpt[0] == ckpt[1] && !ckpt[0].empty();
  const bool x = index[0] == index[1] && !index[0].empty();
  return {g && t && x, fmt("gen-data %s, train %s, build_index %s", g ? "identical" : "differs",
                           t ? "identical" : "differs", x ? "identical" : "differs")};
}

void report(int id, const char* title, const Outcome& o, int& passed) {
  if (o.pass) ++passed;
  std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  int passed = 0;
  try {
    report(1, "gradient suite", gradient_suite(), passed);
    report(2, "metric oracles", metric_oracles(), passed);
    report(3, "loss exactness", loss_exactness(), passed);
    report(6, "latency asymmetry", latency_asymmetry(), passed);
    report(7, "mining recovery", mining_recovery(), passed);
    report(8, "pca suite", pca_suite(), passed);
    report(9, "determinism", determinism(), passed);
    std::printf("training quality runs (3 seeds, default corpus and encoder)\n");
    const QualityRuns runs = quality_runs();
    report(4, "quality ordering", quality_ordering(runs), passed);
    report(5, "ablation directions", ablation_directions(runs), passed);
  } catch (const std::exception& e) {
    std::printf("acceptance harness error: %s\n", e.what());
    return 1;
  }
  std::printf("%d/9 criteria passed\n", passed);
  return 0;
}
