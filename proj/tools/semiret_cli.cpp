#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiret/corpus.hpp"
#include "semiret/errors.hpp"
#include "semiret/evaluation.hpp"
#include "semiret/index.hpp"
#include "semiret/mining.hpp"
#include "semiret/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace semiret;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

fs::path out_dir(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

Dataset split_of(const Dataset& data, const std::string& split) {
  if (split == "all") return data;
  return data.subset(parse_split(split));
}

// One entry per doc_id, relevant queries taken from its first sample.
std::vector<IndexDocument> documents_of(const Dataset& data) {
  std::vector<IndexDocument> docs;
  std::set<std::string> seen;
  for (const auto& s : data.samples) {
    if (seen.insert(s.doc_id).second) docs.push_back({s.doc_id, s.document, s.relevant_queries});
  }
  return docs;
}

double average_auc(const AnyModel& model, const Dataset& test) {
  EvalOptions opt;
  opt.search = false;
  return evaluate_run(model, test, opt).find("auc", "avg").value;
}

struct Common {
  std::uint64_t seed = 1;
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool needs_out) {
  cmd->add_option("--seed", c.seed, "Seed for every random choice");
  cmd->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  auto* out = cmd->add_option("--out", c.out, "Output directory");
  if (needs_out) out->required();
}

// gen-data ------------------------------------------------------------------

struct GenArgs {
  Common common;
  bool seed_given = false;
};

int run_gen(const GenArgs& a, const CLI::App& cmd) {
  SynthConfig cfg;
  if (!a.common.config.empty()) cfg = synth_config_from_json(read_json(a.common.config));
  if (cmd.count("--seed") > 0) cfg.seed = a.common.seed;
  const SynthCorpus corpus = generate_corpus(cfg);
  const fs::path dir = out_dir(a.common.out);
  save_dataset(corpus.dataset, dir / "dataset.jsonl");
  write_click_log(corpus.click_log, dir / "clicks.tsv");
  write_text(dir / "synth_config.json", synth_config_to_json(cfg).dump(2) + "\n");
  std::cout << "wrote " << corpus.dataset.size() << " samples and " << corpus.click_log.size()
            << " click records to " << dir.string() << "\n";
  return 0;
}

// train ---------------------------------------------------------------------

struct TrainArgs {
  Common common;
  std::string data;
  std::string teacher;
  std::optional<std::string> mechanism;
  std::optional<std::size_t> n_relevant;
  std::optional<double> alpha;
  std::optional<std::size_t> epochs;
  std::optional<double> lr;
  bool reuse = false;
  bool distill = false;
};

TrainConfig resolve_train_config(const Common& common, const CLI::App& cmd) {
  TrainConfig cfg;
  if (!common.config.empty()) cfg = train_config_from_json(read_json(common.config));
  if (cmd.count("--seed") > 0) cfg.seed = common.seed;
  return cfg;
}

std::shared_ptr<const Vocabulary> training_vocabulary(const Dataset& train_set,
                                                      const InteractiveModel* teacher) {
  if (teacher != nullptr) return teacher->vocab;
  return std::make_shared<const Vocabulary>(Vocabulary::build(train_set.texts()));
}

int run_train(const TrainArgs& a, const CLI::App& cmd) {
  TrainConfig cfg = resolve_train_config(a.common, cmd);
  if (a.mechanism) cfg.mechanism = parse_mechanism(*a.mechanism);
  if (a.n_relevant) cfg.n_relevant = *a.n_relevant;
  if (a.alpha) cfg.alpha = *a.alpha;
  if (a.epochs) cfg.max_epochs = *a.epochs;
  if (a.lr) cfg.peak_lr = *a.lr;
  cfg.use_embedding_reuse = cfg.use_embedding_reuse || a.reuse;
  cfg.use_distillation = cfg.use_distillation || a.distill;

  const Dataset data = load_dataset(a.data);
  const Dataset train_set = data.subset(Split::kTrain);
  const Dataset valid_set = data.subset(Split::kValid);
  std::optional<InteractiveModel> teacher;
  if (!a.teacher.empty()) teacher = load_interactive(a.teacher);
  const auto vocab = training_vocabulary(train_set, teacher ? &*teacher : nullptr);
  cfg.encoder.vocab_size = vocab->size();
  if (teacher) cfg.encoder = teacher->encoder.config();

  const TrainResult result = train(cfg, vocab, train_set, valid_set, teacher ? &*teacher : nullptr);
  const fs::path dir = out_dir(a.common.out);
  save_checkpoint(result.model, dir / "model.json");
  result.report.save(dir / "report.jsonl");
  write_text(dir / "train_config.json", train_config_to_json(cfg).dump(2) + "\n");
  std::cout << to_string(cfg.mechanism) << ": best validation AUC "
            << result.report.best_val_auc << " at epoch " << result.report.best_epoch
            << ", stopped after epoch " << result.report.stopping_epoch << "\n";
  return 0;
}

// eval ----------------------------------------------------------------------

struct EvalArgs {
  Common common;
  std::string model;
  std::string data;
  std::string split = "test";
  EvalOptions options;
};

int run_eval(EvalArgs a, const CLI::App& cmd) {
  if (cmd.count("--seed") > 0) a.options.seed = a.common.seed;
  const AnyModel model = load_checkpoint(a.model);
  const Dataset test = split_of(load_dataset(a.data), a.split);
  const EvalReport report = evaluate_run(model, test, a.options);
  for (const auto& r : report.rows) {
    std::cout << r.mechanism << "\t" << r.language_pair << "\t" << r.metric << "\t"
              << std::fixed << std::setprecision(4) << r.value << "\t" << r.n_samples << "\n";
  }
  if (!a.common.out.empty()) report.save(out_dir(a.common.out) / "report.json");
  return 0;
}

// mine ----------------------------------------------------------------------

struct MineArgs {
  Common common;
  std::string mode = "ctr";
  std::string clicks;
  std::string data;
  std::size_t n = 3;
  std::uint64_t min_impressions = 3;
  double smoothing = 0.5;
};

int run_mine(const MineArgs& a) {
  std::map<std::string, std::vector<std::string>> mined;
  json listing = json::array();
  if (a.mode == "ctr") {
    if (a.clicks.empty()) throw ConfigError("mine --mode ctr needs --clicks");
    const ClickLogReadResult log = read_click_log(a.clicks);
    if (log.malformed > 0) {
      std::cerr << "warning: skipped " << log.malformed << " malformed click-log lines\n";
    }
    const ClickGraph graph = build_graph(log.records);
    for (const auto& doc : graph.documents()) {
      json queries = json::array();
      for (const auto& q : top_n_queries(graph, doc, a.n, a.min_impressions, a.smoothing)) {
        mined[doc].push_back(q.query);
        queries.push_back(
            {{"query", q.query}, {"query_lang", q.query_lang}, {"ctr", q.ctr}, {"clicks", q.clicks}});
      }
      listing.push_back({{"doc_id", doc}, {"queries", queries}});
    }
  } else if (a.mode == "ready-made") {
    if (a.data.empty()) throw ConfigError("mine --mode ready-made needs --data");
    const Dataset data = load_dataset(a.data);
    std::vector<LabeledPair> pairs;
    for (const auto& s : data.subset(Split::kTrain).samples) pairs.push_back({s.query, s.doc_id, s.label});
    for (const auto& d : documents_of(data)) {
      const auto picked = ready_made_select(d.doc_id, pairs, a.n, a.common.seed);
      mined[d.doc_id] = picked;
      listing.push_back({{"doc_id", d.doc_id}, {"queries", picked}});
    }
  } else {
    throw ConfigError("unknown mining mode '" + a.mode + "' (expected ctr or ready-made)");
  }

  const fs::path dir = out_dir(a.common.out);
  std::string lines;
  for (const auto& entry : listing) lines += entry.dump() + "\n";
  write_text(dir / "mined.jsonl", lines);
  if (!a.data.empty()) {
    Dataset data = load_dataset(a.data);
    for (auto& s : data.samples) {
      auto it = mined.find(s.doc_id);
      s.relevant_queries = it == mined.end() ? std::vector<std::string>{} : it->second;
    }
    save_dataset(data, dir / "dataset.jsonl");
  }
  std::cout << "mined queries for " << listing.size() << " documents\n";
  return 0;
}

// index / search ------------------------------------------------------------

struct IndexArgs {
  Common common;
  std::string model;
  std::string data;
  std::string split = "all";
};

int run_index(const IndexArgs& a) {
  const DualModel model = load_dual(a.model);
  const auto docs = documents_of(split_of(load_dataset(a.data), a.split));
  const Index index = build_index(model, docs);
  save_index(index, out_dir(a.common.out) / "index.json");
  std::cout << "indexed " << index.size() << " documents (dim " << index.dim() << ")\n";
  return 0;
}

struct SearchArgs {
  std::string model;
  std::string index;
  std::vector<std::string> queries;
  std::size_t k = 10;
};

int run_search(const SearchArgs& a) {
  const DualModel model = load_dual(a.model);
  const Index index = load_index(a.index);
  if (index.config_hash() != model_config_hash(model)) {
    throw ConfigError("index " + a.index + " was built with a different model configuration");
  }
  for (const auto& q : a.queries) {
    const auto hits = index.search(encode_query(model, q), a.k);
    for (std::size_t r = 0; r < hits.size(); ++r) {
      std::cout << json{{"query", q}, {"rank", r + 1}, {"doc_id", hits[r].doc_id},
                        {"score", hits[r].score}}
                       .dump()
                << "\n";
    }
  }
  return 0;
}

// bench ---------------------------------------------------------------------

struct BenchArgs {
  Common common;
  std::size_t corpus_size = 256;
  std::size_t num_queries = 32;
  BenchOptions options;
};

int run_bench(const BenchArgs& a) {
  if (a.corpus_size == 0) throw InputError("bench: --corpus-size must be at least 1");
  EncoderConfig enc;
  if (!a.common.config.empty()) enc = config_from_json(read_json(a.common.config));
  SynthConfig sc;
  sc.seed = a.common.seed;
  sc.docs_per_topic = (a.corpus_size + sc.num_topics - 1) / sc.num_topics;
  const SynthCorpus corpus = generate_corpus(sc);
  std::vector<IndexDocument> docs = documents_of(corpus.dataset);
  docs.resize(std::min(docs.size(), a.corpus_size));
  std::vector<std::string> queries;
  std::set<std::string> seen;
  for (const auto& s : corpus.dataset.samples) {
    if (queries.size() == a.num_queries) break;
    if (seen.insert(s.query).second) queries.push_back(s.query);
  }
  const auto vocab = std::make_shared<const Vocabulary>(Vocabulary::build(corpus.dataset.texts()));
  enc.vocab_size = vocab->size();
  const auto interactive = InteractiveModel::create(vocab, enc, a.common.seed);
  const auto non = DualModel::create(vocab, enc, Mechanism::kNonInteractive, 0, a.common.seed);
  const auto semi = DualModel::create(vocab, enc, Mechanism::kSemiInteractive, 3, a.common.seed);
  const LatencyReport report = bench_latency(interactive, non, semi, docs, queries, a.options);
  for (const auto& s : report.mechanisms) {
    std::cout << std::left << std::setw(18) << s.mechanism << std::fixed << std::setprecision(3)
              << " mean " << s.mean_ms << " ms  p50 " << s.p50_ms << " ms  p95 " << s.p95_ms
              << " ms  (" << s.measured << " queries)\n";
  }
  if (!a.common.out.empty()) {
    write_text(out_dir(a.common.out) / "latency.json", report.to_json().dump(2) + "\n");
  }
  return 0;
}

// pca-export ----------------------------------------------------------------

struct PcaArgs {
  Common common;
  std::string model;
  std::string data;
  std::string split = "test";
  std::size_t limit = 0;
};

int run_pca(const PcaArgs& a) {
  const DualModel model = load_dual(a.model);
  Dataset data = split_of(load_dataset(a.data), a.split);
  if (a.limit > 0 && data.samples.size() > a.limit) data.samples.resize(a.limit);
  const RepresentationCloud cloud = collect_representations(model, data.samples);
  const PcaProjection projection = pca_project(cloud.vectors);
  write_text(out_dir(a.common.out) / "pca.csv", pca_to_csv(projection, cloud.labels));
  std::cout << "projected " << cloud.vectors.size() << " vectors; explained variance";
  for (double r : projection.explained_variance_ratio) std::cout << " " << r;
  std::cout << "\n";
  return 0;
}

// ablate --------------------------------------------------------------------

struct AblateArgs {
  Common common;
  std::string param;
  std::vector<double> values;
  std::string data;
  std::string teacher;
};

int run_ablate(AblateArgs a, const CLI::App& cmd) {
  const TrainConfig base = resolve_train_config(a.common, cmd);
  const Dataset data = load_dataset(a.data);
  const Dataset train_set = data.subset(Split::kTrain);
  const Dataset valid_set = data.subset(Split::kValid);
  const Dataset test_set = data.subset(Split::kTest);

  if (a.param == "n") {
    if (a.values.empty()) a.values = {0, 1, 2, 3, 4, 5};
  } else if (a.param == "alpha") {
    if (a.values.empty()) a.values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  } else {
    throw ConfigError("ablate --param must be n or alpha");
  }

  std::optional<InteractiveModel> teacher;
  if (a.param == "alpha") {
    if (!a.teacher.empty()) {
      teacher = load_interactive(a.teacher);
    } else {
      TrainConfig tc = base;
      tc.mechanism = Mechanism::kInteractive;
      tc.use_distillation = tc.use_embedding_reuse = false;
      const auto vocab = training_vocabulary(train_set, nullptr);
      tc.encoder.vocab_size = vocab->size();
      teacher = std::get<InteractiveModel>(train(tc, vocab, train_set, valid_set).model);
    }
  }
  const auto vocab = training_vocabulary(train_set, teacher ? &*teacher : nullptr);

  std::string table = a.param + "\tauc\n";
  std::cout << a.param << "\tauc\n";
  for (double v : a.values) {
    TrainConfig cfg = base;
    cfg.encoder.vocab_size = vocab->size();
    if (a.param == "n") {
      if (v < 0 || v != std::floor(v)) throw ConfigError("ablate: N values must be whole numbers");
      cfg.n_relevant = static_cast<std::size_t>(v);
      cfg.mechanism = cfg.n_relevant == 0 ? Mechanism::kNonInteractive : Mechanism::kSemiInteractive;
      cfg.use_distillation = cfg.use_embedding_reuse = false;
    } else {
      cfg.mechanism = Mechanism::kSemiInteractive;
      cfg.alpha = v;
      cfg.use_distillation = cfg.use_embedding_reuse = true;
      cfg.encoder = teacher->encoder.config();
    }
    const TrainResult r = train(cfg, vocab, train_set, valid_set, teacher ? &*teacher : nullptr);
    std::ostringstream row;
    row << v << "\t" << std::fixed << std::setprecision(4) << average_auc(r.model, test_set);
    std::cout << row.str() << "\n" << std::flush;
    table += row.str() + "\n";
  }
  if (!a.common.out.empty()) write_text(out_dir(a.common.out) / "ablation.tsv", table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual dense retrieval: interactive, dual and semi-interactive matching"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate the synthetic multilingual corpus");
  add_common(gen_cmd, gen.common, true);

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train one matcher");
  add_common(train_cmd, tr.common, true);
  train_cmd->add_option("--data", tr.data, "Dataset (JSON lines)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--mechanism", tr.mechanism, "interactive, non-interactive or semi-interactive");
  train_cmd->add_option("--n-relevant", tr.n_relevant, "Relevant queries per document");
  train_cmd->add_option("--alpha", tr.alpha, "Weight of the cross-entropy term");
  train_cmd->add_option("--epochs", tr.epochs, "Maximum epochs");
  train_cmd->add_option("--lr", tr.lr, "Peak learning rate");
  train_cmd->add_option("--teacher", tr.teacher, "Interactive checkpoint used as teacher")
      ->check(CLI::ExistingFile);
  train_cmd->add_flag("--reuse-embeddings", tr.reuse, "Initialise from the teacher's embeddings");
  train_cmd->add_flag("--distill", tr.distill, "Add the distillation loss");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "AUC and NDCG report for a checkpoint");
  add_common(eval_cmd, ev.common, false);
  eval_cmd->add_option("--model", ev.model, "Checkpoint")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", ev.data, "Dataset (JSON lines)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", ev.split, "train, valid, test or all");
  eval_cmd->add_option("--k", ev.options.k, "NDCG cut-off");
  eval_cmd->add_option("--distractors", ev.options.distractors, "Extra documents per search pool");

  MineArgs mi;
  auto* mine_cmd = app.add_subcommand("mine", "Collect relevant queries per document");
  add_common(mine_cmd, mi.common, true);
  mine_cmd->add_option("--mode", mi.mode, "ctr (click log) or ready-made (labelled pairs)");
  mine_cmd->add_option("--clicks", mi.clicks, "Click log TSV")->check(CLI::ExistingFile);
  mine_cmd->add_option("--data", mi.data, "Dataset whose relevant queries are replaced")
      ->check(CLI::ExistingFile);
  mine_cmd->add_option("--n", mi.n, "Queries per document");
  mine_cmd->add_option("--min-impressions", mi.min_impressions, "Minimum impressions per edge");
  mine_cmd->add_option("--smoothing", mi.smoothing, "Additive CTR smoothing");

  IndexArgs ix;
  auto* index_cmd = app.add_subcommand("index", "Encode documents offline into a flat index");
  add_common(index_cmd, ix.common, true);
  index_cmd->add_option("--model", ix.model, "Dual-encoder checkpoint")->required()->check(CLI::ExistingFile);
  index_cmd->add_option("--data", ix.data, "Dataset (JSON lines)")->required()->check(CLI::ExistingFile);
  index_cmd->add_option("--split", ix.split, "train, valid, test or all");

  SearchArgs se;
  auto* search_cmd = app.add_subcommand("search", "Top-k documents for queries");
  search_cmd->add_option("--model", se.model, "Dual-encoder checkpoint")->required()->check(CLI::ExistingFile);
  search_cmd->add_option("--index", se.index, "Index file")->required()->check(CLI::ExistingFile);
  search_cmd->add_option("--query", se.queries, "Query text (repeatable)")->required();
  search_cmd->add_option("--k", se.k, "Results per query");

  BenchArgs be;
  auto* bench_cmd = app.add_subcommand("bench", "Per-query latency of the three mechanisms");
  add_common(bench_cmd, be.common, false);
  bench_cmd->add_option("--corpus-size", be.corpus_size, "Documents in the corpus");
  bench_cmd->add_option("--queries", be.num_queries, "Queries measured per pass");
  bench_cmd->add_option("--iterations", be.options.iterations, "Measured passes");

  PcaArgs pc;
  auto* pca_cmd = app.add_subcommand("pca-export", "Project query and document vectors to 3-D CSV");
  add_common(pca_cmd, pc.common, true);
  pca_cmd->add_option("--model", pc.model, "Dual-encoder checkpoint")->required()->check(CLI::ExistingFile);
  pca_cmd->add_option("--data", pc.data, "Dataset (JSON lines)")->required()->check(CLI::ExistingFile);
  pca_cmd->add_option("--split", pc.split, "train, valid, test or all");
  pca_cmd->add_option("--limit", pc.limit, "Use at most this many samples (0: all)");

  AblateArgs ab;
  auto* ablate_cmd = app.add_subcommand("ablate", "Sweep N or alpha and tabulate test AUC");
  add_common(ablate_cmd, ab.common, false);
  ablate_cmd->add_option("--param", ab.param, "n or alpha")->required();
  ablate_cmd->add_option("--values", ab.values, "Comma-separated values")->delimiter(',');
  ablate_cmd->add_option("--data", ab.data, "Dataset (JSON lines)")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--teacher", ab.teacher, "Interactive checkpoint for the alpha sweep")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen_cmd) return run_gen(gen, *gen_cmd);
    if (*train_cmd) return run_train(tr, *train_cmd);
    if (*eval_cmd) return run_eval(ev, *eval_cmd);
    if (*mine_cmd) return run_mine(mi);
    if (*index_cmd) return run_index(ix);
    if (*search_cmd) return run_search(se);
    if (*bench_cmd) return run_bench(be);
    if (*pca_cmd) return run_pca(pc);
    if (*ablate_cmd) return run_ablate(ab, *ablate_cmd);
  } catch (const std::exception& e) {
    std::cerr << "semiret: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
