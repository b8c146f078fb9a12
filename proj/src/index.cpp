#include "semiret/index.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "semiret/checkpoint.hpp"
#include "semiret/errors.hpp"
#include "semiret/kernels.hpp"

namespace semiret {
namespace {

constexpr const char* kIndexVersion = "semiret-index-1";

bool hit_before(const SearchHit& a, const SearchHit& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.doc_id < b.doc_id;
}

Representation normalized(std::span<const double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0 || !std::isfinite(norm)) throw InputError("cannot normalize a zero vector");
  Representation out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

class ScopedThreads {
 public:
  explicit ScopedThreads([[maybe_unused]] int n) {
#ifdef _OPENMP
    saved_ = omp_get_max_threads();
    omp_set_num_threads(n);
#endif
  }
  ~ScopedThreads() {
#ifdef _OPENMP
    omp_set_num_threads(saved_);
#endif
  }
  ScopedThreads(const ScopedThreads&) = delete;
  ScopedThreads& operator=(const ScopedThreads&) = delete;

 private:
  int saved_ = 1;
};

LatencyStats summarize(std::string mechanism, std::vector<double> ms) {
  LatencyStats s;
  s.mechanism = std::move(mechanism);
  s.measured = ms.size();
  if (ms.empty()) return s;
  std::sort(ms.begin(), ms.end());
  double total = 0.0;
  for (double x : ms) total += x;
  s.mean_ms = total / static_cast<double>(ms.size());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(ms.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, ms.size() - 1);
    return ms[lo] + (pos - static_cast<double>(lo)) * (ms[hi] - ms[lo]);
  };
  s.p50_ms = quantile(0.5);
  s.p95_ms = quantile(0.95);
  return s;
}

template <typename Fn>
std::vector<double> time_queries(std::span<const std::string> queries, const BenchOptions& opt,
                                 Fn&& run) {
  for (std::size_t i = 0; i < opt.warmup_queries; ++i) run(queries[i % queries.size()]);
  std::vector<double> ms;
  for (std::size_t it = 0; it < opt.iterations; ++it) {
    for (const auto& q : queries) {
      const auto t0 = std::chrono::steady_clock::now();
      run(q);
      const auto t1 = std::chrono::steady_clock::now();
      ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
  }
  return ms;
}

}  // namespace

Index::Index(std::vector<IndexEntry> entries, std::size_t dim, std::string config_hash)
    : entries_(std::move(entries)), dim_(dim), config_hash_(std::move(config_hash)) {
  packed_.reserve(entries_.size() * dim_);
  for (const auto& e : entries_) {
    if (e.vector.size() != dim_) {
      throw InputError("index entry '" + e.doc_id + "' has width " +
                       std::to_string(e.vector.size()) + ", expected " + std::to_string(dim_));
    }
    packed_.insert(packed_.end(), e.vector.begin(), e.vector.end());
  }
}

std::vector<SearchHit> Index::search(std::span<const double> query, std::size_t k) const {
  if (k == 0) throw InputError("search: k must be at least 1");
  if (entries_.empty()) return {};
  if (query.size() != dim_) {
    throw InputError("search: query width " + std::to_string(query.size()) +
                     " does not match index width " + std::to_string(dim_));
  }
  const Representation q = normalized(query);
  std::vector<double> scores(entries_.size());
  kernels::parallel::dot_scan(packed_, dim_, q, scores);
  std::vector<SearchHit> hits(entries_.size());
  for (std::size_t i = 0; i < hits.size(); ++i) hits[i] = {entries_[i].doc_id, scores[i]};
  const std::size_t top = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(top), hits.end(),
                    hit_before);
  hits.resize(top);
  return hits;
}

std::string model_config_hash(const DualModel& model) {
  const nlohmann::json j = {{"mechanism", to_string(model.mode)},
                            {"n_relevant", model.n_relevant},
                            {"config", config_to_json(model.query_encoder.config())}};
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Index build_index(const DualModel& model, std::span<const IndexDocument> documents) {
  model.validate();
  std::set<std::string> seen;
  for (const auto& d : documents) {
    if (!seen.insert(d.doc_id).second) throw InputError("duplicate doc_id '" + d.doc_id + "'");
  }
  std::vector<IndexEntry> entries(documents.size());
  const long n = static_cast<long>(documents.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    const IndexDocument& d = documents[static_cast<std::size_t>(i)];
    IndexEntry& e = entries[static_cast<std::size_t>(i)];
    e.doc_id = d.doc_id;
    const std::size_t used = std::min(model.n_relevant, d.relevant_queries.size());
    e.relevant_queries_used.assign(d.relevant_queries.begin(),
                                   d.relevant_queries.begin() + static_cast<std::ptrdiff_t>(used));
    e.vector = normalized(encode_document(model, d.text, e.relevant_queries_used));
  }
  return Index(std::move(entries), model.query_encoder.config().hidden_dim,
               model_config_hash(model));
}

nlohmann::json index_to_json(const Index& index) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : index.entries()) {
    entries.push_back({{"doc_id", e.doc_id},
                       {"vector", e.vector},
                       {"relevant_queries_used", e.relevant_queries_used}});
  }
  return {{"header",
           {{"version", kIndexVersion},
            {"config_hash", index.config_hash()},
            {"dim", index.dim()},
            {"count", index.size()}}},
          {"entries", std::move(entries)}};
}

Index index_from_json(const nlohmann::json& j) {
  try {
    const auto& header = j.at("header");
    if (header.at("version").get<std::string>() != kIndexVersion) {
      throw FormatError("unsupported index version '" + header.at("version").get<std::string>() +
                        "'");
    }
    const auto dim = header.at("dim").get<std::size_t>();
    const auto count = header.at("count").get<std::size_t>();
    std::vector<IndexEntry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({e.at("doc_id").get<std::string>(),
                         e.at("vector").get<Representation>(),
                         e.at("relevant_queries_used").get<std::vector<std::string>>()});
    }
    if (entries.size() != count) {
      throw FormatError("index header promises " + std::to_string(count) + " entries, found " +
                        std::to_string(entries.size()));
    }
    return Index(std::move(entries), dim, header.at("config_hash").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed index: ") + e.what());
  } catch (const InputError& e) {
    throw FormatError(std::string("malformed index: ") + e.what());
  }
}

void save_index(const Index& index, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write index to " + path.string());
  out << index_to_json(index).dump() << '\n';
}

Index load_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open index " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return index_from_json(j);
}

const LatencyStats& LatencyReport::get(Mechanism m) const {
  const std::string name = to_string(m);
  for (const auto& s : mechanisms) {
    if (s.mechanism == name) return s;
  }
  throw LookupError("no latency recorded for " + name);
}

nlohmann::json LatencyReport::to_json() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : mechanisms) {
    per.push_back({{"mechanism", s.mechanism},
                   {"mean_ms", s.mean_ms},
                   {"p50_ms", s.p50_ms},
                   {"p95_ms", s.p95_ms},
                   {"measured", s.measured}});
  }
  return {{"corpus_size", corpus_size}, {"encoder", config_to_json(encoder)}, {"mechanisms", per}};
}

LatencyReport bench_latency(const InteractiveModel& interactive, const DualModel& non_interactive,
                            const DualModel& semi_interactive,
                            std::span<const IndexDocument> corpus,
                            std::span<const std::string> queries, const BenchOptions& options) {
  if (corpus.empty()) throw InputError("bench_latency: empty corpus");
  if (queries.empty()) throw InputError("bench_latency: empty query set");
  if (options.iterations == 0) throw InputError("bench_latency: iterations must be at least 1");
  const Index non_index = build_index(non_interactive, corpus);
  const Index semi_index = build_index(semi_interactive, corpus);

  ScopedThreads single(1);
  LatencyReport report;
  report.corpus_size = corpus.size();
  report.encoder = interactive.encoder.config();

  double sink = 0.0;
  report.mechanisms.push_back(summarize(
      to_string(Mechanism::kInteractive), time_queries(queries, options, [&](const std::string& q) {
        for (const auto& d : corpus) sink += score_interactive(interactive, q, d.text).calibrated;
      })));
  auto dual_run = [&](const DualModel& model, const Index& index) {
    return [&](const std::string& q) {
      const auto hits = index.search(encode_query(model, q), options.top_k);
      sink += hits.front().score;
    };
  };
  report.mechanisms.push_back(summarize(to_string(Mechanism::kNonInteractive),
                                        time_queries(queries, options,
                                                     dual_run(non_interactive, non_index))));
  report.mechanisms.push_back(summarize(to_string(Mechanism::kSemiInteractive),
                                        time_queries(queries, options,
                                                     dual_run(semi_interactive, semi_index))));
  if (!std::isfinite(sink)) throw InternalError("bench_latency produced a non-finite score");
  return report;
}

}  // namespace semiret
