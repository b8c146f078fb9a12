#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiret/matchers.hpp"

namespace semiret {

// A document as handed to the offline encoder.
struct IndexDocument {
  std::string doc_id;
  std::string text;
  std::vector<std::string> relevant_queries;
};

struct IndexEntry {
  std::string doc_id;
  Representation vector;  // unit norm
  std::vector<std::string> relevant_queries_used;

  bool operator==(const IndexEntry&) const = default;
};

struct SearchHit {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const SearchHit&) const = default;
};

// Exact flat cosine index. Immutable once built.
class Index {
 public:
  Index() = default;
  Index(std::vector<IndexEntry> entries, std::size_t dim, std::string config_hash);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t dim() const { return dim_; }
  const std::string& config_hash() const { return config_hash_; }
  const std::vector<IndexEntry>& entries() const { return entries_; }

  // Top min(k, size) documents by cosine, ties by doc_id ascending. Throws
  // InputError for k == 0, a zero query or a width mismatch.
  std::vector<SearchHit> search(std::span<const double> query, std::size_t k) const;

  bool operator==(const Index& other) const {
    return entries_ == other.entries_ && dim_ == other.dim_ && config_hash_ == other.config_hash_;
  }

 private:
  std::vector<IndexEntry> entries_;
  std::size_t dim_ = 0;
  std::string config_hash_;
  std::vector<double> packed_;  // size() x dim_, row-major
};

// Hex FNV-1a of the model's mechanism, n_relevant and encoder config.
std::string model_config_hash(const DualModel& model);

// Encodes every document (with at most n_relevant of its relevant queries)
// and normalizes. Throws InputError on a duplicate doc_id.
Index build_index(const DualModel& model, std::span<const IndexDocument> documents);

nlohmann::json index_to_json(const Index& index);
Index index_from_json(const nlohmann::json& j);
void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

struct LatencyStats {
  std::string mechanism;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  std::size_t measured = 0;
};

struct LatencyReport {
  std::vector<LatencyStats> mechanisms;  // interactive, non-interactive, semi-interactive
  std::size_t corpus_size = 0;
  EncoderConfig encoder;

  const LatencyStats& get(Mechanism m) const;
  nlohmann::json to_json() const;
};

struct BenchOptions {
  std::size_t iterations = 1;      // measured passes over the query set
  std::size_t warmup_queries = 2;  // unmeasured queries run first per mechanism
  std::size_t top_k = 10;
};

// Per-query latency: interactive scores the query against every document;
// the dual models encode the query and scan a prebuilt index (build untimed).
// Runs single-threaded. Throws InputError on an empty corpus or query set.
LatencyReport bench_latency(const InteractiveModel& interactive, const DualModel& non_interactive,
                            const DualModel& semi_interactive,
                            std::span<const IndexDocument> corpus,
                            std::span<const std::string> queries, const BenchOptions& options = {});

}  // namespace semiret
