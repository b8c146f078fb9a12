#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace semiret {

struct ClickLogRecord {
  std::string query_text;
  std::string query_lang;
  std::string doc_id;
  bool clicked = false;

  bool operator==(const ClickLogRecord&) const = default;
};

struct ClickEdge {
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
  std::string query_lang;

  bool operator==(const ClickEdge&) const = default;
};

// Query-document bipartite multigraph; an impression is one (query, doc)
// occurrence in the log.
class ClickGraph {
 public:
  // Records with an empty query or doc id are skipped and counted.
  void add(const ClickLogRecord& record);
  void merge(const ClickGraph& other);

  const ClickEdge* edge(const std::string& query, const std::string& doc_id) const;
  // query -> edge for one document; nullptr when the document is unknown.
  const std::map<std::string, ClickEdge>* edges_of(const std::string& doc_id) const;
  std::size_t edge_count() const;
  std::size_t document_count() const { return by_doc_.size(); }
  std::size_t skipped() const { return skipped_; }
  std::vector<std::string> documents() const;

  bool operator==(const ClickGraph& other) const { return by_doc_ == other.by_doc_; }

 private:
  std::map<std::string, std::map<std::string, ClickEdge>> by_doc_;
  std::size_t skipped_ = 0;
};

ClickGraph build_graph(const std::vector<ClickLogRecord>& records);

struct CtrEstimate {
  double value = 0.0;
  bool eligible = false;  // impressions >= min_impressions
};

// (clicks + smoothing) / (impressions + 2 smoothing). LookupError when the
// edge does not exist.
CtrEstimate ctr(const ClickGraph& graph, const std::string& query, const std::string& doc_id,
                std::uint64_t min_impressions = 3, double smoothing = 0.5);

struct MinedQuery {
  std::string query;
  std::string query_lang;
  double ctr = 0.0;
  std::uint64_t clicks = 0;
};

// Eligible queries of a document by CTR desc, clicks desc, then query text.
// Unknown documents give an empty list.
std::vector<MinedQuery> top_n_queries(const ClickGraph& graph, const std::string& doc_id,
                                      std::size_t n, std::uint64_t min_impressions = 3,
                                      double smoothing = 0.5);

struct LabeledPair {
  std::string query;
  std::string doc_id;
  int label = 0;
};

// Up to n distinct queries labelled relevant to doc_id, sampled uniformly with
// a seeded generator (all of them when fewer than n exist).
std::vector<std::string> ready_made_select(const std::string& doc_id,
                                           const std::vector<LabeledPair>& labeled_pairs,
                                           std::size_t n, std::uint64_t seed);

// query_text \t query_lang \t doc_id \t clicked(0|1), no header.
struct ClickLogReadResult {
  std::vector<ClickLogRecord> records;
  std::size_t malformed = 0;
};
ClickLogReadResult read_click_log(const std::filesystem::path& path);
void write_click_log(const std::vector<ClickLogRecord>& records, const std::filesystem::path& path);

}  // namespace semiret
