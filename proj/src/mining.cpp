#include "semiret/mining.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "semiret/errors.hpp"

namespace semiret {

void ClickGraph::add(const ClickLogRecord& record) {
  if (record.query_text.empty() || record.doc_id.empty()) {
    ++skipped_;
    return;
  }
  ClickEdge& e = by_doc_[record.doc_id][record.query_text];
  ++e.impressions;
  if (record.clicked) ++e.clicks;
  if (e.query_lang.empty()) e.query_lang = record.query_lang;
}

void ClickGraph::merge(const ClickGraph& other) {
  for (const auto& [doc, edges] : other.by_doc_) {
    auto& mine = by_doc_[doc];
    for (const auto& [query, e] : edges) {
      ClickEdge& dst = mine[query];
      dst.impressions += e.impressions;
      dst.clicks += e.clicks;
      if (dst.query_lang.empty()) dst.query_lang = e.query_lang;
    }
  }
  skipped_ += other.skipped_;
}

const ClickEdge* ClickGraph::edge(const std::string& query, const std::string& doc_id) const {
  auto d = by_doc_.find(doc_id);
  if (d == by_doc_.end()) return nullptr;
  auto q = d->second.find(query);
  return q == d->second.end() ? nullptr : &q->second;
}

const std::map<std::string, ClickEdge>* ClickGraph::edges_of(const std::string& doc_id) const {
  auto d = by_doc_.find(doc_id);
  return d == by_doc_.end() ? nullptr : &d->second;
}

std::size_t ClickGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [doc, edges] : by_doc_) n += edges.size();
  return n;
}

std::vector<std::string> ClickGraph::documents() const {
  std::vector<std::string> out;
  out.reserve(by_doc_.size());
  for (const auto& [doc, edges] : by_doc_) out.push_back(doc);
  return out;
}

ClickGraph build_graph(const std::vector<ClickLogRecord>& records) {
  ClickGraph g;
  for (const auto& r : records) g.add(r);
  return g;
}

namespace {

double smoothed_ctr(const ClickEdge& e, double smoothing) {
  const double denom = static_cast<double>(e.impressions) + 2.0 * smoothing;
  if (denom == 0.0) return 0.0;
  return (static_cast<double>(e.clicks) + smoothing) / denom;
}

}  // namespace

CtrEstimate ctr(const ClickGraph& graph, const std::string& query, const std::string& doc_id,
                std::uint64_t min_impressions, double smoothing) {
  const ClickEdge* e = graph.edge(query, doc_id);
  if (!e) throw LookupError("no click edge between '" + query + "' and '" + doc_id + "'");
  return {smoothed_ctr(*e, smoothing), e->impressions >= min_impressions};
}

std::vector<MinedQuery> top_n_queries(const ClickGraph& graph, const std::string& doc_id,
                                      std::size_t n, std::uint64_t min_impressions,
                                      double smoothing) {
  if (n == 0) throw InputError("top_n_queries: n must be at least 1");
  std::vector<MinedQuery> out;
  const auto* edges = graph.edges_of(doc_id);
  if (!edges) return out;
  for (const auto& [query, e] : *edges) {
    if (e.impressions < min_impressions) continue;
    out.push_back({query, e.query_lang, smoothed_ctr(e, smoothing), e.clicks});
  }
  auto better = [](const MinedQuery& a, const MinedQuery& b) {
    if (a.ctr != b.ctr) return a.ctr > b.ctr;
    if (a.clicks != b.clicks) return a.clicks > b.clicks;
    return a.query < b.query;
  };
  if (out.size() > n) {
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), better);
    out.resize(n);
  } else {
    std::sort(out.begin(), out.end(), better);
  }
  return out;
}

std::vector<std::string> ready_made_select(const std::string& doc_id,
                                           const std::vector<LabeledPair>& labeled_pairs,
                                           std::size_t n, std::uint64_t seed) {
  std::set<std::string> distinct;
  for (const auto& p : labeled_pairs) {
    if (p.doc_id == doc_id && p.label == 1) distinct.insert(p.query);
  }
  std::vector<std::string> pool(distinct.begin(), distinct.end());
  if (pool.size() <= n) return pool;
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(n);
  return pool;
}

ClickLogReadResult read_click_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open click log " + path.string());
  ClickLogReadResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4 || cols[0].empty() || cols[2].empty() ||
        (cols[3] != "0" && cols[3] != "1")) {
      ++result.malformed;
      continue;
    }
    result.records.push_back({cols[0], cols[1], cols[2], cols[3] == "1"});
  }
  return result;
}

void write_click_log(const std::vector<ClickLogRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write click log " + path.string());
  for (const auto& r : records) {
    out << r.query_text << '\t' << r.query_lang << '\t' << r.doc_id << '\t' << (r.clicked ? 1 : 0)
        << '\n';
  }
}

}  // namespace semiret
