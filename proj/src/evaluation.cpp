#include "semiret/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "semiret/errors.hpp"
#include "semiret/training.hpp"

namespace semiret {
namespace {

std::string mechanism_of(const AnyModel& model) {
  if (std::holds_alternative<InteractiveModel>(model)) return to_string(Mechanism::kInteractive);
  return to_string(std::get<DualModel>(model).mode);
}

struct Candidate {
  TrainingSample sample;
  int grade = 0;
};

// Candidate pools per query: the query's own labeled pairs, then distractor
// documents not labeled for it.
std::vector<std::vector<Candidate>> build_pools(const Dataset& test_set, const EvalOptions& opt) {
  std::map<std::string, std::size_t> query_slot;
  std::vector<std::vector<Candidate>> pools;
  std::map<std::string, const TrainingSample*> documents;
  for (const auto& s : test_set.samples) {
    documents.try_emplace(s.doc_id, &s);
    auto [it, fresh] = query_slot.try_emplace(s.query, pools.size());
    if (fresh) pools.emplace_back();
    pools[it->second].push_back({s, s.label});
  }
  std::vector<const TrainingSample*> doc_list;
  for (const auto& [id, s] : documents) doc_list.push_back(s);
  std::mt19937_64 rng(opt.seed);
  for (auto& pool : pools) {
    std::set<std::string> present;
    for (const auto& c : pool) present.insert(c.sample.doc_id);
    std::vector<const TrainingSample*> others;
    for (const auto* d : doc_list) {
      if (!present.contains(d->doc_id)) others.push_back(d);
    }
    std::shuffle(others.begin(), others.end(), rng);
    const std::size_t take = std::min(opt.distractors, others.size());
    const TrainingSample base = pool.front().sample;
    for (std::size_t i = 0; i < take; ++i) {
      TrainingSample s = base;
      s.doc_id = others[i]->doc_id;
      s.document = others[i]->document;
      s.relevant_queries = others[i]->relevant_queries;
      s.label = 0;
      pool.push_back({std::move(s), 0});
    }
  }
  return pools;
}

}  // namespace

const ReportRow& EvalReport::find(const std::string& metric, const std::string& pair) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.language_pair == pair) return r;
  }
  throw LookupError("no " + metric + " row for " + pair);
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"mechanism", r.mechanism},
                   {"language_pair", r.language_pair},
                   {"metric", r.metric},
                   {"value", r.value},
                   {"n_samples", r.n_samples}});
  }
  return out;
}

void EvalReport::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report " + path.string());
  out << to_json().dump(2) << '\n';
}

EvalReport evaluate_run(const AnyModel& model, const Dataset& test_set, const EvalOptions& opt) {
  if (test_set.empty()) throw InputError("evaluate_run: empty test set");
  if (opt.k == 0) throw InputError("evaluate_run: k must be at least 1");
  const std::string mechanism = mechanism_of(model);
  const std::vector<std::string> langs = test_set.languages();
  EvalReport report;

  if (opt.similarity) {
    const std::vector<double> scores = score_samples(model, test_set.samples);
    double total = 0.0;
    std::size_t counted = 0;
    for (const auto& lang : langs) {
      std::vector<double> s;
      std::vector<int> y;
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (test_set.samples[i].query_lang != lang) continue;
        s.push_back(scores[i]);
        y.push_back(test_set.samples[i].label);
      }
      const double value = auc(s, y);
      report.rows.push_back({mechanism, lang + "-" + opt.doc_lang, "auc", value, s.size()});
      total += value;
      counted += s.size();
    }
    report.rows.push_back(
        {mechanism, "avg", "auc", total / static_cast<double>(langs.size()), counted});
  }

  if (opt.search) {
    const std::string metric = "ndcg@" + std::to_string(opt.k);
    const auto pools = build_pools(test_set, opt);
    std::vector<TrainingSample> flat;
    for (const auto& pool : pools) {
      for (const auto& c : pool) flat.push_back(c.sample);
    }
    const std::vector<double> scores = score_samples(model, flat);
    std::map<std::string, std::pair<double, std::size_t>> per_lang;
    std::size_t offset = 0;
    for (const auto& pool : pools) {
      std::vector<std::pair<double, std::size_t>> order;
      for (std::size_t i = 0; i < pool.size(); ++i) order.emplace_back(scores[offset + i], i);
      std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return pool[a.second].sample.doc_id < pool[b.second].sample.doc_id;
      });
      RankedJudgments rj;
      for (const auto& [score, i] : order) rj.retrieved.push_back(pool[i].grade);
      rj.judged = rj.retrieved;
      auto& acc = per_lang[pool.front().sample.query_lang];
      acc.first += ndcg_at_k(rj, opt.k);
      ++acc.second;
      offset += pool.size();
    }
    double total = 0.0;
    std::size_t queries = 0;
    for (const auto& [lang, acc] : per_lang) {
      const double value = acc.first / static_cast<double>(acc.second);
      report.rows.push_back({mechanism, lang + "-" + opt.doc_lang, metric, value, acc.second});
      total += value;
      queries += acc.second;
    }
    report.rows.push_back(
        {mechanism, "avg", metric, total / static_cast<double>(per_lang.size()), queries});
  }
  return report;
}

std::string pca_to_csv(const PcaProjection& projection, std::span<const PointLabel> labels) {
  if (labels.size() != projection.coordinates.size()) {
    throw InputError("pca_to_csv: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(projection.coordinates.size()) + " points");
  }
  std::ostringstream out;
  out.precision(17);
  out << "x,y,z,kind,lang\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& c = projection.coordinates[i];
    out << c[0] << ',' << c[1] << ',' << c[2] << ',' << labels[i].kind << ',' << labels[i].lang
        << '\n';
  }
  return out.str();
}

RepresentationCloud collect_representations(const DualModel& model,
                                            std::span<const TrainingSample> samples,
                                            const std::string& doc_lang) {
  RepresentationCloud cloud;
  std::set<std::string> seen_queries;
  std::set<std::string> seen_docs;
  for (const auto& s : samples) {
    if (seen_queries.insert(s.query).second) {
      cloud.vectors.push_back(encode_query(model, s.query));
      cloud.labels.push_back({"query", s.query_lang});
    }
    if (seen_docs.insert(s.doc_id).second) {
      const auto rel = std::span(s.relevant_queries)
                           .first(std::min(model.n_relevant, s.relevant_queries.size()));
      cloud.vectors.push_back(encode_document(model, s.document, rel));
      cloud.labels.push_back({"document", doc_lang});
    }
  }
  return cloud;
}

}  // namespace semiret
