#include "semiret/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "semiret/errors.hpp"

namespace semiret {
namespace {

constexpr std::array<const char*, 9> kLanguageCodes = {"en", "ru", "es", "fr", "pt",
                                                       "ar", "de", "zh", "ja"};

std::string pad_number(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

struct Document {
  std::string id;
  std::size_t topic = 0;
  std::vector<std::size_t> base_tokens;
  std::string text;
  std::vector<std::size_t> queries;  // indices into the query table
};

struct Query {
  std::string text;
  std::string lang;
  std::size_t topic = 0;
  std::size_t doc = 0;
  Split split = Split::kTrain;
};

class Generator {
 public:
  explicit Generator(const SynthConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    const std::size_t base_size = cfg.num_topics * cfg.vocab_per_topic;
    const std::size_t width = std::to_string(base_size - 1).size();
    for (std::size_t l = 0; l < cfg.num_languages; ++l) {
      std::vector<std::size_t> perm(base_size);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng_);
      std::vector<std::string> names(base_size);
      for (std::size_t b = 0; b < base_size; ++b) {
        names[b] = language_code(l) + pad_number(perm[b], width);
      }
      surface_.push_back(std::move(names));
    }
    std::vector<double> weights(cfg.vocab_per_topic);
    for (std::size_t r = 0; r < weights.size(); ++r) {
      weights[r] = std::pow(static_cast<double>(r + 1), -cfg.zipf_exponent);
    }
    zipf_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }

  SynthCorpus run() {
    make_documents();
    make_queries();
    SynthCorpus out;
    emit_samples(out.dataset);
    emit_click_log(out.click_log);
    for (const auto& d : docs_) out.doc_topics.emplace_back(d.id, d.topic);
    for (const auto& q : queries_) out.query_topics.emplace_back(q.text, q.topic);
    return out;
  }

 private:
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::size_t topic_token(std::size_t topic) { return topic * cfg_.vocab_per_topic + zipf_(rng_); }

  std::string render(const std::vector<std::size_t>& base, std::size_t lang) const {
    std::string text;
    for (std::size_t b : base) {
      if (!text.empty()) text += ' ';
      text += surface_[lang][b];
    }
    return text;
  }

  void make_documents() {
    for (std::size_t t = 0; t < cfg_.num_topics; ++t) {
      for (std::size_t k = 0; k < cfg_.docs_per_topic; ++k) {
        Document d;
        d.id = "doc-" + pad_number(t, 3) + "-" + pad_number(k, 4);
        d.topic = t;
        for (std::size_t i = 0; i < cfg_.doc_length; ++i) d.base_tokens.push_back(topic_token(t));
        d.text = render(d.base_tokens, 0);
        docs_.push_back(std::move(d));
      }
    }
  }

  void make_queries() {
    std::set<std::string> seen;
    for (std::size_t di = 0; di < docs_.size(); ++di) {
      Document& d = docs_[di];
      for (std::size_t k = 0; k < cfg_.queries_per_doc; ++k) {
        const std::size_t lang = pick(cfg_.num_languages);
        std::string text;
        // A handful of retries keeps query strings unique across the corpus.
        for (int attempt = 0; attempt < 16; ++attempt) {
          std::vector<std::size_t> base;
          for (std::size_t i = 0; i < cfg_.query_length; ++i) {
            base.push_back(uniform() < cfg_.query_doc_overlap
                               ? d.base_tokens[pick(d.base_tokens.size())]
                               : topic_token(d.topic));
          }
          text = render(base, lang);
          if (!seen.contains(text)) break;
          text.clear();
        }
        if (text.empty()) continue;
        seen.insert(text);
        const double u = uniform();
        const Split split = u < cfg_.test_fraction                          ? Split::kTest
                            : u < cfg_.test_fraction + cfg_.valid_fraction ? Split::kValid
                                                                           : Split::kTrain;
        d.queries.push_back(queries_.size());
        queries_.push_back({text, language_code(lang), d.topic, di, split});
      }
    }
  }

  // Other positive queries of the document, interleaving languages.
  std::vector<std::string> relevant_list(const Document& d) {
    std::map<std::string, std::vector<std::size_t>> by_lang;
    for (std::size_t qi : d.queries) by_lang[queries_[qi].lang].push_back(qi);
    std::vector<std::vector<std::size_t>> lanes;
    for (auto& [lang, qs] : by_lang) lanes.push_back(qs);
    std::vector<std::string> out;
    if (lanes.empty()) return out;
    const std::size_t start = pick(lanes.size());
    for (std::size_t round = 0; out.size() < cfg_.relevant_per_doc; ++round) {
      bool any = false;
      for (std::size_t li = 0; li < lanes.size() && out.size() < cfg_.relevant_per_doc; ++li) {
        const auto& lane = lanes[(start + li) % lanes.size()];
        if (round < lane.size()) {
          out.push_back(queries_[lane[round]].text);
          any = true;
        }
      }
      if (!any) break;
    }
    return out;
  }

  void emit_samples(Dataset& ds) {
    std::vector<std::vector<std::string>> relevant(docs_.size());
    for (std::size_t di = 0; di < docs_.size(); ++di) relevant[di] = relevant_list(docs_[di]);
    const double whole = std::floor(cfg_.negative_ratio);
    const double frac = cfg_.negative_ratio - whole;
    for (const Query& q : queries_) {
      auto sample_for = [&](std::size_t di, int label) {
        TrainingSample s;
        s.query = q.text;
        s.query_lang = q.lang;
        s.doc_id = docs_[di].id;
        s.document = docs_[di].text;
        s.relevant_queries = relevant[di];
        s.label = label;
        s.split = q.split;
        return s;
      };
      ds.samples.push_back(sample_for(q.doc, 1));
      std::size_t negatives = static_cast<std::size_t>(whole);
      if (frac > 0.0 && uniform() < frac) ++negatives;
      std::set<std::size_t> used;
      for (std::size_t n = 0; n < negatives; ++n) {
        std::size_t di = 0;
        do {
          di = pick(docs_.size());
        } while (docs_[di].topic == q.topic || used.contains(di));
        used.insert(di);
        ds.samples.push_back(sample_for(di, 0));
      }
    }
  }

  void emit_click_log(std::vector<ClickLogRecord>& log) {
    std::vector<std::vector<std::size_t>> topic_docs(cfg_.num_topics);
    for (std::size_t di = 0; di < docs_.size(); ++di) topic_docs[docs_[di].topic].push_back(di);
    for (const Query& q : queries_) {
      std::vector<std::size_t> shown = {q.doc};
      const auto& same = topic_docs[q.topic];
      for (std::size_t i = 0; i < cfg_.same_topic_shown && same.size() > 1; ++i) {
        std::size_t di = same[pick(same.size())];
        if (di != q.doc) shown.push_back(di);
      }
      for (std::size_t i = 0; i < cfg_.cross_topic_shown; ++i) {
        std::size_t di = 0;
        do {
          di = pick(docs_.size());
        } while (docs_[di].topic == q.topic);
        shown.push_back(di);
      }
      for (std::size_t di : shown) {
        const double p = docs_[di].topic == q.topic ? cfg_.click_prob_same_topic
                                                    : cfg_.click_prob_cross_topic;
        for (std::size_t k = 0; k < cfg_.impressions_per_pair; ++k) {
          log.push_back({q.text, q.lang, docs_[di].id, uniform() < p});
        }
      }
    }
  }

  const SynthConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<std::vector<std::string>> surface_;  // [lang][base token]
  std::discrete_distribution<std::size_t> zipf_;
  std::vector<Document> docs_;
  std::vector<Query> queries_;
};

}  // namespace

void SynthConfig::validate() const {
  if (num_topics < 2) throw ConfigError("num_topics must be at least 2 (negatives need another topic)");
  if (vocab_per_topic == 0 || num_languages == 0 || docs_per_topic == 0 || queries_per_doc == 0 ||
      doc_length == 0 || query_length == 0) {
    throw ConfigError("all synthetic corpus counts must be at least 1");
  }
  if (query_length > vocab_per_topic) {
    throw ConfigError("query_length " + std::to_string(query_length) +
                      " exceeds vocab_per_topic " + std::to_string(vocab_per_topic));
  }
  if (!(negative_ratio > 0.0)) throw ConfigError("negative_ratio must be positive");
  if (negative_ratio > static_cast<double>((num_topics - 1) * docs_per_topic)) {
    throw ConfigError("negative_ratio exceeds the number of other-topic documents");
  }
  if (valid_fraction < 0.0 || test_fraction < 0.0 || valid_fraction + test_fraction >= 1.0) {
    throw ConfigError("valid_fraction + test_fraction must be below 1");
  }
  for (double p : {click_prob_same_topic, click_prob_cross_topic, query_doc_overlap}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("probabilities must lie in [0, 1]");
  }
  if (zipf_exponent < 0.0) throw ConfigError("zipf_exponent must be non-negative");
}

nlohmann::json synth_config_to_json(const SynthConfig& c) {
  return nlohmann::json{{"num_topics", c.num_topics},
                        {"vocab_per_topic", c.vocab_per_topic},
                        {"num_languages", c.num_languages},
                        {"docs_per_topic", c.docs_per_topic},
                        {"queries_per_doc", c.queries_per_doc},
                        {"doc_length", c.doc_length},
                        {"query_length", c.query_length},
                        {"negative_ratio", c.negative_ratio},
                        {"seed", c.seed},
                        {"zipf_exponent", c.zipf_exponent},
                        {"query_doc_overlap", c.query_doc_overlap},
                        {"relevant_per_doc", c.relevant_per_doc},
                        {"valid_fraction", c.valid_fraction},
                        {"test_fraction", c.test_fraction},
                        {"impressions_per_pair", c.impressions_per_pair},
                        {"same_topic_shown", c.same_topic_shown},
                        {"cross_topic_shown", c.cross_topic_shown},
                        {"click_prob_same_topic", c.click_prob_same_topic},
                        {"click_prob_cross_topic", c.click_prob_cross_topic}};
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig c;
  c.num_topics = j.value("num_topics", c.num_topics);
  c.vocab_per_topic = j.value("vocab_per_topic", c.vocab_per_topic);
  c.num_languages = j.value("num_languages", c.num_languages);
  c.docs_per_topic = j.value("docs_per_topic", c.docs_per_topic);
  c.queries_per_doc = j.value("queries_per_doc", c.queries_per_doc);
  c.doc_length = j.value("doc_length", c.doc_length);
  c.query_length = j.value("query_length", c.query_length);
  c.negative_ratio = j.value("negative_ratio", c.negative_ratio);
  c.seed = j.value("seed", c.seed);
  c.zipf_exponent = j.value("zipf_exponent", c.zipf_exponent);
  c.query_doc_overlap = j.value("query_doc_overlap", c.query_doc_overlap);
  c.relevant_per_doc = j.value("relevant_per_doc", c.relevant_per_doc);
  c.valid_fraction = j.value("valid_fraction", c.valid_fraction);
  c.test_fraction = j.value("test_fraction", c.test_fraction);
  c.impressions_per_pair = j.value("impressions_per_pair", c.impressions_per_pair);
  c.same_topic_shown = j.value("same_topic_shown", c.same_topic_shown);
  c.cross_topic_shown = j.value("cross_topic_shown", c.cross_topic_shown);
  c.click_prob_same_topic = j.value("click_prob_same_topic", c.click_prob_same_topic);
  c.click_prob_cross_topic = j.value("click_prob_cross_topic", c.click_prob_cross_topic);
  return c;
}

std::string base_language() { return kLanguageCodes[0]; }

std::string language_code(std::size_t index) {
  if (index < kLanguageCodes.size()) return kLanguageCodes[index];
  return "l" + std::to_string(index);
}

std::size_t SynthCorpus::topic_of_doc(const std::string& doc_id) const {
  for (const auto& [id, t] : doc_topics) {
    if (id == doc_id) return t;
  }
  throw LookupError("unknown document '" + doc_id + "'");
}

std::size_t SynthCorpus::topic_of_query(const std::string& query) const {
  for (const auto& [q, t] : query_topics) {
    if (q == query) return t;
  }
  throw LookupError("unknown query '" + query + "'");
}

SynthCorpus generate_corpus(const SynthConfig& config) {
  config.validate();
  return Generator(config).run();
}

}  // namespace semiret
