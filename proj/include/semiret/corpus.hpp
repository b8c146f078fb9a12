#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiret/dataset.hpp"
#include "semiret/mining.hpp"

namespace semiret {

// Knobs of the synthetic multilingual corpus. Topics own disjoint token pools
// in a base language; every other language is a bijective renaming of the base
// vocabulary, so translations share no surface tokens.
struct SynthConfig {
  std::size_t num_topics = 20;
  std::size_t vocab_per_topic = 40;
  std::size_t num_languages = 2;
  std::size_t docs_per_topic = 25;
  std::size_t queries_per_doc = 7;
  std::size_t doc_length = 12;
  std::size_t query_length = 3;
  double negative_ratio = 1.0;
  std::uint64_t seed = 42;

  // Within-topic token frequencies follow rank^-zipf_exponent.
  double zipf_exponent = 1.0;
  // Probability that a query word is taken from its document's own words
  // rather than from the topic pool.
  double query_doc_overlap = 0.5;
  // Relevant queries stored per document (the trainer uses the first N).
  std::size_t relevant_per_doc = 6;
  double valid_fraction = 0.1;
  double test_fraction = 0.2;
  // Click log: impressions per (query, document) pair shown, and how many
  // same-topic / cross-topic documents each query is shown with besides its own.
  std::size_t impressions_per_pair = 4;
  std::size_t same_topic_shown = 2;
  std::size_t cross_topic_shown = 3;
  double click_prob_same_topic = 0.8;
  double click_prob_cross_topic = 0.05;

  void validate() const;  // throws ConfigError
};

nlohmann::json synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const nlohmann::json& j);

// Language code of the documents.
std::string base_language();
std::string language_code(std::size_t index);

struct SynthCorpus {
  Dataset dataset;
  std::vector<ClickLogRecord> click_log;
  // doc_id -> topic, query text -> topic (ground truth for tests).
  std::vector<std::pair<std::string, std::size_t>> doc_topics;
  std::vector<std::pair<std::string, std::size_t>> query_topics;

  std::size_t topic_of_doc(const std::string& doc_id) const;
  std::size_t topic_of_query(const std::string& query) const;
};

SynthCorpus generate_corpus(const SynthConfig& config);

}  // namespace semiret
