#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semiret/checkpoint.hpp"
#include "semiret/dataset.hpp"
#include "semiret/metrics.hpp"

namespace semiret {

struct ReportRow {
  std::string mechanism;
  std::string language_pair;  // "<query_lang>-<doc_lang>" or "avg"
  std::string metric;         // "auc" or "ndcg@10"
  double value = 0.0;
  std::size_t n_samples = 0;

  bool operator==(const ReportRow&) const = default;
};

struct EvalReport {
  std::vector<ReportRow> rows;

  // Throws LookupError when the row is absent.
  const ReportRow& find(const std::string& metric, const std::string& language_pair) const;
  nlohmann::json to_json() const;
  void save(const std::filesystem::path& path) const;
};

struct EvalOptions {
  bool similarity = true;
  bool search = true;
  std::size_t k = 10;
  // Search ranks, per query, its labeled documents plus this many other test
  // documents drawn with `seed` (grade 1 for labeled-relevant, else 0).
  std::size_t distractors = 19;
  std::uint64_t seed = 7;
  std::string doc_lang = "en";
};

// Per-language and average AUC over the labeled pairs, and per-language and
// average NDCG@k over candidate pools, each scored through the model's own
// scoring path. Throws InputError on an empty test set.
EvalReport evaluate_run(const AnyModel& model, const Dataset& test_set,
                        const EvalOptions& options = {});

struct PointLabel {
  std::string kind;  // "query" or "document"
  std::string lang;
};

// CSV with header x,y,z,kind,lang and one row per projected vector.
std::string pca_to_csv(const PcaProjection& projection, std::span<const PointLabel> labels);

// Encodes the distinct queries and documents of `samples` with a dual model
// and projects them jointly.
struct RepresentationCloud {
  std::vector<std::vector<double>> vectors;
  std::vector<PointLabel> labels;
};
RepresentationCloud collect_representations(const DualModel& model,
                                            std::span<const TrainingSample> samples,
                                            const std::string& doc_lang = "en");

}  // namespace semiret
