#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace semiret {

enum class Split { kTrain, kValid, kTest };

std::string to_string(Split split);
Split parse_split(const std::string& text);

// One <query, document, relevant_queries, label> record.
struct TrainingSample {
  std::string query;
  std::string query_lang;
  std::string doc_id;
  std::string document;
  std::vector<std::string> relevant_queries;
  int label = 0;
  Split split = Split::kTrain;

  bool operator==(const TrainingSample&) const = default;
};

struct Dataset {
  std::vector<TrainingSample> samples;

  Dataset subset(Split split) const;
  // Sorted, distinct query languages.
  std::vector<std::string> languages() const;
  // Every text in the dataset (queries, documents, relevant queries).
  std::vector<std::string> texts() const;
  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

// Throws InputError naming the field when a sample breaks an invariant.
void validate_sample(const TrainingSample& sample);

// JSON lines, one sample per line with keys doc_id, document, label, query,
// query_lang, relevant_queries, split. Empty file -> empty dataset; malformed
// lines raise FormatError citing the 1-based line number.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(const std::string& text, const std::string& origin = "<memory>");

// Tab-separated WikiCLIR-shaped rows:
//   query_lang <TAB> query <TAB> document <TAB> label [<TAB> rq1 ||| rq2 ...]
// Documents get ids in order of first appearance; every row lands in `split`.
Dataset load_tsv_dataset(const std::filesystem::path& path, Split split = Split::kTrain);

}  // namespace semiret
