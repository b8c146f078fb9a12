#include "semiret/dataset.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semiret/errors.hpp"

namespace semiret {

using nlohmann::json;

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split parse_split(const std::string& text) {
  if (text == "train") return Split::kTrain;
  if (text == "valid") return Split::kValid;
  if (text == "test") return Split::kTest;
  throw InputError("unknown split '" + text + "'");
}

Dataset Dataset::subset(Split split) const {
  Dataset out;
  for (const auto& s : samples) {
    if (s.split == split) out.samples.push_back(s);
  }
  return out;
}

std::vector<std::string> Dataset::languages() const {
  std::set<std::string> langs;
  for (const auto& s : samples) langs.insert(s.query_lang);
  return {langs.begin(), langs.end()};
}

std::vector<std::string> Dataset::texts() const {
  std::vector<std::string> out;
  for (const auto& s : samples) {
    out.push_back(s.query);
    out.push_back(s.document);
    out.insert(out.end(), s.relevant_queries.begin(), s.relevant_queries.end());
  }
  return out;
}

void validate_sample(const TrainingSample& s) {
  if (s.label != 0 && s.label != 1) {
    throw InputError("field 'label' must be 0 or 1, got " + std::to_string(s.label));
  }
  if (s.query.empty()) throw InputError("field 'query' is empty");
  if (s.document.empty()) throw InputError("field 'document' is empty");
  for (const auto& rq : s.relevant_queries) {
    if (rq.empty()) throw InputError("field 'relevant_queries' contains an empty entry");
  }
}

namespace {

json sample_to_json(const TrainingSample& s) {
  return json{{"query", s.query},
              {"query_lang", s.query_lang},
              {"doc_id", s.doc_id},
              {"document", s.document},
              {"relevant_queries", s.relevant_queries},
              {"label", s.label},
              {"split", to_string(s.split)}};
}

TrainingSample sample_from_json(const json& j) {
  TrainingSample s;
  s.query = j.at("query").get<std::string>();
  s.query_lang = j.value("query_lang", std::string());
  s.doc_id = j.value("doc_id", std::string());
  s.document = j.at("document").get<std::string>();
  s.relevant_queries = j.value("relevant_queries", std::vector<std::string>{});
  s.label = j.at("label").get<int>();
  s.split = parse_split(j.value("split", std::string("train")));
  return s;
}

}  // namespace

Dataset dataset_from_jsonl(const std::string& text, const std::string& origin) {
  Dataset ds;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      TrainingSample s = sample_from_json(json::parse(line));
      validate_sample(s);
      ds.samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw FormatError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw FormatError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ds;
}

std::string dataset_to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const auto& s : dataset.samples) {
    out += sample_to_json(s).dump();
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dataset " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return dataset_from_jsonl(buf.str(), path.string());
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write dataset " + path.string());
  out << dataset_to_jsonl(dataset);
}

Dataset load_tsv_dataset(const std::filesystem::path& path, Split split) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  Dataset ds;
  std::map<std::string, std::string> doc_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
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
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (cols.size() < 4) throw FormatError(where + ": expected at least 4 columns");
    TrainingSample s;
    s.query_lang = cols[0];
    s.query = cols[1];
    s.document = cols[2];
    auto it = doc_ids.try_emplace(cols[2], "tsv-doc-" + std::to_string(doc_ids.size())).first;
    s.doc_id = it->second;
    if (cols[3] != "0" && cols[3] != "1") throw FormatError(where + ": label must be 0 or 1");
    s.label = cols[3] == "1" ? 1 : 0;
    s.split = split;
    if (cols.size() > 4 && !cols[4].empty()) {
      const std::string sep = " ||| ";
      std::size_t pos = 0;
      while (true) {
        const auto next = cols[4].find(sep, pos);
        s.relevant_queries.push_back(cols[4].substr(pos, next == std::string::npos ? next : next - pos));
        if (next == std::string::npos) break;
        pos = next + sep.size();
      }
    }
    try {
      validate_sample(s);
    } catch (const Error& e) {
      throw FormatError(where + ": " + e.what());
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace semiret
