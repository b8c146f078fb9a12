#include "semiret/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include "semiret/errors.hpp"

namespace semiret {
namespace {

const std::vector<std::string> kReservedNames = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};

void append_part(TokenSequence& seq, std::span<const TokenId> part, Segment tag) {
  for (TokenId id : part) {
    seq.ids.push_back(id);
    seq.mask.push_back(1);
    seq.segments.push_back(tag);
  }
  seq.ids.push_back(kSepId);
  seq.mask.push_back(1);
  seq.segments.push_back(tag);
}

TokenSequence start_sequence(Segment first) {
  TokenSequence seq;
  seq.ids.push_back(kClsId);
  seq.mask.push_back(1);
  seq.segments.push_back(first);
  return seq;
}

void pad_to(TokenSequence& seq, std::size_t max_len) {
  while (seq.ids.size() < max_len) {
    seq.ids.push_back(kPadId);
    seq.mask.push_back(0);
    seq.segments.push_back(Segment::kPadding);
  }
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(kReservedNames) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw FormatError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::build(std::span<const std::string> corpus, std::size_t min_count) {
  if (corpus.empty()) throw InputError("build_vocab: empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& text : corpus) {
    for (auto& word : split_words(text)) ++counts[std::move(word)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [word, n] : counts) {
    if (n >= min_count && std::find(kReservedNames.begin(), kReservedNames.end(), word) ==
                              kReservedNames.end()) {
      ranked.emplace_back(word, n);
    }
  }
  // counts is already lexicographic, so a stable sort on frequency keeps ties ordered.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens = kReservedNames;
  for (auto& [word, n] : ranked) tokens.push_back(std::move(word));
  return Vocabulary(std::move(tokens));
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open vocabulary file " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  try {
    return from_tokens(std::move(tokens));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < kReservedTokens ||
      !std::equal(kReservedNames.begin(), kReservedNames.end(), tokens.begin())) {
    throw FormatError("vocabulary must start with the reserved tokens");
  }
  return Vocabulary(std::move(tokens));
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write vocabulary file " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
}

TokenId Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= tokens_.size()) throw InputError("token id " + std::to_string(id) + " out of range");
  return tokens_[id];
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<TokenId> tokenize(const Vocabulary& vocab, std::string_view text) {
  std::vector<TokenId> ids;
  for (const auto& w : split_words(text)) ids.push_back(vocab.id(w));
  return ids;
}

std::size_t TokenSequence::active_length() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

TokenSequence TokenSequence::trimmed() const {
  const std::size_t n = active_length();
  TokenSequence out;
  out.ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n));
  out.mask.assign(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n));
  out.segments.assign(segments.begin(), segments.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

TokenSequence assemble_interactive(const Vocabulary& vocab, std::string_view query,
                                   std::string_view document, std::size_t max_len) {
  if (max_len < 5) throw InputError("assemble_interactive: max_len must be at least 5");
  auto q = tokenize(vocab, query);
  auto d = tokenize(vocab, document);
  if (q.empty()) throw InputError("assemble_interactive: empty query");
  if (d.empty()) throw InputError("assemble_interactive: empty document");
  const std::size_t budget = max_len - 3;
  if (q.size() + d.size() > budget) {
    const std::size_t keep_q = std::min(q.size(), budget - 1);
    q.resize(keep_q);
    d.resize(budget - keep_q);
  }
  TokenSequence seq = start_sequence(Segment::kQuery);
  append_part(seq, q, Segment::kQuery);
  append_part(seq, d, Segment::kDocument);
  pad_to(seq, max_len);
  return seq;
}

TokenSequence assemble_query(const Vocabulary& vocab, std::string_view query,
                             std::size_t max_len) {
  if (max_len < 3) throw InputError("assemble_query: max_len must be at least 3");
  auto q = tokenize(vocab, query);
  if (q.empty()) throw InputError("assemble_query: empty query");
  if (q.size() > max_len - 2) q.resize(max_len - 2);
  TokenSequence seq = start_sequence(Segment::kQuery);
  append_part(seq, q, Segment::kQuery);
  pad_to(seq, max_len);
  return seq;
}

TokenSequence assemble_document_semi(const Vocabulary& vocab, std::string_view document,
                                     std::span<const std::string> relevant_queries,
                                     std::size_t max_len) {
  if (max_len < 3) throw InputError("assemble_document_semi: max_len must be at least 3");
  auto d = tokenize(vocab, document);
  if (d.empty()) throw InputError("assemble_document_semi: empty document");
  std::vector<std::vector<TokenId>> extras;
  extras.reserve(relevant_queries.size());
  for (const auto& rq : relevant_queries) {
    extras.push_back(tokenize(vocab, rq));
    if (extras.back().empty()) throw InputError("assemble_document_semi: empty relevant query");
  }
  if (d.size() > max_len - 2) d.resize(max_len - 2);
  std::size_t used = d.size() + 2;
  std::size_t fitting = 0;
  for (const auto& e : extras) {
    if (used + e.size() + 1 > max_len) break;
    used += e.size() + 1;
    ++fitting;
  }
  TokenSequence seq = start_sequence(Segment::kDocument);
  append_part(seq, d, Segment::kDocument);
  for (std::size_t i = 0; i < fitting; ++i) append_part(seq, extras[i], Segment::kRelevantQuery);
  pad_to(seq, max_len);
  return seq;
}

std::string validate_sequence(const TokenSequence& seq) {
  if (seq.mask.size() != seq.ids.size() || seq.segments.size() != seq.ids.size()) {
    return "parallel arrays differ in length";
  }
  if (seq.ids.empty()) return "";
  if (seq.ids[0] != kClsId) return "first token is not [CLS]";
  bool seen_padding = false;
  for (std::size_t i = 0; i < seq.ids.size(); ++i) {
    if (seq.mask[i] == 0) {
      seen_padding = true;
    } else if (seen_padding) {
      return "active position after padding at " + std::to_string(i);
    }
  }
  const std::size_t active = seq.active_length();
  if (active > 0 && seq.ids[active - 1] != kSepId) return "active prefix does not end with [SEP]";
  for (std::size_t i = 1; i < active; ++i) {
    if (seq.segments[i] != seq.segments[i - 1] && seq.ids[i - 1] != kSepId) {
      return "segment boundary at " + std::to_string(i) + " not preceded by [SEP]";
    }
  }
  return "";
}

}  // namespace semiret
