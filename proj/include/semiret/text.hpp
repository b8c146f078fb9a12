#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semiret {

using TokenId = std::uint32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kClsId = 2;
inline constexpr TokenId kSepId = 3;
inline constexpr std::size_t kReservedTokens = 4;

// Word-level vocabulary. Ids 0..3 are [PAD], [UNK], [CLS], [SEP]; the rest are
// ordered by corpus frequency (descending) and then lexicographically, so the
// same corpus always yields the same mapping.
class Vocabulary {
 public:
  Vocabulary();

  static Vocabulary build(std::span<const std::string> corpus, std::size_t min_count = 1);
  // Tokens in id order; must start with the reserved tokens.
  static Vocabulary from_tokens(std::vector<std::string> tokens);
  // One token per line, reserved tokens first; line number == id.
  static Vocabulary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const { return tokens_.size(); }
  TokenId id(std::string_view token) const;  // kUnkId when absent
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  explicit Vocabulary(std::vector<std::string> tokens);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

// Lowercased, whitespace-split words.
std::vector<std::string> split_words(std::string_view text);
std::vector<TokenId> tokenize(const Vocabulary& vocab, std::string_view text);

enum class Segment : std::uint8_t { kQuery, kDocument, kRelevantQuery, kPadding };

// An assembled encoder input. ids[0] is [CLS], every part is closed by [SEP],
// and active positions form a prefix followed only by padding.
struct TokenSequence {
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> mask;  // 1 = active, 0 = padding
  std::vector<Segment> segments;

  std::size_t length() const { return ids.size(); }
  std::size_t active_length() const;
  // The active prefix only, i.e. the same layout without padding.
  TokenSequence trimmed() const;
  bool operator==(const TokenSequence&) const = default;
};

// [CLS] Q [SEP] D [SEP]; overlong input loses document tail first, then query.
TokenSequence assemble_interactive(const Vocabulary& vocab, std::string_view query,
                                   std::string_view document, std::size_t max_len);

// [CLS] Q [SEP]; overlong queries keep their head.
TokenSequence assemble_query(const Vocabulary& vocab, std::string_view query,
                             std::size_t max_len);

// [CLS] D [SEP] q1 [SEP] ... qN [SEP]. Relevant queries that do not fit are
// dropped whole from the back; the document is cut only when it alone overflows.
TokenSequence assemble_document_semi(const Vocabulary& vocab, std::string_view document,
                                     std::span<const std::string> relevant_queries,
                                     std::size_t max_len);

// Checks the structural invariants above; returns an empty string when valid.
std::string validate_sequence(const TokenSequence& seq);

}  // namespace semiret
