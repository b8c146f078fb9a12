#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "semiret/corpus.hpp"
#include "semiret/encoder.hpp"
#include "semiret/text.hpp"

namespace semiret::testing {

// A small corpus that generates in milliseconds.
SynthConfig small_corpus_config(std::uint64_t seed = 7);

// Two topics, one language: separable by token identity alone.
SynthConfig two_topic_config(std::uint64_t seed = 3);

EncoderConfig tiny_encoder(std::size_t vocab_size);

std::shared_ptr<const Vocabulary> vocabulary_for(const Dataset& dataset);

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace semiret::testing
