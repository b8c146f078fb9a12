#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace semiret::testing {

SynthConfig small_corpus_config(std::uint64_t seed) {
  SynthConfig c;
  c.num_topics = 4;
  c.vocab_per_topic = 12;
  c.docs_per_topic = 5;
  c.queries_per_doc = 4;
  c.doc_length = 6;
  c.query_length = 2;
  c.relevant_per_doc = 3;
  c.seed = seed;
  return c;
}

SynthConfig two_topic_config(std::uint64_t seed) {
  SynthConfig c;
  c.num_topics = 2;
  c.vocab_per_topic = 8;
  c.num_languages = 1;
  c.docs_per_topic = 12;
  c.queries_per_doc = 8;
  c.doc_length = 6;
  c.query_length = 2;
  c.relevant_per_doc = 3;
  c.seed = seed;
  return c;
}

EncoderConfig tiny_encoder(std::size_t vocab_size) {
  EncoderConfig e;
  e.num_layers = 1;
  e.hidden_dim = 16;
  e.num_heads = 2;
  e.ffn_dim = 32;
  e.max_seq_len = 32;
  e.vocab_size = vocab_size;
  return e;
}

std::shared_ptr<const Vocabulary> vocabulary_for(const Dataset& dataset) {
  return std::make_shared<const Vocabulary>(Vocabulary::build(dataset.texts()));
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("semiret_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace semiret::testing
