#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "semiret/errors.hpp"
#include "semiret/evaluation.hpp"
#include "semiret/metrics.hpp"
#include "semiret/training.hpp"

using namespace semiret;
using namespace semiret::testing;

namespace {

// Zero-weight encoder whose token embeddings are one-hot by topic: every
// representation points along its topic axis, so cosine reveals the label.
DualModel topic_oracle(const SynthCorpus& corpus, std::shared_ptr<const Vocabulary> vocab) {
  EncoderConfig cfg = tiny_encoder(vocab->size());
  DualModel m{vocab, EncoderModel(cfg, false), EncoderModel(cfg, false),
              Mechanism::kNonInteractive, 0};
  Matrix emb(vocab->size(), cfg.hidden_dim);
  for (const auto& s : corpus.dataset.samples) {
    const std::size_t dt = corpus.topic_of_doc(s.doc_id);
    for (const auto& w : split_words(s.document)) emb(vocab->id(w), dt) = 1.0;
    const std::size_t qt = corpus.topic_of_query(s.query);
    for (const auto& w : split_words(s.query)) emb(vocab->id(w), qt) = 1.0;
  }
  m.query_encoder.token_embeddings() = emb;
  m.document_encoder.token_embeddings() = emb;
  return m;
}

}  // namespace

TEST(Evaluate, LabelRevealingScoresGiveAucOne) {
  const SynthCorpus corpus = generate_corpus(two_topic_config(5));
  const auto vocab = vocabulary_for(corpus.dataset);
  const DualModel oracle = topic_oracle(corpus, vocab);
  const Dataset positives_and_negatives = corpus.dataset.subset(Split::kTrain);
  const EvalReport r = evaluate_run(oracle, positives_and_negatives);
  EXPECT_EQ(r.find("auc", "avg").value, 1.0);
  EXPECT_EQ(r.find("auc", "en-en").value, 1.0);
  EXPECT_GT(r.find("ndcg@10", "avg").value, 0.0);
}

TEST(Evaluate, RowsAgreeWithDirectComputation) {
  SynthConfig c = small_corpus_config(9);
  const SynthCorpus corpus = generate_corpus(c);
  const Dataset test = corpus.dataset.subset(Split::kTest);
  const auto vocab = vocabulary_for(corpus.dataset);
  const AnyModel m = DualModel::create(vocab, tiny_encoder(vocab->size()),
                                       Mechanism::kSemiInteractive, 2, 3);
  const EvalReport r = evaluate_run(m, test);
  const auto scores = score_samples(m, test.samples);
  double mean = 0.0;
  for (const auto& lang : test.languages()) {
    std::vector<double> s;
    std::vector<int> y;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (test.samples[i].query_lang != lang) continue;
      s.push_back(scores[i]);
      y.push_back(test.samples[i].label);
    }
    const ReportRow& row = r.find("auc", lang + "-en");
    EXPECT_EQ(row.value, auc(s, y));
    EXPECT_EQ(row.n_samples, s.size());
    EXPECT_EQ(row.mechanism, "semi-interactive");
    mean += row.value;
    const double nd = r.find("ndcg@10", lang + "-en").value;
    EXPECT_GE(nd, 0.0);
    EXPECT_LE(nd, 1.0);
  }
  EXPECT_NEAR(r.find("auc", "avg").value, mean / static_cast<double>(test.languages().size()), 1e-15);
  EXPECT_THROW(r.find("auc", "xx-en"), LookupError);

  const EvalReport again = evaluate_run(m, test);
  EXPECT_EQ(again.rows, r.rows);
  EXPECT_EQ(r.to_json().size(), r.rows.size());
}

TEST(Evaluate, TasksAndErrors) {
  const SynthCorpus corpus = generate_corpus(small_corpus_config(9));
  const Dataset test = corpus.dataset.subset(Split::kTest);
  const auto vocab = vocabulary_for(corpus.dataset);
  const AnyModel m = InteractiveModel::create(vocab, tiny_encoder(vocab->size()), 3);
  EvalOptions only_auc;
  only_auc.search = false;
  const EvalReport r = evaluate_run(m, test, only_auc);
  for (const auto& row : r.rows) EXPECT_EQ(row.metric, "auc");
  EXPECT_EQ(r.rows.back().mechanism, "interactive");
  EXPECT_THROW(evaluate_run(m, Dataset{}), InputError);
}

TEST(PcaExport, CsvLayout) {
  std::vector<std::vector<double>> v{{1, 0, 0, 1}, {0, 2, 0, 0}, {0, 0, 3, 1}, {1, 1, 1, 0}, {2, 0, 1, 1}};
  const PcaProjection p = pca_project(v);
  std::vector<PointLabel> labels(5, {"query", "ru"});
  labels[1] = {"document", "en"};
  const std::string csv = pca_to_csv(p, labels);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,z,kind,lang");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (rows == 2) EXPECT_NE(line.find(",document,en"), std::string::npos);
  }
  EXPECT_EQ(rows, 5u);
  EXPECT_THROW(pca_to_csv(p, std::vector<PointLabel>(2)), InputError);
}

TEST(PcaExport, CollectRepresentationsCountsDistinctItems) {
  const SynthCorpus corpus = generate_corpus(small_corpus_config(9));
  const Dataset test = corpus.dataset.subset(Split::kTest);
  const auto vocab = vocabulary_for(corpus.dataset);
  const DualModel m = DualModel::create(vocab, tiny_encoder(vocab->size()),
                                        Mechanism::kSemiInteractive, 2, 3);
  const RepresentationCloud cloud = collect_representations(m, test.samples);
  std::set<std::string> qs, ds;
  for (const auto& s : test.samples) {
    qs.insert(s.query);
    ds.insert(s.doc_id);
  }
  EXPECT_EQ(cloud.vectors.size(), qs.size() + ds.size());
  EXPECT_EQ(cloud.labels.size(), cloud.vectors.size());
}
