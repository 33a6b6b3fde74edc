#include <gtest/gtest.h>

#include <set>

#include "radmine/corpus.h"
#include "radmine/synth.h"
#include "testing.h"

namespace radmine {
namespace {

TEST(SentenceGenerator, SeededAndVaried) {
  SentenceGenerator a(7, 100), b(7, 100), c(8, 100);
  std::set<std::string> seen;
  bool any_diff = false;
  for (int i = 0; i < 200; ++i) {
    std::string x = a.finding();
    EXPECT_EQ(x, b.finding());
    any_diff |= x != c.finding();
    seen.insert(x);
  }
  EXPECT_TRUE(any_diff);
  EXPECT_GT(seen.size(), 150u);
}

TEST(SentenceGenerator, DistractorsCiteASource) {
  SentenceGenerator g(3, 10);
  for (int i = 0; i < 100; ++i) {
    std::string d = g.distractor();
    EXPECT_TRUE(d.ends_with(").")) << d;
    EXPECT_NE(d.find(" ("), std::string::npos) << d;
  }
}

TEST(SentenceGenerator, SentencesEndWithPeriodAndSegmentAsOne) {
  SentenceGenerator g(4, 50);
  for (int i = 0; i < 300; ++i) {
    for (const std::string& s : {g.finding(), g.report(), g.generic(), g.distractor()}) {
      EXPECT_EQ(segment_paragraph(s).size(), 1u) << s;
    }
  }
}

TEST(BootstrapCorpus, ShapeAndTruth) {
  SynthConfig c;
  c.pool_size = 2000;
  c.seed_positives = 50;
  c.seed_negatives = 70;
  c.sources = 30;
  SynthCorpus corpus = generate_bootstrap_corpus(c);
  EXPECT_EQ(corpus.seed.size(), 120u);
  EXPECT_EQ(corpus.pool.size(), 2000u);
  EXPECT_EQ(corpus.truth.size(), 2000u);
  size_t positives = 0;
  std::set<SentenceId> ids;
  for (const auto& s : corpus.pool) {
    ids.insert(s.id);
    positives += corpus.truth.at(s.id) == Label::kPositive;
  }
  EXPECT_EQ(ids.size(), 2000u);
  EXPECT_EQ(positives, 240u);  // floor(2000 * 0.12)
  for (const auto& s : corpus.seed) EXPECT_FALSE(ids.contains(s.id));
  EXPECT_EQ(corpus.pool[1500].id, (SentenceId{"pool-001", 0, 500}));
}

TEST(BootstrapCorpus, Deterministic) {
  SynthConfig c;
  c.pool_size = 500;
  c.seed_positives = c.seed_negatives = 20;
  SynthCorpus a = generate_bootstrap_corpus(c), b = generate_bootstrap_corpus(c);
  for (size_t i = 0; i < a.pool.size(); ++i) EXPECT_EQ(a.pool[i].text, b.pool[i].text);
  EXPECT_EQ(a.truth, b.truth);
  c.seed = 1;
  SynthCorpus d = generate_bootstrap_corpus(c);
  EXPECT_NE(a.truth, d.truth);
}

TEST(BootstrapCorpus, RejectsBadRates) {
  SynthConfig c;
  c.finding_rate = 0.7;
  c.distractor_rate = 0.5;
  EXPECT_THROW(generate_bootstrap_corpus(c), std::invalid_argument);
}

TEST(ScaleCorpus, IngestMatchesReportedCounts) {
  testing::TempDir dir;
  ScaleConfig c;
  c.articles = 30;
  c.sentences_per_article = 25;
  c.old_articles = 4;
  c.undated_articles = 2;
  ScaleStats stats = write_scale_corpus(dir.path(), c);
  EXPECT_EQ(stats.files, 36u);
  EXPECT_EQ(stats.sentences, 30u * 25u);
  IngestResult r = ingest_corpus(dir.path(), {});
  EXPECT_EQ(r.report.files_read, 36u);
  EXPECT_EQ(r.report.files_skipped, 0u);
  EXPECT_EQ(r.articles.size(), 30u);
  EXPECT_EQ(segment_corpus(r.articles).size(), stats.sentences);
}

}  // namespace
}  // namespace radmine
