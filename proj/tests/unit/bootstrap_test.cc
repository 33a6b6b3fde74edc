#include <gtest/gtest.h>

#include "radmine/annotator.h"
#include "radmine/bootstrap.h"
#include "testing.h"

namespace radmine {
namespace {

using Kind = BootstrapError::Kind;

AnnotationRecord rec(const SentenceId& id, Label label) {
  return {id, label, "tester", ""};
}

template <typename F>
Kind error_kind(F&& f) {
  try {
    f();
  } catch (const BootstrapError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no BootstrapError thrown";
  return Kind::kEmptyPool;
}

class BootstrapTest : public ::testing::Test {
 protected:
  BootstrapTest() : corpus_(testing::small_corpus()), config_(testing::small_bootstrap_config()) {}

  BootstrapState fresh() { return init_state(corpus_.seed, corpus_.pool, config_); }

  SynthCorpus corpus_;
  BootstrapConfig config_;
};

TEST_F(BootstrapTest, InitTrainsOnSeed) {
  BootstrapState s = fresh();
  EXPECT_EQ(s.iteration, 0u);
  EXPECT_EQ(s.pool.size(), corpus_.pool.size());
  EXPECT_EQ(s.training_set.size(), corpus_.seed.size());
  EXPECT_FALSE(s.round);
  EXPECT_EQ(s.model.trained_on(), 108u);
}

TEST_F(BootstrapTest, PoolOverlapRejected) {
  std::vector<Sentence> pool = corpus_.pool;
  pool.push_back({corpus_.seed[3].id, corpus_.seed[3].text, {}});
  try {
    init_state(corpus_.seed, pool, config_);
    FAIL();
  } catch (const BootstrapError& e) {
    EXPECT_EQ(e.kind(), Kind::kPoolOverlap);
    EXPECT_EQ(e.ids(), std::vector<SentenceId>{corpus_.seed[3].id});
  }
}

TEST_F(BootstrapTest, OpenServesTopKInRankOrder) {
  BootstrapState s = fresh();
  auto items = open_annotation_round(s, config_);
  ASSERT_EQ(items.size(), config_.queue_size);
  EXPECT_EQ(s.round->k, config_.queue_size);
  for (size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(items[i].sentence_id, s.round->ranking[i].sentence_id);
    if (i) EXPECT_GE(items[i - 1].score, items[i].score);
  }
  EXPECT_EQ(error_kind([&] { open_annotation_round(s, config_); }), Kind::kRoundOpen);
}

TEST_F(BootstrapTest, QueueTruncatedToPool) {
  std::vector<Sentence> pool(corpus_.pool.begin(), corpus_.pool.begin() + 7);
  BootstrapState s = init_state(corpus_.seed, pool, config_);
  EXPECT_EQ(open_annotation_round(s, config_).size(), 7u);
  EXPECT_EQ(s.round->k, 7u);
}

TEST_F(BootstrapTest, TiesBrokenBySentenceId) {
  std::vector<Sentence> pool;
  for (uint32_t i : {5u, 1u, 3u, 0u}) {
    pool.push_back({{"tie", 0, i}, "Identical text about nothing.", {}});
  }
  BootstrapState s = init_state(corpus_.seed, pool, config_);
  auto items = open_annotation_round(s, config_);
  std::vector<uint32_t> order;
  for (const auto& it : items) order.push_back(it.sentence_id.index);
  EXPECT_EQ(order, (std::vector<uint32_t>{0, 1, 3, 5}));
}

TEST_F(BootstrapTest, LabelRefillsFromNextRank) {
  BootstrapState s = fresh();
  open_annotation_round(s, config_);
  SentenceId second = s.round->ranking[1].sentence_id;
  SentenceId next = s.round->ranking[config_.queue_size].sentence_id;
  SubmitAck ack = submit_label(s, config_, rec(second, Label::kNegative));
  EXPECT_EQ(ack.fp_collected, 1u);
  EXPECT_EQ(ack.queue_size, config_.queue_size);
  EXPECT_FALSE(ack.quota_met);
  auto items = s.queue_items();
  EXPECT_EQ(items.back().sentence_id, next);
  for (const auto& it : items) EXPECT_NE(it.sentence_id, second);
}

TEST_F(BootstrapTest, SubmitErrors) {
  BootstrapState s = fresh();
  EXPECT_EQ(error_kind([&] { submit_label(s, config_, rec({"x", 0, 0}, Label::kNegative)); }),
            Kind::kNoRound);
  open_annotation_round(s, config_);
  SentenceId beyond = s.round->ranking[config_.queue_size + 5].sentence_id;
  EXPECT_EQ(error_kind([&] { submit_label(s, config_, rec(beyond, Label::kPositive)); }),
            Kind::kNotOnQueue);
  EXPECT_EQ(
      error_kind([&] { submit_label(s, config_, rec({"nowhere", 0, 0}, Label::kPositive)); }),
      Kind::kNotOnQueue);
  SentenceId head = s.round->ranking[0].sentence_id;
  submit_label(s, config_, rec(head, Label::kPositive));
  EXPECT_EQ(error_kind([&] { submit_label(s, config_, rec(head, Label::kNegative)); }),
            Kind::kDuplicateLabel);
  EXPECT_EQ(s.round->labels.size(), 1u);
}

TEST_F(BootstrapTest, CloseBeforeQuotaReportsRemaining) {
  BootstrapState s = fresh();
  EXPECT_EQ(error_kind([&] { close_round(s, config_); }), Kind::kNoRound);
  open_annotation_round(s, config_);
  for (int i = 0; i < 4; ++i) {
    submit_label(s, config_, rec(s.queue_items()[0].sentence_id, Label::kNegative));
  }
  EXPECT_FALSE(round_closable(s, config_));
  try {
    close_round(s, config_);
    FAIL();
  } catch (const BootstrapError& e) {
    EXPECT_EQ(e.kind(), Kind::kQuotaUnmet);
    EXPECT_EQ(e.remaining(), config_.fp_quota - 4);
  }
  EXPECT_TRUE(s.round);
}

TEST_F(BootstrapTest, QuotaAutoClosesAndConservesSentences) {
  BootstrapState s = fresh();
  size_t total = s.pool.size() + s.training_set.size();
  open_annotation_round(s, config_);
  std::string hash0 = model_hash(s.model);
  size_t labels = 0;
  SubmitAck ack;
  do {
    ack = submit_label(s, config_, rec(s.queue_items()[0].sentence_id,
                                       labels % 3 == 0 ? Label::kPositive : Label::kNegative));
    ++labels;
  } while (!ack.round_closed);
  EXPECT_TRUE(ack.quota_met);
  EXPECT_FALSE(s.round);
  EXPECT_EQ(s.iteration, 1u);
  EXPECT_EQ(s.pool.size() + s.training_set.size(), total);
  EXPECT_EQ(s.training_set.size(), corpus_.seed.size() + labels);
  ASSERT_EQ(s.history.size(), 1u);
  const IterationRecord& h = s.history[0];
  EXPECT_EQ(h.iteration, 0u);
  EXPECT_EQ(h.model_hash, hash0);
  EXPECT_EQ(h.negatives, config_.fp_quota);
  EXPECT_EQ(h.positives + h.negatives, labels);
  EXPECT_EQ(h.labels.size(), labels);
  EXPECT_DOUBLE_EQ(h.precision_at_k, recompute_precision(h));
  EXPECT_NE(model_hash(s.model), hash0);
  for (const auto& l : h.labels) EXPECT_FALSE(s.pool.contains(l.sentence_id));
  const LabeledSentence& added = s.training_set.back();
  EXPECT_EQ(added.source, LabelSource::kBootstrap);
  EXPECT_EQ(added.iteration, 1u);
}

TEST_F(BootstrapTest, ZeroPositiveRoundStillRetrains) {
  BootstrapState s = fresh();
  open_annotation_round(s, config_);
  for (size_t i = 0; i < config_.fp_quota; ++i) {
    submit_label(s, config_, rec(s.queue_items()[0].sentence_id, Label::kNegative));
  }
  ASSERT_EQ(s.history.size(), 1u);
  EXPECT_EQ(s.history[0].positives, 0u);
  EXPECT_EQ(s.history[0].precision_at_k, 0.0);
  EXPECT_EQ(s.iteration, 1u);
}

TEST_F(BootstrapTest, ExhaustedPoolMakesRoundClosable) {
  std::vector<Sentence> pool(corpus_.pool.begin(), corpus_.pool.begin() + 5);
  BootstrapState s = init_state(corpus_.seed, pool, config_);
  open_annotation_round(s, config_);
  for (int i = 0; i < 5; ++i) {
    submit_label(s, config_, rec(s.queue_items()[0].sentence_id, Label::kPositive));
  }
  EXPECT_TRUE(round_closable(s, config_));
  close_round(s, config_);
  EXPECT_TRUE(s.pool.empty());
  EXPECT_DOUBLE_EQ(s.history[0].precision_at_k, 1.0);
  EXPECT_EQ(error_kind([&] { open_annotation_round(s, config_); }), Kind::kEmptyPool);
}

TEST_F(BootstrapTest, IterationLimit) {
  config_.max_iterations = 1;
  BootstrapState s = fresh();
  SimulatedAnnotator oracle(corpus_.truth);
  open_annotation_round(s, config_);
  run_simulated_round(s, config_, oracle);
  EXPECT_EQ(error_kind([&] { open_annotation_round(s, config_); }), Kind::kIterationLimit);
}

TEST_F(BootstrapTest, DigestTracksState) {
  BootstrapState a = fresh(), b = fresh();
  EXPECT_EQ(state_digest(a), state_digest(b));
  open_annotation_round(a, config_);
  EXPECT_NE(state_digest(a), state_digest(b));
  open_annotation_round(b, config_);
  EXPECT_EQ(state_digest(a), state_digest(b));
  submit_label(a, config_, rec(a.queue_items()[0].sentence_id, Label::kPositive));
  EXPECT_NE(state_digest(a), state_digest(b));
}

TEST(BootstrapConfig, Validation) {
  BootstrapConfig c;
  EXPECT_NO_THROW(c.validate());
  c.queue_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.fp_quota = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(BootstrapErrorCode, StableNames) {
  EXPECT_EQ(bootstrap_error_code(Kind::kNotOnQueue), "not_on_queue");
  EXPECT_EQ(bootstrap_error_code(Kind::kDuplicateLabel), "duplicate_label");
  EXPECT_EQ(bootstrap_error_code(Kind::kQuotaUnmet), "quota_unmet");
  EXPECT_EQ(bootstrap_error_code(Kind::kNoRound), "no_open_round");
}

}  // namespace
}  // namespace radmine
