#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "radmine/annotator.h"
#include "radmine/event_log.h"
#include "radmine/text_util.h"
#include "testing.h"

namespace radmine {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

class SessionTest : public ::testing::Test {
 protected:
  SessionTest() : corpus_(testing::small_corpus(4)), oracle_(corpus_.truth) {
    testing::write_corpus_files(corpus_, dir_.file("in"));
    spec_.seed_path = dir_.file("in/seed.tsv");
    spec_.pool_path = dir_.file("in/pool.tsv");
    spec_.config = testing::small_bootstrap_config();
    spec_.config.max_iterations = 3;
  }

  std::string session_dir() const { return dir_.file("session"); }
  std::string events() const { return dir_.file("session/events.jsonl"); }

  // Labels the first n queue items with the oracle.
  void label(BootstrapSession& s, size_t n) {
    for (size_t i = 0; i < n; ++i) {
      s.submit(oracle_.annotate(s.queue().items.front().sentence_id));
    }
  }

  TempDir dir_;
  SynthCorpus corpus_;
  SimulatedAnnotator oracle_;
  SessionSpec spec_;
};

TEST_F(SessionTest, CreateLogsInitAndOpensRound) {
  auto s = BootstrapSession::create(session_dir(), spec_);
  QueueView q = s->queue();
  EXPECT_TRUE(q.round_open);
  EXPECT_EQ(q.iteration, 0u);
  EXPECT_EQ(q.items.size(), spec_.config.queue_size);
  auto ev = read_events(events());
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].type, "init");
  EXPECT_EQ(ev[0].seq, 1u);
  EXPECT_EQ(ev[1].type, "round_open");
  EXPECT_TRUE(fs::exists(session_dir() + "/snapshot.json"));
  EXPECT_TRUE(fs::exists(session_dir() + "/models/model-t0.bin"));
  EXPECT_THROW(BootstrapSession::create(session_dir(), spec_), std::runtime_error);
}

TEST_F(SessionTest, EveryMutationIsLoggedBeforeAck) {
  auto s = BootstrapSession::create(session_dir(), spec_);
  label(*s, 3);
  auto ev = read_events(events());
  ASSERT_EQ(ev.size(), 5u);
  EXPECT_EQ(ev[4].type, "label");
  EXPECT_EQ(s->events_applied(), 5u);
  AnnotationRecord r = annotation_from_json(ev[4].payload);
  EXPECT_FALSE(r.timestamp.empty());
}

TEST_F(SessionTest, ManualOpenWhenAutoOpenOff) {
  spec_.auto_open = false;
  auto s = BootstrapSession::create(session_dir(), spec_);
  EXPECT_FALSE(s->queue().round_open);
  s->open();
  EXPECT_TRUE(s->queue().round_open);
  EXPECT_THROW(s->open(), BootstrapError);
}

TEST_F(SessionTest, LoadResumesMidRound) {
  std::string digest;
  {
    auto s = BootstrapSession::create(session_dir(), spec_);
    run_simulated_round(*s, oracle_);
    label(*s, 4);
    digest = s->digest();
  }
  auto loaded = BootstrapSession::load(session_dir());
  EXPECT_EQ(loaded->digest(), digest);
  EXPECT_EQ(loaded->queue().iteration, 1u);
  EXPECT_EQ(loaded->history().size(), 1u);
  label(*loaded, 1);
  EXPECT_EQ(read_events(events()).back().type, "label");
}

TEST_F(SessionTest, ReplayReproducesModelAndQueue) {
  auto s = BootstrapSession::create(session_dir(), spec_);
  run_simulated_round(*s, oracle_);
  run_simulated_round(*s, oracle_);
  label(*s, 5);
  auto replayed = BootstrapSession::replay(events(), dir_.file("replay"));
  EXPECT_EQ(replayed->digest(), s->digest());
  EXPECT_EQ(replayed->current_model_hash(), s->current_model_hash());
  QueueView a = s->queue(), b = replayed->queue();
  ASSERT_EQ(a.items.size(), b.items.size());
  for (size_t i = 0; i < a.items.size(); ++i) {
    EXPECT_EQ(a.items[i].sentence_id, b.items[i].sentence_id);
    EXPECT_EQ(a.items[i].score, b.items[i].score);
  }
  EXPECT_EQ(a.fp_collected, b.fp_collected);
  EXPECT_EQ(read_file(dir_.file("replay/events.jsonl")), read_file(events()));
  EXPECT_EQ(read_file(dir_.file("replay/models/model-t2.bin")),
            read_file(session_dir() + "/models/model-t2.bin"));
}

TEST_F(SessionTest, TornTailIsDropped) {
  std::string digest;
  {
    auto s = BootstrapSession::create(session_dir(), spec_);
    label(*s, 2);
    digest = s->digest();
  }
  {
    std::ofstream out(events(), std::ios::app);
    out << R"({"seq": 5, "type": "label", "itera)";
  }
  EXPECT_EQ(read_events(events()).size(), 4u);
  EXPECT_EQ(BootstrapSession::replay(events())->digest(), digest);
  auto loaded = BootstrapSession::load(session_dir());
  EXPECT_EQ(loaded->digest(), digest);
  label(*loaded, 1);
  auto ev = read_events(events());
  ASSERT_EQ(ev.size(), 5u);
  EXPECT_EQ(ev.back().seq, 5u);
}

TEST_F(SessionTest, CorruptMiddleLineIsAnError) {
  {
    auto s = BootstrapSession::create(session_dir(), spec_);
    label(*s, 2);
  }
  std::string text = read_file(events());
  size_t second_nl = text.find('\n', text.find('\n') + 1);
  text.insert(second_nl + 1, "garbage\n");
  write_file_atomic(events(), text);
  EXPECT_THROW(read_events(events()), ReplayError);
}

TEST_F(SessionTest, SequenceGapIsAnError) {
  {
    auto s = BootstrapSession::create(session_dir(), spec_);
    label(*s, 3);
  }
  std::string text = read_file(events());
  std::vector<std::string> lines;
  for (auto l : split(text, '\n')) {
    if (!l.empty()) lines.emplace_back(l);
  }
  lines.erase(lines.begin() + 2);
  std::string cut;
  for (const auto& l : lines) cut += l + "\n";
  write_file_atomic(dir_.file("cut.jsonl"), cut);
  EXPECT_THROW(BootstrapSession::replay(dir_.file("cut.jsonl")), ReplayError);
}

TEST_F(SessionTest, ChangedInputFileIsDetected) {
  {
    auto s = BootstrapSession::create(session_dir(), spec_);
  }
  write_file_atomic(spec_.pool_path, read_file(spec_.pool_path) + "extra:0:0\t0\t1\tx\n");
  EXPECT_THROW(BootstrapSession::replay(events()), ReplayError);
  EXPECT_THROW(BootstrapSession::load(session_dir()), ReplayError);
}

TEST_F(SessionTest, RunsToCompletion) {
  auto s = BootstrapSession::create(session_dir(), spec_);
  while (!s->queue().complete) run_simulated_round(*s, oracle_);
  auto h = s->history();
  ASSERT_EQ(h.size(), 3u);
  for (size_t t = 0; t < h.size(); ++t) EXPECT_EQ(h[t].iteration, t);
  EXPECT_FALSE(s->queue().round_open);
  EXPECT_THROW(s->open(), BootstrapError);
  EXPECT_THROW(s->close(), BootstrapError);
  EXPECT_EQ(BootstrapSession::load(session_dir())->digest(), s->digest());
}

// Readers never observe a half-applied mutation: each queue view is
// internally consistent while a writer is labeling.
TEST_F(SessionTest, ConcurrentReadersSeeConsistentViews) {
  auto s = BootstrapSession::create(session_dir(), spec_);
  std::atomic<bool> done{false};
  std::atomic<int> bad{0}, reads{0};
  std::vector<std::thread> readers;
  for (int r = 0; r < 4; ++r) {
    readers.emplace_back([&] {
      while (!done) {
        QueueView q = s->queue();
        if (q.round_open && q.items.size() != q.queue_size) bad++;
        if (!q.round_open && !q.items.empty()) bad++;
        s->history();
        reads++;
      }
    });
  }
  run_simulated_round(*s, oracle_);
  done = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(bad, 0);
  EXPECT_GT(reads, 0);
}

TEST(Event, JsonRoundTrip) {
  Event e{7, "label", 2, Json{{"k", 1}}, "2026-01-01T00:00:00Z"};
  Event back = Event::from_json(e.to_json());
  EXPECT_EQ(back.seq, 7u);
  EXPECT_EQ(back.type, "label");
  EXPECT_EQ(back.iteration, 2u);
  EXPECT_EQ(back.payload, e.payload);
  EXPECT_EQ(back.timestamp, e.timestamp);
}

}  // namespace
}  // namespace radmine
