#include <gtest/gtest.h>

#include "radmine/pipeline.h"
#include "radmine/text_util.h"
#include "testing.h"

namespace radmine {
namespace {

using Kind = PipelineError::Kind;

template <typename F>
Kind error_kind(F&& f) {
  try {
    f();
  } catch (const PipelineError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no PipelineError thrown";
  return Kind::kCorrupt;
}

TEST(PipelineRun, CreatesRunWithPendingStages) {
  testing::TempDir dir;
  PipelineRun run = PipelineRun::open(dir.path(), Config{});
  EXPECT_TRUE(run.run_id().starts_with("run-"));
  for (Stage s : kStages) EXPECT_EQ(run.status(s), StageStatus::kPending);
  Json j = Json::parse(read_file(run.paths().run()));
  EXPECT_EQ(j["run_id"], run.run_id());
  EXPECT_EQ(j["seed"], 2020);
  EXPECT_EQ(j["stages"]["extract"]["status"], "pending");
}

TEST(PipelineRun, RunIdDependsOnConfigOnly) {
  testing::TempDir a, b, c;
  Config other;
  other.seed = 1;
  EXPECT_EQ(PipelineRun::open(a.path(), Config{}).run_id(),
            PipelineRun::open(b.path(), Config{}).run_id());
  EXPECT_NE(PipelineRun::open(c.path(), other).run_id(),
            PipelineRun::open(a.path(), std::nullopt).run_id());
}

TEST(PipelineRun, StatusPersistsAndOnlyMovesForward) {
  testing::TempDir dir;
  {
    PipelineRun run = PipelineRun::open(dir.path(), std::nullopt);
    run.advance(Stage::kIngest, StageStatus::kRunning);
    run.advance(Stage::kIngest, StageStatus::kComplete);
    run.set_corpus_fingerprint("abc");
  }
  PipelineRun run = PipelineRun::open(dir.path(), std::nullopt);
  EXPECT_EQ(run.status(Stage::kIngest), StageStatus::kComplete);
  EXPECT_EQ(run.corpus_fingerprint(), "abc");
  EXPECT_EQ(error_kind([&] { run.advance(Stage::kIngest, StageStatus::kRunning); }),
            Kind::kStatusRegression);
  EXPECT_EQ(run.status(Stage::kIngest), StageStatus::kComplete);
}

TEST(PipelineRun, RequireNamesBothStages) {
  testing::TempDir dir;
  PipelineRun run = PipelineRun::open(dir.path(), std::nullopt);
  try {
    run.require(Stage::kReport, Stage::kExtract);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.kind(), Kind::kStagePrecondition);
    EXPECT_STREQ(e.what(),
                 "stage 'report' requires stage 'extract' to be complete (it is pending)");
  }
  run.advance(Stage::kExtract, StageStatus::kRunning);
  EXPECT_EQ(error_kind([&] { run.require(Stage::kReport, Stage::kExtract); }),
            Kind::kStagePrecondition);
  run.advance(Stage::kExtract, StageStatus::kComplete);
  EXPECT_NO_THROW(run.require(Stage::kReport, Stage::kExtract));
}

TEST(PipelineRun, ConfigMismatchRejected) {
  testing::TempDir dir;
  PipelineRun::open(dir.path(), Config{});
  Config other;
  other.report_min_freq = 9;
  EXPECT_EQ(error_kind([&] { PipelineRun::open(dir.path(), other); }),
            Kind::kConfigMismatch);
  EXPECT_NO_THROW(PipelineRun::open(dir.path(), Config{}));
  EXPECT_EQ(PipelineRun::open(dir.path(), std::nullopt).config().to_json(),
            Config{}.to_json());
}

TEST(PipelineRun, CorruptRunFile) {
  testing::TempDir dir;
  write_file_atomic(dir.file("run.json"), "{\"run_id\": 3}");
  EXPECT_EQ(error_kind([&] { PipelineRun::open(dir.path(), std::nullopt); }), Kind::kCorrupt);
}

TEST(PipelineNames, Stable) {
  EXPECT_EQ(stage_name(Stage::kBootstrap), "bootstrap");
  EXPECT_EQ(status_name(StageStatus::kRunning), "running");
  EXPECT_EQ(error_kind_name(Kind::kStagePrecondition), "StagePreconditionError");
  EXPECT_EQ(error_kind_name(Kind::kConfigMismatch), "ConfigMismatchError");
  EXPECT_EQ(error_kind_name(Kind::kStatusRegression), "StatusRegressionError");
}

}  // namespace
}  // namespace radmine
