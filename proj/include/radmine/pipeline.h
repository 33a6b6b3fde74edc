#ifndef RADMINE_PIPELINE_H_
#define RADMINE_PIPELINE_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "radmine/config.h"
#include "radmine/json_io.h"

namespace radmine {

enum class Stage { kIngest, kTrain, kBootstrap, kExtract, kReport };
inline constexpr std::array<Stage, 5> kStages = {
    Stage::kIngest, Stage::kTrain, Stage::kBootstrap, Stage::kExtract, Stage::kReport};

std::string_view stage_name(Stage stage);

// Statuses only move forward: pending -> running -> complete.
enum class StageStatus { kPending, kRunning, kComplete };
std::string_view status_name(StageStatus status);

class PipelineError : public std::runtime_error {
 public:
  enum class Kind {
    kStagePrecondition,  // e.g. report before extract
    kConfigMismatch,     // a verb's config differs from the run snapshot
    kStatusRegression,
    kCorrupt,            // run.json unreadable
  };
  PipelineError(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view error_kind_name(PipelineError::Kind kind);

// Fixed file names inside a workspace directory.
struct WorkspacePaths {
  std::string root;

  std::string run() const { return root + "/run.json"; }
  std::string sentences() const { return root + "/sentences.tsv"; }
  std::string ingest_report() const { return root + "/ingest_report.json"; }
  std::string model() const { return root + "/model.bin"; }
  std::string model_text() const { return root + "/model.txt"; }
  std::string metrics() const { return root + "/metrics.json"; }
  std::string predictions() const { return root + "/predictions.tsv"; }
  std::string session() const { return root + "/session"; }
  std::string mined() const { return root + "/mined.tsv"; }
  std::string phrases() const { return root + "/phrases.tsv"; }
  std::string extract_summary() const { return root + "/extract.json"; }
  std::string report_tsv() const { return root + "/report.tsv"; }
  std::string report_json() const { return root + "/report.json"; }
};

// run.json: one pipeline run per workspace.
//   {"run_id", "seed", "corpus_fingerprint", "config", "stages": {
//      "ingest": {"status", "updated"}, ...}}
// The config snapshot is fixed when the run is created.
class PipelineRun {
 public:
  // Opens the run in `root`, creating it with `config` if absent. When the
  // run exists and `config` is given, it must match the snapshot.
  static PipelineRun open(const std::string& root, const std::optional<Config>& config);

  const std::string& run_id() const { return run_id_; }
  const Config& config() const { return config_; }
  const WorkspacePaths& paths() const { return paths_; }
  const std::string& corpus_fingerprint() const { return corpus_fingerprint_; }
  StageStatus status(Stage stage) const;

  // Throws PipelineError naming both stages unless `needed` is complete.
  void require(Stage stage, Stage needed) const;

  void advance(Stage stage, StageStatus status);  // persists run.json
  void set_corpus_fingerprint(std::string fingerprint);

  Json to_json() const;

 private:
  void save() const;

  WorkspacePaths paths_;
  std::string run_id_;
  Config config_;
  Json config_snapshot_;
  std::string corpus_fingerprint_;
  std::array<StageStatus, 5> status_{};
  std::array<std::string, 5> updated_{};
};

}  // namespace radmine

#endif  // RADMINE_PIPELINE_H_
