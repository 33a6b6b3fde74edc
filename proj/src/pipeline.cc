#include "radmine/pipeline.h"

#include <filesystem>

#include "radmine/hash.h"
#include "radmine/text_util.h"

namespace radmine {

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kIngest: return "ingest";
    case Stage::kTrain: return "train";
    case Stage::kBootstrap: return "bootstrap";
    case Stage::kExtract: return "extract";
    case Stage::kReport: return "report";
  }
  return "?";
}

std::string_view status_name(StageStatus status) {
  switch (status) {
    case StageStatus::kPending: return "pending";
    case StageStatus::kRunning: return "running";
    case StageStatus::kComplete: return "complete";
  }
  return "?";
}

std::string_view error_kind_name(PipelineError::Kind kind) {
  switch (kind) {
    case PipelineError::Kind::kStagePrecondition: return "StagePreconditionError";
    case PipelineError::Kind::kConfigMismatch: return "ConfigMismatchError";
    case PipelineError::Kind::kStatusRegression: return "StatusRegressionError";
    case PipelineError::Kind::kCorrupt: return "CorruptRunError";
  }
  return "PipelineError";
}

namespace {

std::optional<StageStatus> parse_status(const std::string& s) {
  for (auto st : {StageStatus::kPending, StageStatus::kRunning, StageStatus::kComplete}) {
    if (status_name(st) == s) return st;
  }
  return std::nullopt;
}

}  // namespace

PipelineRun PipelineRun::open(const std::string& root,
                              const std::optional<Config>& config) {
  PipelineRun run;
  run.paths_.root = root;
  std::filesystem::create_directories(root);
  if (!std::filesystem::exists(run.paths_.run())) {
    run.config_ = config.value_or(Config{});
    run.config_snapshot_ = run.config_.to_json();
    run.run_id_ = "run-" + hex64(fnv1a64(run.config_snapshot_.dump()));
    run.save();
    return run;
  }
  try {
    Json j = Json::parse(read_file(run.paths_.run()));
    run.run_id_ = j.at("run_id").get<std::string>();
    run.config_snapshot_ = j.at("config");
    run.config_ = Config::from_json(run.config_snapshot_);
    run.corpus_fingerprint_ = j.value("corpus_fingerprint", "");
    for (Stage s : kStages) {
      const Json& e = j.at("stages").at(std::string(stage_name(s)));
      auto st = parse_status(e.at("status").get<std::string>());
      if (!st) throw std::runtime_error("bad status for " + std::string(stage_name(s)));
      run.status_[static_cast<size_t>(s)] = *st;
      run.updated_[static_cast<size_t>(s)] = e.value("updated", "");
    }
  } catch (const std::exception& e) {
    throw PipelineError(PipelineError::Kind::kCorrupt,
                        run.paths_.run() + ": " + e.what());
  }
  if (config && config->to_json() != run.config_snapshot_) {
    throw PipelineError(PipelineError::Kind::kConfigMismatch,
                        "config differs from the snapshot of " + run.run_id_ + " in " +
                            root + "; use a fresh --out directory");
  }
  return run;
}

StageStatus PipelineRun::status(Stage stage) const {
  return status_[static_cast<size_t>(stage)];
}

void PipelineRun::require(Stage stage, Stage needed) const {
  if (status(needed) != StageStatus::kComplete) {
    throw PipelineError(PipelineError::Kind::kStagePrecondition,
                        "stage '" + std::string(stage_name(stage)) +
                            "' requires stage '" + std::string(stage_name(needed)) +
                            "' to be complete (it is " +
                            std::string(status_name(status(needed))) + ")");
  }
}

void PipelineRun::advance(Stage stage, StageStatus st) {
  auto i = static_cast<size_t>(stage);
  if (st < status_[i]) {
    throw PipelineError(PipelineError::Kind::kStatusRegression,
                        "stage '" + std::string(stage_name(stage)) + "' cannot go from " +
                            std::string(status_name(status_[i])) + " to " +
                            std::string(status_name(st)));
  }
  status_[i] = st;
  updated_[i] = utc_timestamp();
  save();
}

void PipelineRun::set_corpus_fingerprint(std::string fingerprint) {
  corpus_fingerprint_ = std::move(fingerprint);
  save();
}

Json PipelineRun::to_json() const {
  Json stages = Json::object();
  for (Stage s : kStages) {
    auto i = static_cast<size_t>(s);
    stages[std::string(stage_name(s))] = {{"status", status_name(status_[i])},
                                          {"updated", updated_[i]}};
  }
  return {{"run_id", run_id_},
          {"seed", config_.seed},
          {"corpus_fingerprint", corpus_fingerprint_},
          {"config", config_snapshot_},
          {"stages", stages}};
}

void PipelineRun::save() const {
  write_file_atomic(paths_.run(), to_json().dump(2) + "\n");
}

}  // namespace radmine
