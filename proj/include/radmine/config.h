#ifndef RADMINE_CONFIG_H_
#define RADMINE_CONFIG_H_

#include <cstdint>
#include <string>

#include "radmine/bootstrap.h"
#include "radmine/corpus.h"
#include "radmine/json_io.h"
#include "radmine/synth.h"

namespace radmine {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One JSON document governs every stage. Sections and keys are optional;
// anything missing keeps its default and unknown keys are rejected.
//
//   {
//     "seed": 2020,
//     "corpus":     {"min_date": "2019-11-30", "include_undated": false,
//                    "threads": 0},
//     "classifier": {"split_ratio": 0.9, "threshold": 0.5,
//                    "features": {...}, "hyper": {...}},
//     "bootstrap":  {"queue_size": 100, "fp_quota": 400,
//                    "max_iterations": 4, "auto_open": true},
//     "extract":    {"threshold": 0.5},
//     "report":     {"min_freq": 3},
//     "service":    {"host": "127.0.0.1", "port": 8080},
//     "synth":      {"pool_size": 50000, "finding_rate": 0.12,
//                    "distractor_rate": 0.12, "sources": 3000,
//                    "seed_positives": 2350, "seed_negatives": 3000,
//                    "noise": 0.0}
//   }
//
// "seed" is the only source of randomness: the train/validation split,
// minibatch order, synthetic corpora and annotator noise all derive from it.
struct Config {
  uint64_t seed = 2020;

  IngestOptions corpus;
  TrainOptions classifier;
  BootstrapConfig bootstrap;
  bool auto_open = true;
  double extract_threshold = 0.5;  // sentences scoring >= this are mined
  uint64_t report_min_freq = 3;
  std::string host = "127.0.0.1";
  int port = 8080;
  SynthConfig synth;
  double synth_noise = 0.0;

  // Seeded views used by the stages.
  TrainOptions train_options() const;
  BootstrapConfig bootstrap_config() const;
  SynthConfig synth_config() const;

  Json to_json() const;
  static Config from_json(const Json& j);  // ConfigError on bad input
  static Config load(const std::string& path);
};

}  // namespace radmine

#endif  // RADMINE_CONFIG_H_
