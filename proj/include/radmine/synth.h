#ifndef RADMINE_SYNTH_H_
#define RADMINE_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "radmine/classifier.h"
#include "radmine/corpus.h"
#include "radmine/rng.h"

namespace radmine {

// Sentence families used by the synthetic corpora.
//   finding     a radiological finding reported for a patient (positive)
//   report      seed-style finding in terse report phrasing (positive)
//   distractor  a finding quoted from elsewhere, marked only by the cited
//               source name: "... in both lungs (Kavoru)." (negative)
//   generic     clinical or epidemiological text (negative)
// Source names are drawn uniformly from n_sources invented surnames. A
// classifier can only demote a distractor once it has seen labeled examples
// citing the same source, so the more sources there are, the more rounds of
// labels it takes to learn them.
class SentenceGenerator {
 public:
  explicit SentenceGenerator(uint64_t seed, size_t n_sources = 3000);

  std::string finding();
  std::string report();
  std::string listing(size_t n_findings);
  std::string distractor();
  std::string generic();

 private:
  Rng rng_;
  std::vector<std::string> sources_;
};

struct SynthConfig {
  uint64_t seed = 2020;
  size_t pool_size = 50000;
  double finding_rate = 0.12;
  double distractor_rate = 0.12;
  size_t sources = 3000;
  size_t seed_positives = 2350;
  size_t seed_negatives = 3000;
};

struct SynthCorpus {
  std::vector<LabeledSentence> seed;
  std::vector<Sentence> pool;
  TruthMap truth;  // every pool id
};

// Pool ids are ("pool-NNN", 0, i); seed ids use "seed-pos" / "seed-neg".
SynthCorpus generate_bootstrap_corpus(const SynthConfig& config);

struct ScaleConfig {
  uint64_t seed = 2081;
  size_t articles = 2081;             // dated after the default cut-off
  size_t sentences_per_article = 173;
  size_t sentences_per_paragraph = 8;
  size_t old_articles = 40;           // dated 2019 or earlier
  size_t undated_articles = 12;
};

struct ScaleStats {
  size_t files = 0;
  size_t sentences = 0;  // in the articles the default filter keeps
};

// Writes one CORD-19 style JSON document per article under dir.
ScaleStats write_scale_corpus(const std::string& dir, const ScaleConfig& config);

}  // namespace radmine

#endif  // RADMINE_SYNTH_H_
