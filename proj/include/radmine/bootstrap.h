#ifndef RADMINE_BOOTSTRAP_H_
#define RADMINE_BOOTSTRAP_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "radmine/classifier.h"
#include "radmine/corpus.h"

namespace radmine {

struct BootstrapConfig {
  size_t queue_size = 100;  // K: width of the annotation queue
  size_t fp_quota = 400;    // negatives that close a round
  uint32_t max_iterations = 4;
  TrainOptions retrain;

  void validate() const;  // throws std::invalid_argument
};

class BootstrapError : public std::runtime_error {
 public:
  enum class Kind {
    kPoolOverlap,      // pool shares ids with the seed set
    kEmptyPool,
    kRoundOpen,        // a round is already open
    kNoRound,          // no round is open
    kNotOnQueue,       // label for an id that is not being served
    kDuplicateLabel,   // id already labeled this iteration
    kQuotaUnmet,       // close before the quota is met
    kIterationLimit,   // max_iterations rounds already closed
  };

  BootstrapError(Kind kind, std::string message,
                 std::vector<SentenceId> ids = {}, size_t remaining = 0)
      : std::runtime_error(std::move(message)),
        kind_(kind),
        ids_(std::move(ids)),
        remaining_(remaining) {}

  Kind kind() const { return kind_; }
  const std::vector<SentenceId>& ids() const { return ids_; }
  size_t remaining() const { return remaining_; }

 private:
  Kind kind_;
  std::vector<SentenceId> ids_;
  size_t remaining_;
};

// Stable snake_case name for each kind ("not_on_queue", "quota_unmet", ...).
std::string_view bootstrap_error_code(BootstrapError::Kind kind);

struct AnnotationRecord {
  SentenceId sentence_id;
  Label label = Label::kNegative;
  std::string annotator_id;
  std::string timestamp;  // ISO-8601, informational
};

struct QueueItem {
  SentenceId sentence_id;
  std::string text;
  double score = 0.0;
};

// One closed round: the precision of the model that opened it, measured on
// that round's top-K predictions against the labels collected.
struct IterationRecord {
  uint32_t iteration = 0;       // t of the model C_t that was measured
  size_t k = 0;                 // min(K, pool size when the round opened)
  size_t k_labeled = 0;         // top-k entries that received a label
  double precision_at_k = 0.0;  // positives / k_labeled among the top k
  size_t positives = 0;         // labels collected this round, by polarity
  size_t negatives = 0;
  std::string model_hash;       // hash of C_t
  std::vector<Prediction> top_k;
  std::vector<AnnotationRecord> labels;
};

// Precision over the labeled part of `top_k`, as stored in history.
double recompute_precision(const IterationRecord& record);

struct OpenRound {
  std::vector<Prediction> ranking;  // whole pool, rank order
  size_t next_rank = 0;             // next ranking entry to consider for refill
  std::vector<size_t> queue;        // ranking indices, rank order
  std::vector<AnnotationRecord> labels;
  std::set<SentenceId> labeled;
  size_t negatives = 0;
  size_t k = 0;
};

struct BootstrapState {
  uint32_t iteration = 0;
  ClassifierModel model;
  std::vector<LabeledSentence> training_set;
  std::map<SentenceId, std::string> pool;  // unlabeled sentences
  std::optional<OpenRound> round;
  std::vector<IterationRecord> history;

  std::vector<QueueItem> queue_items() const;
  size_t fp_collected() const { return round ? round->negatives : 0; }
};

// t = 0 with C_0 trained on the seed set. Rejects pool/seed id overlap.
BootstrapState init_state(std::vector<LabeledSentence> seed,
                          std::span<const Sentence> pool,
                          const BootstrapConfig& config);

// Scores the pool with C_t and serves the top-K.
std::vector<QueueItem> open_annotation_round(BootstrapState& state,
                                             const BootstrapConfig& config);

struct SubmitAck {
  SentenceId sentence_id;
  size_t fp_collected = 0;
  size_t fp_quota = 0;
  size_t queue_size = 0;
  bool quota_met = false;
  bool round_closed = false;
};

// Records a label and refills the queue. With auto_close, reaching the
// quota closes the round before returning.
SubmitAck submit_label(BootstrapState& state, const BootstrapConfig& config,
                       const AnnotationRecord& record, bool auto_close = true);

// True when close_round would succeed.
bool round_closable(const BootstrapState& state, const BootstrapConfig& config);

// Folds the round's labels into the training set, retrains from scratch and
// advances t.
void close_round(BootstrapState& state, const BootstrapConfig& config);

// Canonical digest of everything replay must reproduce: t, model, training
// set, pool, open queue and collected labels.
std::string state_digest(const BootstrapState& state);

}  // namespace radmine

#endif  // RADMINE_BOOTSTRAP_H_
