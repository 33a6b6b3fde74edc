#ifndef RADMINE_ANNOTATOR_H_
#define RADMINE_ANNOTATOR_H_

#include <cstdint>
#include <string>

#include "radmine/bootstrap.h"
#include "radmine/classifier.h"

namespace radmine {

class BootstrapSession;

// Answers from a truth table. With noise p, the label for an id is flipped
// iff a hash of (seed, id) falls below p, so the same id always gets the
// same answer; p = 0 never flips and p = 1 always does.
class SimulatedAnnotator {
 public:
  explicit SimulatedAnnotator(TruthMap truth, double noise = 0.0, uint64_t seed = 0,
                              std::string annotator_id = "simulated");

  Label label(const SentenceId& id) const;  // MissingLabelError if unknown
  bool flips(const SentenceId& id) const;
  AnnotationRecord annotate(const SentenceId& id) const;

 private:
  TruthMap truth_;
  double noise_;
  uint64_t seed_;
  std::string annotator_id_;
};

// Labels the head of the queue until the open round closes. Returns the
// number of labels submitted.
size_t run_simulated_round(BootstrapState& state, const BootstrapConfig& config,
                           const SimulatedAnnotator& annotator);
size_t run_simulated_round(BootstrapSession& session,
                           const SimulatedAnnotator& annotator);

}  // namespace radmine

#endif  // RADMINE_ANNOTATOR_H_
