#include "radmine/annotator.h"

#include "radmine/event_log.h"
#include "radmine/hash.h"
#include "radmine/rng.h"

namespace radmine {

SimulatedAnnotator::SimulatedAnnotator(TruthMap truth, double noise, uint64_t seed,
                                       std::string annotator_id)
    : truth_(std::move(truth)),
      noise_(noise),
      seed_(seed),
      annotator_id_(std::move(annotator_id)) {
  if (!(noise >= 0.0 && noise <= 1.0)) {
    throw std::invalid_argument("annotator noise must be in [0, 1]");
  }
}

bool SimulatedAnnotator::flips(const SentenceId& id) const {
  uint64_t h = mix64(seed_ ^ fnv1a64(id.str()));
  return static_cast<double>(h >> 11) * 0x1.0p-53 < noise_;
}

Label SimulatedAnnotator::label(const SentenceId& id) const {
  auto it = truth_.find(id);
  if (it == truth_.end()) throw MissingLabelError(id);
  Label l = it->second;
  if (flips(id)) l = l == Label::kPositive ? Label::kNegative : Label::kPositive;
  return l;
}

AnnotationRecord SimulatedAnnotator::annotate(const SentenceId& id) const {
  return {id, label(id), annotator_id_, ""};
}

size_t run_simulated_round(BootstrapState& state, const BootstrapConfig& config,
                           const SimulatedAnnotator& annotator) {
  size_t n = 0;
  while (state.round) {
    if (state.round->queue.empty()) {
      close_round(state, config);
      break;
    }
    const auto& head = state.round->ranking[state.round->queue.front()].sentence_id;
    submit_label(state, config, annotator.annotate(head), true);
    ++n;
  }
  return n;
}

size_t run_simulated_round(BootstrapSession& session,
                           const SimulatedAnnotator& annotator) {
  size_t n = 0;
  QueueView view = session.queue();
  uint32_t t = view.iteration;
  while (view.round_open && view.iteration == t) {
    if (view.items.empty()) {
      session.close();
      break;
    }
    session.submit(annotator.annotate(view.items.front().sentence_id));
    ++n;
    view = session.queue();
  }
  return n;
}

}  // namespace radmine
