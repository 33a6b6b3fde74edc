#include "radmine/bootstrap.h"

#include <algorithm>

#include "radmine/hash.h"

namespace radmine {

void BootstrapConfig::validate() const {
  if (queue_size < 1) throw std::invalid_argument("queue_size must be >= 1");
  if (fp_quota < 1) throw std::invalid_argument("fp_quota must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  retrain.features.validate();
}

double recompute_precision(const IterationRecord& record) {
  std::map<SentenceId, Label> labels;
  for (const auto& r : record.labels) labels[r.sentence_id] = r.label;
  size_t labeled = 0, positives = 0;
  for (size_t i = 0; i < record.k && i < record.top_k.size(); ++i) {
    auto it = labels.find(record.top_k[i].sentence_id);
    if (it == labels.end()) continue;
    ++labeled;
    if (it->second == Label::kPositive) ++positives;
  }
  return labeled ? static_cast<double>(positives) / labeled : 0.0;
}

std::vector<QueueItem> BootstrapState::queue_items() const {
  std::vector<QueueItem> items;
  if (!round) return items;
  for (size_t idx : round->queue) {
    const Prediction& p = round->ranking[idx];
    items.push_back({p.sentence_id, pool.at(p.sentence_id), p.score});
  }
  return items;
}

BootstrapState init_state(std::vector<LabeledSentence> seed,
                          std::span<const Sentence> pool,
                          const BootstrapConfig& config) {
  config.validate();
  std::set<SentenceId> seed_ids;
  for (const auto& s : seed) seed_ids.insert(s.id);
  std::vector<SentenceId> overlap;
  BootstrapState state;
  for (const auto& s : pool) {
    if (seed_ids.contains(s.id)) overlap.push_back(s.id);
    state.pool.emplace(s.id, s.text);
  }
  if (!overlap.empty()) {
    std::string msg = "pool overlaps the seed set:";
    for (size_t i = 0; i < overlap.size() && i < 10; ++i) msg += " " + overlap[i].str();
    if (overlap.size() > 10) msg += " ...";
    throw BootstrapError(BootstrapError::Kind::kPoolOverlap, msg, std::move(overlap));
  }
  state.model = train(seed, config.retrain).model;
  state.training_set = std::move(seed);
  return state;
}

std::vector<QueueItem> open_annotation_round(BootstrapState& state,
                                             const BootstrapConfig& config) {
  using Kind = BootstrapError::Kind;
  if (state.round) throw BootstrapError(Kind::kRoundOpen, "a round is already open");
  if (state.iteration >= config.max_iterations) {
    throw BootstrapError(Kind::kIterationLimit,
                         "all " + std::to_string(config.max_iterations) +
                             " bootstrap iterations are complete");
  }
  if (state.pool.empty()) throw BootstrapError(Kind::kEmptyPool, "the pool is empty");

  std::vector<Prediction> preds;
  preds.reserve(state.pool.size());
  for (const auto& [id, text] : state.pool) preds.push_back(predict(state.model, id, text));

  OpenRound round;
  round.ranking = rank_descending(std::move(preds));
  round.k = std::min(config.queue_size, round.ranking.size());
  for (size_t i = 0; i < round.k; ++i) round.queue.push_back(i);
  round.next_rank = round.k;
  state.round = std::move(round);
  return state.queue_items();
}

SubmitAck submit_label(BootstrapState& state, const BootstrapConfig& config,
                       const AnnotationRecord& record, bool auto_close) {
  using Kind = BootstrapError::Kind;
  if (!state.round) throw BootstrapError(Kind::kNoRound, "no annotation round is open");
  OpenRound& round = *state.round;
  const SentenceId& id = record.sentence_id;
  if (round.labeled.contains(id)) {
    throw BootstrapError(Kind::kDuplicateLabel,
                         "sentence " + id.str() + " was already labeled this iteration",
                         {id});
  }
  auto pos = std::find_if(round.queue.begin(), round.queue.end(), [&](size_t idx) {
    return round.ranking[idx].sentence_id == id;
  });
  if (pos == round.queue.end()) {
    throw BootstrapError(Kind::kNotOnQueue,
                         "sentence " + id.str() + " is not on the annotation queue",
                         {id});
  }
  round.queue.erase(pos);
  round.labels.push_back(record);
  round.labeled.insert(id);
  if (record.label == Label::kNegative) ++round.negatives;
  while (round.queue.size() < config.queue_size &&
         round.next_rank < round.ranking.size()) {
    round.queue.push_back(round.next_rank++);
  }

  SubmitAck ack;
  ack.sentence_id = id;
  ack.fp_collected = round.negatives;
  ack.fp_quota = config.fp_quota;
  ack.queue_size = round.queue.size();
  ack.quota_met = round.negatives >= config.fp_quota;
  if (auto_close && ack.quota_met) {
    close_round(state, config);
    ack.round_closed = true;
    ack.queue_size = 0;
  }
  return ack;
}

bool round_closable(const BootstrapState& state, const BootstrapConfig& config) {
  return state.round &&
         (state.round->negatives >= config.fp_quota || state.round->queue.empty());
}

void close_round(BootstrapState& state, const BootstrapConfig& config) {
  using Kind = BootstrapError::Kind;
  if (!state.round) throw BootstrapError(Kind::kNoRound, "no annotation round is open");
  if (!round_closable(state, config)) {
    size_t remaining = config.fp_quota - state.round->negatives;
    throw BootstrapError(Kind::kQuotaUnmet,
                         std::to_string(remaining) +
                             " more negative labels needed before the round can close",
                         {}, remaining);
  }
  OpenRound round = std::move(*state.round);
  state.round.reset();

  IterationRecord rec;
  rec.iteration = state.iteration;
  rec.k = round.k;
  rec.top_k.assign(round.ranking.begin(), round.ranking.begin() + round.k);
  rec.labels = round.labels;
  rec.model_hash = model_hash(state.model);
  for (const auto& r : round.labels) {
    (r.label == Label::kPositive ? rec.positives : rec.negatives) += 1;
  }
  std::set<SentenceId> labeled(round.labeled);
  rec.k_labeled = std::count_if(rec.top_k.begin(), rec.top_k.end(), [&](const auto& p) {
    return labeled.contains(p.sentence_id);
  });
  rec.precision_at_k = recompute_precision(rec);

  uint32_t next = state.iteration + 1;
  for (const auto& r : round.labels) {
    auto it = state.pool.find(r.sentence_id);
    state.training_set.push_back(
        {r.sentence_id, it->second, r.label, LabelSource::kBootstrap, next});
    state.pool.erase(it);
  }
  state.model = train(state.training_set, config.retrain).model;
  state.iteration = next;
  state.history.push_back(std::move(rec));
}

std::string_view bootstrap_error_code(BootstrapError::Kind kind) {
  switch (kind) {
    case BootstrapError::Kind::kPoolOverlap: return "pool_overlap";
    case BootstrapError::Kind::kEmptyPool: return "empty_pool";
    case BootstrapError::Kind::kRoundOpen: return "round_open";
    case BootstrapError::Kind::kNoRound: return "no_open_round";
    case BootstrapError::Kind::kNotOnQueue: return "not_on_queue";
    case BootstrapError::Kind::kDuplicateLabel: return "duplicate_label";
    case BootstrapError::Kind::kQuotaUnmet: return "quota_unmet";
    case BootstrapError::Kind::kIterationLimit: return "iteration_limit";
  }
  return "bootstrap_error";
}

std::string state_digest(const BootstrapState& state) {
  std::string buf = "t=" + std::to_string(state.iteration) +
                    ";model=" + model_hash(state.model) + ";train=";
  for (const auto& s : state.training_set) {
    buf += s.id.str() + "/" + std::string(label_name(s.label)) + "/" +
           std::to_string(static_cast<int>(s.source)) + "/" +
           std::to_string(s.iteration) + ",";
  }
  uint64_t h = fnv1a64(buf);
  for (const auto& [id, text] : state.pool) {
    h = fnv1a64(id.str(), h);
    h = fnv1a64(text, h);
  }
  buf = ";queue=";
  for (const auto& item : state.queue_items()) buf += item.sentence_id.str() + ",";
  if (state.round) {
    buf += ";labels=";
    for (const auto& r : state.round->labels) {
      buf += r.sentence_id.str() + "/" + std::string(label_name(r.label)) + ",";
    }
  }
  buf += ";history=";
  for (const auto& rec : state.history) {
    buf += std::to_string(rec.iteration) + "/" + std::to_string(rec.precision_at_k) +
           "/" + rec.model_hash + ",";
  }
  return hex64(fnv1a64(buf, h));
}

}  // namespace radmine
