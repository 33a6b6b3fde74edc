#include "radmine/json_io.h"

#include <chrono>
#include <ctime>

namespace radmine {

namespace {

template <typename T>
void get_if(const Json& j, const char* key, T* out) {
  if (auto it = j.find(key); it != j.end()) *out = it->template get<T>();
}

SentenceId id_from(const Json& j) {
  if (!j.is_string()) throw std::invalid_argument("sentence_id must be a string");
  auto id = SentenceId::parse(j.get<std::string>());
  if (!id) throw std::invalid_argument("malformed sentence_id '" + j.get<std::string>() + "'");
  return *id;
}

}  // namespace

Json to_json(const FeatureConfig& c) {
  return {{"dimension", c.dimension},       {"hash_seed", c.hash_seed},
          {"word_unigrams", c.word_unigrams}, {"word_bigrams", c.word_bigrams},
          {"char_ngrams", c.char_ngrams},   {"char_min", c.char_min},
          {"char_max", c.char_max}};
}

Json to_json(const Hyperparameters& h) {
  return {{"learning_rate", h.learning_rate}, {"batch_size", h.batch_size},
          {"epochs", h.epochs},               {"beta1", h.beta1},
          {"beta2", h.beta2},                 {"epsilon", h.epsilon},
          {"class_weighting", h.class_weighting}};
}

Json to_json(const TrainOptions& o) {
  return {{"split_ratio", o.split_ratio}, {"seed", o.seed},
          {"features", to_json(o.features)}, {"hyper", to_json(o.hyper)},
          {"threshold", o.threshold}};
}

Json to_json(const BootstrapConfig& c) {
  return {{"queue_size", c.queue_size}, {"fp_quota", c.fp_quota},
          {"max_iterations", c.max_iterations}, {"retrain", to_json(c.retrain)}};
}

Json to_json(const ValidationMetrics& m) {
  return {{"count", m.count}, {"accuracy", m.accuracy},
          {"precision", m.precision}, {"recall", m.recall}};
}

Json to_json(const AnnotationRecord& r) {
  return {{"sentence_id", r.sentence_id.str()}, {"label", label_name(r.label)},
          {"annotator_id", r.annotator_id}, {"timestamp", r.timestamp}};
}

Json to_json(const IterationRecord& r, bool with_details) {
  Json j = {{"iteration", r.iteration},   {"k", r.k},
            {"k_labeled", r.k_labeled},   {"precision_at_k", r.precision_at_k},
            {"positives", r.positives},   {"negatives", r.negatives},
            {"labels_collected", r.positives + r.negatives},
            {"model_hash", r.model_hash}};
  if (with_details) {
    Json top = Json::array();
    for (const auto& p : r.top_k) top.push_back({p.sentence_id.str(), p.score, p.margin});
    Json labels = Json::array();
    for (const auto& a : r.labels) labels.push_back(to_json(a));
    j["top_k"] = std::move(top);
    j["labels"] = std::move(labels);
  }
  return j;
}

Json to_json(const QueueItem& item) {
  return {{"sentence_id", item.sentence_id.str()}, {"text", item.text},
          {"score", item.score}};
}

Json to_json(const SubmitAck& ack) {
  return {{"sentence_id", ack.sentence_id.str()}, {"fp_collected", ack.fp_collected},
          {"fp_quota", ack.fp_quota},             {"queue_size", ack.queue_size},
          {"quota_met", ack.quota_met},           {"round_closed", ack.round_closed}};
}

void merge_json(const Json& j, FeatureConfig* c) {
  get_if(j, "dimension", &c->dimension);
  get_if(j, "hash_seed", &c->hash_seed);
  get_if(j, "word_unigrams", &c->word_unigrams);
  get_if(j, "word_bigrams", &c->word_bigrams);
  get_if(j, "char_ngrams", &c->char_ngrams);
  get_if(j, "char_min", &c->char_min);
  get_if(j, "char_max", &c->char_max);
}

void merge_json(const Json& j, Hyperparameters* h) {
  get_if(j, "learning_rate", &h->learning_rate);
  get_if(j, "batch_size", &h->batch_size);
  get_if(j, "epochs", &h->epochs);
  get_if(j, "beta1", &h->beta1);
  get_if(j, "beta2", &h->beta2);
  get_if(j, "epsilon", &h->epsilon);
  get_if(j, "class_weighting", &h->class_weighting);
}

void merge_json(const Json& j, TrainOptions* o) {
  get_if(j, "split_ratio", &o->split_ratio);
  get_if(j, "seed", &o->seed);
  get_if(j, "threshold", &o->threshold);
  if (auto it = j.find("features"); it != j.end()) merge_json(*it, &o->features);
  if (auto it = j.find("hyper"); it != j.end()) merge_json(*it, &o->hyper);
}

void merge_json(const Json& j, BootstrapConfig* c) {
  get_if(j, "queue_size", &c->queue_size);
  get_if(j, "fp_quota", &c->fp_quota);
  get_if(j, "max_iterations", &c->max_iterations);
  if (auto it = j.find("retrain"); it != j.end()) merge_json(*it, &c->retrain);
}

AnnotationRecord annotation_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("annotation must be a JSON object");
  AnnotationRecord r;
  auto id = j.find("sentence_id");
  if (id == j.end()) throw std::invalid_argument("missing field sentence_id");
  r.sentence_id = id_from(*id);
  auto label = j.find("label");
  if (label == j.end() || !label->is_string()) {
    throw std::invalid_argument("missing string field label");
  }
  auto parsed = parse_label(label->get<std::string>());
  if (!parsed) {
    throw std::invalid_argument("label must be 'positive' or 'negative'");
  }
  r.label = *parsed;
  if (auto a = j.find("annotator_id"); a != j.end()) {
    if (!a->is_string()) throw std::invalid_argument("annotator_id must be a string");
    r.annotator_id = a->get<std::string>();
  }
  if (auto t = j.find("timestamp"); t != j.end()) {
    if (!t->is_string()) throw std::invalid_argument("timestamp must be a string");
    r.timestamp = t->get<std::string>();
  }
  return r;
}

IterationRecord iteration_from_json(const Json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<uint32_t>();
  r.k = j.at("k").get<size_t>();
  r.k_labeled = j.at("k_labeled").get<size_t>();
  r.precision_at_k = j.at("precision_at_k").get<double>();
  r.positives = j.at("positives").get<size_t>();
  r.negatives = j.at("negatives").get<size_t>();
  r.model_hash = j.at("model_hash").get<std::string>();
  for (const auto& p : j.at("top_k")) {
    r.top_k.push_back({id_from(p.at(0)), p.at(1).get<double>(), p.at(2).get<double>()});
  }
  for (const auto& a : j.at("labels")) r.labels.push_back(annotation_from_json(a));
  return r;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace radmine
