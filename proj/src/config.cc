#include "radmine/config.h"

#include <initializer_list>

#include "radmine/text_util.h"

namespace radmine {

namespace {

void check_keys(const Json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void get_if(const Json& j, const char* key, T* out) {
  if (auto it = j.find(key); it != j.end()) *out = it->template get<T>();
}

}  // namespace

TrainOptions Config::train_options() const {
  TrainOptions o = classifier;
  o.seed = seed;
  return o;
}

BootstrapConfig Config::bootstrap_config() const {
  BootstrapConfig b = bootstrap;
  b.retrain = train_options();
  return b;
}

SynthConfig Config::synth_config() const {
  SynthConfig s = synth;
  s.seed = seed;
  return s;
}

Json Config::to_json() const {
  Json cls = radmine::to_json(classifier);
  cls.erase("seed");
  return {
      {"seed", seed},
      {"corpus",
       {{"min_date", corpus.filter.min_publish_date.str()},
        {"include_undated", corpus.filter.include_undated},
        {"threads", corpus.threads}}},
      {"classifier", cls},
      {"bootstrap",
       {{"queue_size", bootstrap.queue_size},
        {"fp_quota", bootstrap.fp_quota},
        {"max_iterations", bootstrap.max_iterations},
        {"auto_open", auto_open}}},
      {"extract", {{"threshold", extract_threshold}}},
      {"report", {{"min_freq", report_min_freq}}},
      {"service", {{"host", host}, {"port", port}}},
      {"synth",
       {{"pool_size", synth.pool_size},
        {"finding_rate", synth.finding_rate},
        {"distractor_rate", synth.distractor_rate},
        {"sources", synth.sources},
        {"seed_positives", synth.seed_positives},
        {"seed_negatives", synth.seed_negatives},
        {"noise", synth_noise}}},
  };
}

Config Config::from_json(const Json& j) {
  Config c;
  try {
    check_keys(j, "config", {"seed", "corpus", "classifier", "bootstrap", "extract",
                             "report", "service", "synth"});
    get_if(j, "seed", &c.seed);
    if (auto s = j.find("corpus"); s != j.end()) {
      check_keys(*s, "corpus", {"min_date", "include_undated", "threads"});
      if (auto d = s->find("min_date"); d != s->end()) {
        auto date = parse_date(d->get<std::string>());
        if (!date) throw ConfigError("corpus.min_date is not a date: " + d->dump());
        c.corpus.filter.min_publish_date = *date;
      }
      get_if(*s, "include_undated", &c.corpus.filter.include_undated);
      get_if(*s, "threads", &c.corpus.threads);
    }
    if (auto s = j.find("classifier"); s != j.end()) {
      check_keys(*s, "classifier", {"split_ratio", "threshold", "features", "hyper"});
      if (auto f = s->find("features"); f != s->end()) {
        check_keys(*f, "classifier.features",
                   {"dimension", "hash_seed", "word_unigrams", "word_bigrams",
                    "char_ngrams", "char_min", "char_max"});
      }
      if (auto h = s->find("hyper"); h != s->end()) {
        check_keys(*h, "classifier.hyper",
                   {"learning_rate", "batch_size", "epochs", "beta1", "beta2",
                    "epsilon", "class_weighting"});
      }
      merge_json(*s, &c.classifier);
    }
    if (auto s = j.find("bootstrap"); s != j.end()) {
      check_keys(*s, "bootstrap", {"queue_size", "fp_quota", "max_iterations", "auto_open"});
      get_if(*s, "queue_size", &c.bootstrap.queue_size);
      get_if(*s, "fp_quota", &c.bootstrap.fp_quota);
      get_if(*s, "max_iterations", &c.bootstrap.max_iterations);
      get_if(*s, "auto_open", &c.auto_open);
    }
    if (auto s = j.find("extract"); s != j.end()) {
      check_keys(*s, "extract", {"threshold"});
      get_if(*s, "threshold", &c.extract_threshold);
    }
    if (auto s = j.find("report"); s != j.end()) {
      check_keys(*s, "report", {"min_freq"});
      get_if(*s, "min_freq", &c.report_min_freq);
    }
    if (auto s = j.find("service"); s != j.end()) {
      check_keys(*s, "service", {"host", "port"});
      get_if(*s, "host", &c.host);
      get_if(*s, "port", &c.port);
    }
    if (auto s = j.find("synth"); s != j.end()) {
      check_keys(*s, "synth", {"pool_size", "finding_rate", "distractor_rate", "sources",
                               "seed_positives", "seed_negatives", "noise"});
      get_if(*s, "pool_size", &c.synth.pool_size);
      get_if(*s, "finding_rate", &c.synth.finding_rate);
      get_if(*s, "distractor_rate", &c.synth.distractor_rate);
      get_if(*s, "sources", &c.synth.sources);
      get_if(*s, "seed_positives", &c.synth.seed_positives);
      get_if(*s, "seed_negatives", &c.synth.seed_negatives);
      get_if(*s, "noise", &c.synth_noise);
    }
    c.classifier.features.validate();
    c.bootstrap_config().validate();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.synth_noise >= 0.0 && c.synth_noise <= 1.0)) {
    throw ConfigError("synth.noise must be in [0, 1]");
  }
  if (c.port < 0 || c.port > 65535) throw ConfigError("service.port out of range");
  return c;
}

Config Config::load(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot read config " + path + ": " + e.what());
  }
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config " + path + " is not valid JSON");
  return from_json(j);
}

}  // namespace radmine
