#include "radmine/classifier.h"

#include <algorithm>
#include <cmath>

#include "radmine/rng.h"

namespace radmine {

std::string_view label_name(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "positive" || text == "pos" || text == "1") return Label::kPositive;
  if (text == "negative" || text == "neg" || text == "0") return Label::kNegative;
  return std::nullopt;
}

LabeledSentence LabeledSentence::seed(SentenceId id, std::string text,
                                      Label label) {
  return {std::move(id), std::move(text), label,
          label == Label::kPositive ? LabelSource::kSeedPositive
                                    : LabelSource::kSeedNegative,
          0};
}

ClassifierModel::ClassifierModel(FeatureConfig config)
    : config_(config), weights_(config.dimension, 0.0) {
  config_.validate();
}

double ClassifierModel::margin(const SparseVector& x) const {
  double z = bias_;
  for (size_t i = 0; i < x.size(); ++i) z += weights_[x.indices[i]] * x.values[i];
  return z;
}

double ClassifierModel::score(const SparseVector& x) const {
  return sigmoid(margin(x));
}

double ClassifierModel::score(std::string_view text) const {
  return score(featurize(text, config_));
}

std::vector<std::pair<uint32_t, double>> ClassifierModel::nonzero_weights() const {
  std::vector<std::pair<uint32_t, double>> out;
  for (uint32_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) out.emplace_back(i, weights_[i]);
  }
  return out;
}

void ModelBuilder::set_weight(uint32_t index, double w) {
  if (index >= model_.weights_.size()) {
    throw ModelFormatError("weight index " + std::to_string(index) +
                           " outside dimension " +
                           std::to_string(model_.weights_.size()));
  }
  model_.weights_[index] = w;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) - y * z without overflow.
double example_loss(double z, double y) {
  double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return softplus - y * z;
}

double dot(std::span<const double> w, const SparseVector& x) {
  double z = 0.0;
  for (size_t i = 0; i < x.size(); ++i) z += w[x.indices[i]] * x.values[i];
  return z;
}

ValidationMetrics evaluate(const ClassifierModel& model,
                           std::span<const Example> examples, double threshold) {
  ValidationMetrics m;
  m.count = examples.size();
  if (examples.empty()) return m;
  uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const Example& e : examples) {
    bool predicted = model.score(e.x) >= threshold;
    bool actual = e.y > 0.5;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  m.accuracy = static_cast<double>(tp + tn) / examples.size();
  m.precision = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
  return m;
}

}  // namespace

double logistic_loss(std::span<const double> w, double b,
                     std::span<const Example> batch) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const Example& e : batch) total += e.weight * example_loss(dot(w, e.x) + b, e.y);
  return total / batch.size();
}

void logistic_gradient(std::span<const double> w, double b,
                       std::span<const Example> batch, std::span<double> grad_w,
                       double* grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  *grad_b = 0.0;
  if (batch.empty()) return;
  double scale = 1.0 / batch.size();
  for (const Example& e : batch) {
    double r = e.weight * (sigmoid(dot(w, e.x) + b) - e.y) * scale;
    for (size_t i = 0; i < e.x.size(); ++i) grad_w[e.x.indices[i]] += r * e.x.values[i];
    *grad_b += r;
  }
}

std::vector<size_t> split_permutation(size_t n, uint64_t seed) {
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<size_t>(perm));
  return perm;
}

size_t train_count_for(size_t n, double split_ratio) {
  if (n < 2) return n;
  long long k = std::llround(static_cast<double>(n) * split_ratio);
  return static_cast<size_t>(std::clamp<long long>(k, 1, static_cast<long long>(n) - 1));
}

TrainResult train(std::span<const LabeledSentence> data,
                  const TrainOptions& options) {
  options.features.validate();
  if (!(options.split_ratio > 0.0 && options.split_ratio < 1.0)) {
    throw std::invalid_argument("split_ratio must lie strictly between 0 and 1");
  }
  const Hyperparameters& hp = options.hyper;
  if (hp.batch_size == 0 || hp.epochs == 0 || !(hp.learning_rate > 0.0)) {
    throw std::invalid_argument("batch_size, epochs and learning_rate must be positive");
  }
  size_t positives = std::count_if(data.begin(), data.end(), [](const auto& s) {
    return s.label == Label::kPositive;
  });
  if (positives == 0 || positives == data.size()) {
    throw std::invalid_argument("training data must contain both classes (" +
                                std::to_string(positives) + " positive of " +
                                std::to_string(data.size()) + ")");
  }

  std::vector<size_t> perm = split_permutation(data.size(), options.seed);
  size_t n_train = train_count_for(data.size(), options.split_ratio);

  std::vector<Example> train_set, validation_set;
  train_set.reserve(n_train);
  for (size_t k = 0; k < perm.size(); ++k) {
    const LabeledSentence& s = data[perm[k]];
    Example e{featurize(s.text, options.features),
              s.label == Label::kPositive ? 1.0 : 0.0, 1.0};
    (k < n_train ? train_set : validation_set).push_back(std::move(e));
  }

  if (hp.class_weighting) {
    double n_pos = 0;
    for (const auto& e : train_set) n_pos += e.y;
    double n_neg = train_set.size() - n_pos;
    double n = train_set.size();
    for (auto& e : train_set) {
      double count = e.y > 0.5 ? n_pos : n_neg;
      e.weight = count > 0 ? n / (2.0 * count) : 1.0;
    }
  }

  // Features never seen in training keep zero moments and receive no
  // update, so Adam only needs to sweep this set.
  std::vector<uint32_t> active;
  for (const auto& e : train_set) {
    active.insert(active.end(), e.x.indices.begin(), e.x.indices.end());
  }
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());

  const uint32_t dim = options.features.dimension;
  std::vector<double> w(dim, 0.0), m(dim, 0.0), v(dim, 0.0), grad(dim, 0.0);
  double b = 0.0, mb = 0.0, vb = 0.0;

  Rng order_rng(mix64(options.seed ^ 0x6f72646572ULL));
  std::vector<size_t> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  uint64_t step = 0;
  double b1_pow = 1.0, b2_pow = 1.0;
  for (uint32_t epoch = 0; epoch < hp.epochs; ++epoch) {
    order_rng.shuffle(std::span<size_t>(order));
    for (size_t start = 0; start < order.size(); start += hp.batch_size) {
      size_t stop = std::min(order.size(), start + hp.batch_size);
      double scale = 1.0 / static_cast<double>(stop - start);
      double loss = 0.0, gb = 0.0;
      for (size_t k = start; k < stop; ++k) {
        const Example& e = train_set[order[k]];
        double z = dot(w, e.x) + b;
        loss += e.weight * example_loss(z, e.y);
        double r = e.weight * (sigmoid(z) - e.y) * scale;
        for (size_t i = 0; i < e.x.size(); ++i) grad[e.x.indices[i]] += r * e.x.values[i];
        gb += r;
      }
      loss *= scale;
      ++step;
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite training loss at epoch " +
                            std::to_string(epoch + 1) + ", step " +
                            std::to_string(step) + " (loss=" +
                            std::to_string(loss) + ", lr=" +
                            std::to_string(hp.learning_rate) + ")");
      }
      b1_pow *= hp.beta1;
      b2_pow *= hp.beta2;
      double c1 = 1.0 / (1.0 - b1_pow);
      double c2 = 1.0 / (1.0 - b2_pow);
      auto adam = [&](double g, double* param, double* mom, double* vel) {
        *mom = hp.beta1 * *mom + (1.0 - hp.beta1) * g;
        *vel = hp.beta2 * *vel + (1.0 - hp.beta2) * g * g;
        *param -= hp.learning_rate * (*mom * c1) / (std::sqrt(*vel * c2) + hp.epsilon);
      };
      for (uint32_t d : active) {
        adam(grad[d], &w[d], &m[d], &v[d]);
        grad[d] = 0.0;
      }
      adam(gb, &b, &mb, &vb);
    }
  }

  for (uint32_t d : active) {
    if (!std::isfinite(w[d])) {
      throw TrainingError("non-finite weight at feature " + std::to_string(d));
    }
  }

  ModelBuilder builder(options.features);
  builder.weights() = std::move(w);
  builder.set_bias(b);
  builder.set_trained_on(train_set.size());
  ClassifierModel& model = builder.model();
  model.train_seed = options.seed;
  model.hyper = hp;
  model.validation = evaluate(model, validation_set, options.threshold);

  TrainResult result{std::move(builder).build(), {}, train_set.size()};
  result.validation = result.model.validation;
  return result;
}

std::vector<Prediction> score(const ClassifierModel& model,
                              std::span<const Sentence> sentences) {
  std::vector<Prediction> out;
  out.reserve(sentences.size());
  for (const Sentence& s : sentences) out.push_back(predict(model, s.id, s.text));
  return out;
}

Prediction predict(const ClassifierModel& model, const SentenceId& id,
                   std::string_view text) {
  double m = model.margin(featurize(text, model.features()));
  return {id, sigmoid(m), m};
}

bool prediction_rank_less(const Prediction& a, const Prediction& b) {
  if (a.margin != b.margin) return a.margin > b.margin;
  if (a.score != b.score) return a.score > b.score;
  return a.sentence_id < b.sentence_id;
}

std::vector<Prediction> rank_descending(std::vector<Prediction> preds) {
  for (const auto& p : preds) {
    if (!std::isfinite(p.score) || !std::isfinite(p.margin)) {
      throw std::invalid_argument("non-finite score for " + p.sentence_id.str());
    }
  }
  std::sort(preds.begin(), preds.end(), prediction_rank_less);
  return preds;
}

double precision_at_k(std::span<const Prediction> ranked, const TruthMap& truth,
                      size_t k) {
  if (k == 0 || k > ranked.size()) {
    throw std::invalid_argument("precision_at_k: k=" + std::to_string(k) +
                                " outside [1, " + std::to_string(ranked.size()) + "]");
  }
  size_t hits = 0;
  for (size_t i = 0; i < k; ++i) {
    auto it = truth.find(ranked[i].sentence_id);
    if (it == truth.end()) throw MissingLabelError(ranked[i].sentence_id);
    if (it->second == Label::kPositive) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace radmine
