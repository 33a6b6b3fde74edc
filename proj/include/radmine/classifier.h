#ifndef RADMINE_CLASSIFIER_H_
#define RADMINE_CLASSIFIER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "radmine/corpus.h"
#include "radmine/features.h"

namespace radmine {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Label { kNegative = 0, kPositive = 1 };

std::string_view label_name(Label label);  // "negative" / "positive"
std::optional<Label> parse_label(std::string_view text);

enum class LabelSource { kSeedPositive, kSeedNegative, kBootstrap };

struct LabeledSentence {
  SentenceId id;
  std::string text;
  Label label = Label::kNegative;
  LabelSource source = LabelSource::kSeedNegative;
  uint32_t iteration = 0;  // >= 1 iff source == kBootstrap

  static LabeledSentence seed(SentenceId id, std::string text, Label label);
};

// Defaults are tuned for the hashed linear model. The BERT fine-tuning
// settings this pipeline was first run with (learning rate 2e-5, mini-batch
// 4) do not transfer to a linear model and are not used here.
struct Hyperparameters {
  double learning_rate = 0.05;
  uint32_t batch_size = 32;
  uint32_t epochs = 5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Inverse class-frequency example weights.
  bool class_weighting = false;
};

struct ValidationMetrics {
  uint64_t count = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct TrainOptions {
  double split_ratio = 0.9;  // fraction used for training, in (0, 1)
  uint64_t seed = 0;
  FeatureConfig features;
  Hyperparameters hyper;
  double threshold = 0.5;  // decision threshold for validation metrics
};

// Immutable after training. Weights are held densely; only the non-zero
// entries are serialized.
class ClassifierModel {
 public:
  ClassifierModel() : ClassifierModel(FeatureConfig{}) {}
  explicit ClassifierModel(FeatureConfig config);

  const FeatureConfig& features() const { return config_; }
  double bias() const { return bias_; }
  std::span<const double> weights() const { return weights_; }
  uint64_t trained_on() const { return trained_on_; }

  double margin(const SparseVector& x) const;
  double score(const SparseVector& x) const;
  double score(std::string_view text) const;

  std::vector<std::pair<uint32_t, double>> nonzero_weights() const;

  // Provenance written into the model file.
  uint64_t train_seed = 0;
  Hyperparameters hyper;
  ValidationMetrics validation;

 private:
  friend class ModelBuilder;
  FeatureConfig config_;
  double bias_ = 0.0;
  std::vector<double> weights_;
  uint64_t trained_on_ = 0;
};

// Mutable construction path used by training and deserialization.
class ModelBuilder {
 public:
  explicit ModelBuilder(FeatureConfig config) : model_(config) {}
  void set_bias(double b) { model_.bias_ = b; }
  void set_weight(uint32_t index, double w);
  void set_trained_on(uint64_t n) { model_.trained_on_ = n; }
  std::vector<double>& weights() { return model_.weights_; }
  ClassifierModel& model() { return model_; }
  ClassifierModel build() && { return std::move(model_); }

 private:
  ClassifierModel model_;
};

struct TrainResult {
  ClassifierModel model;
  ValidationMetrics validation;
  uint64_t train_count = 0;
};

// Deterministic shuffled split by seed, then mini-batch Adam on the mean
// logistic loss. Throws std::invalid_argument for single-class data or a bad
// split ratio and TrainingError if the loss becomes non-finite.
TrainResult train(std::span<const LabeledSentence> data,
                  const TrainOptions& options);

// Indices into `n` examples assigned to the training side of the split;
// the rest, in the returned permutation's tail, are validation.
std::vector<size_t> split_permutation(size_t n, uint64_t seed);
size_t train_count_for(size_t n, double split_ratio);

// Logistic loss and its analytic gradient over a dense weight vector, shared
// by training and the gradient check.
struct Example {
  SparseVector x;
  double y = 0.0;       // 0 or 1
  double weight = 1.0;  // per-example loss weight
};
double logistic_loss(std::span<const double> w, double b,
                     std::span<const Example> batch);
// Writes d(loss)/dw into grad_w (dense, same size as w) and d/db into grad_b.
void logistic_gradient(std::span<const double> w, double b,
                       std::span<const Example> batch, std::span<double> grad_w,
                       double* grad_b);

double sigmoid(double z);

// score = sigmoid(margin). Ranking uses the margin, which keeps its order
// where the sigmoid has saturated to 1.0.
struct Prediction {
  SentenceId sentence_id;
  double score = 0.0;
  double margin = 0.0;
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

Prediction predict(const ClassifierModel& model, const SentenceId& id,
                   std::string_view text);

// Order-preserving.
std::vector<Prediction> score(const ClassifierModel& model,
                              std::span<const Sentence> sentences);

// Margin descending, then score descending, then sentence id ascending.
bool prediction_rank_less(const Prediction& a, const Prediction& b);
std::vector<Prediction> rank_descending(std::vector<Prediction> preds);

class MissingLabelError : public std::out_of_range {
 public:
  explicit MissingLabelError(const SentenceId& id)
      : std::out_of_range("no truth label for sentence " + id.str()), id_(id) {}
  const SentenceId& id() const { return id_; }

 private:
  SentenceId id_;
};

using TruthMap = std::map<SentenceId, Label>;

// Fraction of positives among the first k entries of `ranked`.
double precision_at_k(std::span<const Prediction> ranked, const TruthMap& truth,
                      size_t k);

// Binary model file; see model_io.cc for the byte layout.
std::string serialize_model(const ClassifierModel& model);
ClassifierModel deserialize_model(std::string_view bytes);
std::string export_model_text(const ClassifierModel& model);
// Hex FNV-1a of the serialized bytes.
std::string model_hash(const ClassifierModel& model);

void save_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_model(const std::string& path);

}  // namespace radmine

#endif  // RADMINE_CLASSIFIER_H_
