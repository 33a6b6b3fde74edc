// Model file layout, version 1. All integers little-endian; every real is an
// IEEE-754 binary64 stored by its bit pattern as a u64.
//
//   offset  size  field
//   0       8     magic "RDMMODEL"
//   8       4     u32 format version (1)
//   12      8     u64 feature-config content hash
//   20      4     u32 feature dimension
//   24      8     u64 feature hash seed
//   32      1     u8  families: bit0 unigrams, bit1 bigrams, bit2 char n-grams
//   33      1     u8  char n-gram min
//   34      1     u8  char n-gram max
//   35      1     u8  reserved (0)
//   36      8     f64 bias
//   44      8     u64 training examples seen (trained_on)
//   52      8     u64 training seed
//   60      8     f64 learning rate
//   68      4     u32 batch size
//   72      4     u32 epochs
//   76      1     u8  class weighting
//   77      3     reserved (0)
//   80      8     u64 validation example count
//   88      8     f64 validation accuracy
//   96      8     f64 validation precision
//   104     8     f64 validation recall
//   112     8     u64 number of non-zero weights N
//   120     12*N  N x (u32 index, f64 weight), indices strictly ascending
//   ...     8     u64 FNV-1a 64 checksum of every preceding byte
//
// Adam's beta1/beta2/epsilon are fixed at 0.9/0.999/1e-8 and not stored.

#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "radmine/classifier.h"
#include "radmine/hash.h"
#include "radmine/text_util.h"

namespace radmine {

namespace {

constexpr char kMagic[8] = {'R', 'D', 'M', 'M', 'O', 'D', 'E', 'L'};
constexpr uint32_t kFormatVersion = 1;
constexpr size_t kHeaderSize = 120;

class Writer {
 public:
  void bytes(const void* p, size_t n) {
    out_.append(static_cast<const char*>(p), n);
  }
  void u8(uint8_t v) { out_ += static_cast<char>(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void zeros(size_t n) { out_.append(n, '\0'); }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  void need(size_t n) {
    if (pos_ + n > in_.size()) throw ModelFormatError("model file truncated");
  }
  uint8_t u8() {
    need(1);
    return static_cast<uint8_t>(in_[pos_++]);
  }
  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(u8()) << (8 * i);
    return v;
  }
  uint64_t u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void skip(size_t n) {
    need(n);
    pos_ += n;
  }
  size_t pos() const { return pos_; }

 private:
  std::string_view in_;
  size_t pos_ = 0;
};

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw ModelFormatError(std::string("non-finite ") + what);
  return v;
}

}  // namespace

std::string serialize_model(const ClassifierModel& model) {
  const FeatureConfig& fc = model.features();
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.u32(kFormatVersion);
  w.u64(fc.content_hash());
  w.u32(fc.dimension);
  w.u64(fc.hash_seed);
  w.u8((fc.word_unigrams ? 1 : 0) | (fc.word_bigrams ? 2 : 0) | (fc.char_ngrams ? 4 : 0));
  w.u8(fc.char_min);
  w.u8(fc.char_max);
  w.zeros(1);
  w.f64(model.bias());
  w.u64(model.trained_on());
  w.u64(model.train_seed);
  w.f64(model.hyper.learning_rate);
  w.u32(model.hyper.batch_size);
  w.u32(model.hyper.epochs);
  w.u8(model.hyper.class_weighting ? 1 : 0);
  w.zeros(3);
  w.u64(model.validation.count);
  w.f64(model.validation.accuracy);
  w.f64(model.validation.precision);
  w.f64(model.validation.recall);
  auto weights = model.nonzero_weights();
  w.u64(weights.size());
  for (const auto& [index, value] : weights) {
    w.u32(index);
    w.f64(value);
  }
  w.u64(fnv1a64(w.str()));
  return std::move(w.str());
}

ClassifierModel deserialize_model(std::string_view bytes) {
  if (bytes.size() < kHeaderSize + 8) throw ModelFormatError("model file truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ModelFormatError("not a model file (bad magic)");
  }
  std::string_view body = bytes.substr(0, bytes.size() - 8);
  Reader tail(bytes.substr(bytes.size() - 8));
  if (tail.u64() != fnv1a64(body)) throw ModelFormatError("model checksum mismatch");

  Reader r(body);
  r.skip(sizeof(kMagic));
  uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw ModelFormatError("unsupported model format version " + std::to_string(version));
  }
  uint64_t stored_hash = r.u64();
  FeatureConfig fc;
  fc.dimension = r.u32();
  fc.hash_seed = r.u64();
  uint8_t families = r.u8();
  fc.word_unigrams = families & 1;
  fc.word_bigrams = families & 2;
  fc.char_ngrams = families & 4;
  fc.char_min = r.u8();
  fc.char_max = r.u8();
  r.skip(1);
  try {
    fc.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("invalid feature config: ") + e.what());
  }
  if (fc.content_hash() != stored_hash) {
    throw ModelFormatError("feature config hash mismatch");
  }

  ModelBuilder builder(fc);
  builder.set_bias(finite_or_throw(r.f64(), "bias"));
  builder.set_trained_on(r.u64());
  ClassifierModel& m = builder.model();
  m.train_seed = r.u64();
  m.hyper.learning_rate = r.f64();
  m.hyper.batch_size = r.u32();
  m.hyper.epochs = r.u32();
  m.hyper.class_weighting = r.u8() != 0;
  r.skip(3);
  m.validation.count = r.u64();
  m.validation.accuracy = r.f64();
  m.validation.precision = r.f64();
  m.validation.recall = r.f64();
  uint64_t n = r.u64();
  if (n > fc.dimension) throw ModelFormatError("more weights than dimensions");
  int64_t last = -1;
  for (uint64_t i = 0; i < n; ++i) {
    uint32_t index = r.u32();
    double value = finite_or_throw(r.f64(), "weight");
    if (static_cast<int64_t>(index) <= last) {
      throw ModelFormatError("weight indices not strictly ascending");
    }
    last = index;
    builder.set_weight(index, value);
  }
  if (r.pos() != body.size()) throw ModelFormatError("trailing bytes in model file");
  return std::move(builder).build();
}

std::string model_hash(const ClassifierModel& model) {
  return hex64(fnv1a64(serialize_model(model)));
}

std::string export_model_text(const ClassifierModel& model) {
  std::ostringstream out;
  out.precision(17);
  const FeatureConfig& fc = model.features();
  out << "# radmine model (format " << kFormatVersion << ")\n"
      << "features\t" << fc.describe() << "\n"
      << "feature_hash\t" << hex64(fc.content_hash()) << "\n"
      << "bias\t" << model.bias() << "\n"
      << "trained_on\t" << model.trained_on() << "\n"
      << "train_seed\t" << model.train_seed << "\n"
      << "learning_rate\t" << model.hyper.learning_rate << "\n"
      << "batch_size\t" << model.hyper.batch_size << "\n"
      << "epochs\t" << model.hyper.epochs << "\n"
      << "class_weighting\t" << (model.hyper.class_weighting ? 1 : 0) << "\n"
      << "validation_count\t" << model.validation.count << "\n"
      << "validation_accuracy\t" << model.validation.accuracy << "\n"
      << "validation_precision\t" << model.validation.precision << "\n"
      << "validation_recall\t" << model.validation.recall << "\n"
      << "model_hash\t" << model_hash(model) << "\n";
  auto weights = model.nonzero_weights();
  out << "weights\t" << weights.size() << "\n";
  for (const auto& [index, value] : weights) out << index << "\t" << value << "\n";
  return out.str();
}

void save_model(const ClassifierModel& model, const std::string& path) {
  write_file_atomic(path, serialize_model(model));
}

ClassifierModel load_model(const std::string& path) {
  return deserialize_model(read_file(path));
}

}  // namespace radmine
