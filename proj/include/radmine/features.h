#ifndef RADMINE_FEATURES_H_
#define RADMINE_FEATURES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace radmine {

// Hashed n-gram feature definition. Its content hash is written into every
// model file so features and weights cannot drift apart.
struct FeatureConfig {
  uint32_t dimension = 1u << 18;  // power of two, >= 2^10
  uint64_t hash_seed = 0;
  bool word_unigrams = true;
  bool word_bigrams = true;
  bool char_ngrams = true;
  uint8_t char_min = 3;
  uint8_t char_max = 5;

  // Throws std::invalid_argument on an invalid combination.
  void validate() const;
  uint64_t content_hash() const;
  std::string describe() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Sorted, duplicate-free indices with term counts.
struct SparseVector {
  std::vector<uint32_t> indices;
  std::vector<double> values;

  size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  double value_at(uint32_t index) const;  // 0 when absent
  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Family tags prefixed to every n-gram before hashing.
inline constexpr std::string_view kUnigramTag = "u|";
inline constexpr std::string_view kBigramTag = "b|";
inline constexpr std::string_view kCharTag = "c|";

// Lowercased words: maximal runs of ASCII letters and digits, with single
// internal hyphens kept ("ground-glass", "covid-19").
std::vector<std::string> feature_words(std::string_view text);

// FNV-1a 64 of tag followed by the n-gram, seeded by xor into the offset
// basis, masked to the dimension.
uint32_t feature_index(std::string_view tag, std::string_view gram,
                       const FeatureConfig& config);

// Unigrams, bigrams joined by one space, and character n-grams within each
// word. Values are occurrence counts.
SparseVector featurize(std::string_view text, const FeatureConfig& config);

}  // namespace radmine

#endif  // RADMINE_FEATURES_H_
