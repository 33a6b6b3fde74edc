#include "radmine/features.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "radmine/hash.h"
#include "radmine/text_util.h"

namespace radmine {

void FeatureConfig::validate() const {
  if (!std::has_single_bit(dimension) || dimension < (1u << 10)) {
    throw std::invalid_argument("feature dimension must be a power of two >= 1024");
  }
  if (!word_unigrams && !word_bigrams && !char_ngrams) {
    throw std::invalid_argument("at least one feature family must be enabled");
  }
  if (char_ngrams && (char_min < 1 || char_min > char_max)) {
    throw std::invalid_argument("character n-gram range is empty");
  }
}

std::string FeatureConfig::describe() const {
  std::string s = "radmine-features/v1;dim=" + std::to_string(dimension) +
                  ";seed=" + std::to_string(hash_seed) +
                  ";unigrams=" + (word_unigrams ? "1" : "0") +
                  ";bigrams=" + (word_bigrams ? "1" : "0") + ";chars=";
  if (char_ngrams) {
    s += std::to_string(char_min) + "-" + std::to_string(char_max);
  } else {
    s += "off";
  }
  return s;
}

uint64_t FeatureConfig::content_hash() const { return fnv1a64(describe()); }

double SparseVector::value_at(uint32_t index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return 0.0;
  return values[it - indices.begin()];
}

std::vector<std::string> feature_words(std::string_view text) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i])) {
      ++i;
      continue;
    }
    std::string word;
    while (i < text.size()) {
      if (is_alnum(text[i])) {
        word += to_lower(text[i++]);
      } else if (text[i] == '-' && i + 1 < text.size() && is_alnum(text[i + 1])) {
        word += '-';
        ++i;
      } else {
        break;
      }
    }
    words.push_back(std::move(word));
  }
  return words;
}

uint32_t feature_index(std::string_view tag, std::string_view gram,
                       const FeatureConfig& config) {
  uint64_t h = fnv1a64(tag, kFnvOffsetBasis ^ config.hash_seed);
  h = fnv1a64(gram, h);
  return static_cast<uint32_t>(h & (config.dimension - 1));
}

SparseVector featurize(std::string_view text, const FeatureConfig& config) {
  auto words = feature_words(text);
  std::vector<uint32_t> raw;
  if (config.word_unigrams) {
    for (const auto& w : words) raw.push_back(feature_index(kUnigramTag, w, config));
  }
  if (config.word_bigrams) {
    std::string pair;
    for (size_t i = 0; i + 1 < words.size(); ++i) {
      pair = words[i];
      pair += ' ';
      pair += words[i + 1];
      raw.push_back(feature_index(kBigramTag, pair, config));
    }
  }
  if (config.char_ngrams) {
    for (const auto& w : words) {
      std::string_view sv(w);
      for (size_t n = config.char_min; n <= config.char_max; ++n) {
        for (size_t s = 0; s + n <= sv.size(); ++s) {
          raw.push_back(feature_index(kCharTag, sv.substr(s, n), config));
        }
      }
    }
  }
  std::sort(raw.begin(), raw.end());
  SparseVector v;
  for (size_t i = 0; i < raw.size();) {
    size_t j = i;
    while (j < raw.size() && raw[j] == raw[i]) ++j;
    v.indices.push_back(raw[i]);
    v.values.push_back(static_cast<double>(j - i));
    i = j;
  }
  return v;
}

}  // namespace radmine
