#ifndef RADMINE_STORE_H_
#define RADMINE_STORE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radmine/classifier.h"
#include "radmine/corpus.h"

namespace radmine {

// Tab-separated stores with a fixed header line. Text fields are escaped
// with escape_field(). Parsers throw std::runtime_error naming the line.

// sentence_id  begin  end  text
std::string write_sentence_store(std::span<const Sentence> sentences);
std::vector<Sentence> parse_sentence_store(std::string_view text);
std::vector<Sentence> load_sentence_store(const std::string& path);

// sentence_id  label  text      (label: positive | negative)
std::string write_labeled_file(std::span<const LabeledSentence> data);
std::vector<LabeledSentence> parse_labeled_file(std::string_view text);
std::vector<LabeledSentence> load_labeled_file(const std::string& path);

// sentence_id  score  margin   (17 significant digits)
std::string write_predictions(std::span<const Prediction> preds);
std::vector<Prediction> parse_predictions(std::string_view text);

// sentence_id  label
std::string write_truth_file(const TruthMap& truth);
TruthMap parse_truth_file(std::string_view text);

}  // namespace radmine

#endif  // RADMINE_STORE_H_
