#include "radmine/store.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "radmine/text_util.h"

namespace radmine {

namespace {

constexpr std::string_view kSentenceHeader = "sentence_id\tbegin\tend\ttext";
constexpr std::string_view kLabeledHeader = "sentence_id\tlabel\ttext";
constexpr std::string_view kPredictionHeader = "sentence_id\tscore\tmargin";
constexpr std::string_view kTruthHeader = "sentence_id\tlabel";

// Calls fn(line_no, fields) for each data line after checking the header.
template <typename Fn>
void for_each_row(std::string_view text, std::string_view header,
                  size_t n_fields, std::string_view what, Fn fn) {
  auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != header) {
    throw std::runtime_error(std::string(what) + ": missing header '" +
                             std::string(header) + "'");
  }
  for (size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    auto fields = split(lines[n], '\t');
    if (fields.size() != n_fields) {
      throw std::runtime_error(std::string(what) + " line " + std::to_string(n + 1) +
                               ": expected " + std::to_string(n_fields) + " fields");
    }
    fn(n + 1, fields);
  }
}

SentenceId parse_id(std::string_view text, size_t line, std::string_view what) {
  auto id = SentenceId::parse(text);
  if (!id) {
    throw std::runtime_error(std::string(what) + " line " + std::to_string(line) +
                             ": bad sentence id '" + std::string(text) + "'");
  }
  return *id;
}

size_t parse_size(std::string_view text, size_t line, std::string_view what) {
  std::string s(text);
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') {
    throw std::runtime_error(std::string(what) + " line " + std::to_string(line) +
                             ": bad integer '" + s + "'");
  }
  return static_cast<size_t>(v);
}

Label parse_label_field(std::string_view text, size_t line, std::string_view what) {
  auto label = parse_label(text);
  if (!label) {
    throw std::runtime_error(std::string(what) + " line " + std::to_string(line) +
                             ": bad label '" + std::string(text) + "'");
  }
  return *label;
}

}  // namespace

std::string write_sentence_store(std::span<const Sentence> sentences) {
  std::string out(kSentenceHeader);
  out += '\n';
  for (const auto& s : sentences) {
    out += s.id.str();
    out += '\t';
    out += std::to_string(s.span.begin);
    out += '\t';
    out += std::to_string(s.span.end);
    out += '\t';
    out += escape_field(s.text);
    out += '\n';
  }
  return out;
}

std::vector<Sentence> parse_sentence_store(std::string_view text) {
  std::vector<Sentence> out;
  constexpr std::string_view kWhat = "sentence store";
  for_each_row(text, kSentenceHeader, 4, kWhat, [&](size_t line, const auto& f) {
    out.push_back({parse_id(f[0], line, kWhat), unescape_field(f[3]),
                   {parse_size(f[1], line, kWhat), parse_size(f[2], line, kWhat)}});
  });
  return out;
}

std::vector<Sentence> load_sentence_store(const std::string& path) {
  return parse_sentence_store(read_file(path));
}

std::string write_labeled_file(std::span<const LabeledSentence> data) {
  std::string out(kLabeledHeader);
  out += '\n';
  for (const auto& s : data) {
    out += s.id.str();
    out += '\t';
    out += label_name(s.label);
    out += '\t';
    out += escape_field(s.text);
    out += '\n';
  }
  return out;
}

std::vector<LabeledSentence> parse_labeled_file(std::string_view text) {
  std::vector<LabeledSentence> out;
  constexpr std::string_view kWhat = "labeled file";
  for_each_row(text, kLabeledHeader, 3, kWhat, [&](size_t line, const auto& f) {
    out.push_back(LabeledSentence::seed(parse_id(f[0], line, kWhat),
                                        unescape_field(f[2]),
                                        parse_label_field(f[1], line, kWhat)));
  });
  return out;
}

std::vector<LabeledSentence> load_labeled_file(const std::string& path) {
  return parse_labeled_file(read_file(path));
}

std::string write_predictions(std::span<const Prediction> preds) {
  std::string out(kPredictionHeader);
  out += '\n';
  char buf[32];
  for (const auto& p : preds) {
    out += p.sentence_id.str();
    std::snprintf(buf, sizeof(buf), "\t%.17g", p.score);
    out += buf;
    std::snprintf(buf, sizeof(buf), "\t%.17g", p.margin);
    out += buf;
    out += '\n';
  }
  return out;
}

std::vector<Prediction> parse_predictions(std::string_view text) {
  std::vector<Prediction> out;
  constexpr std::string_view kWhat = "predictions";
  auto number = [](std::string_view field, size_t line) {
    std::string s(field);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) {
      throw std::runtime_error("predictions line " + std::to_string(line) +
                               ": bad number '" + s + "'");
    }
    return v;
  };
  for_each_row(text, kPredictionHeader, 3, kWhat, [&](size_t line, const auto& f) {
    out.push_back({parse_id(f[0], line, kWhat), number(f[1], line), number(f[2], line)});
  });
  return out;
}

std::string write_truth_file(const TruthMap& truth) {
  std::string out(kTruthHeader);
  out += '\n';
  for (const auto& [id, label] : truth) {
    out += id.str();
    out += '\t';
    out += label_name(label);
    out += '\n';
  }
  return out;
}

TruthMap parse_truth_file(std::string_view text) {
  TruthMap out;
  constexpr std::string_view kWhat = "truth file";
  for_each_row(text, kTruthHeader, 2, kWhat, [&](size_t line, const auto& f) {
    out[parse_id(f[0], line, kWhat)] = parse_label_field(f[1], line, kWhat);
  });
  return out;
}

}  // namespace radmine
