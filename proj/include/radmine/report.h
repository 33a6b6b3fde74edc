#ifndef RADMINE_REPORT_H_
#define RADMINE_REPORT_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radmine/corpus.h"
#include "radmine/json_io.h"
#include "radmine/npx.h"

namespace radmine {

class ReportError : public std::runtime_error {
 public:
  explicit ReportError(const SentenceId& id)
      : std::runtime_error("exemplar " + id.str() +
                           " does not resolve to a sentence in the store"),
        id_(id) {}
  const SentenceId& id() const { return id_; }

 private:
  SentenceId id_;
};

inline constexpr uint64_t kDefaultMinFreq = 3;

struct Exemplar {
  SentenceId sentence_id;
  std::string text;
  std::vector<Span> spans;  // occurrences of the phrase's NPs in text
};

struct ReportRow {
  PhraseStat stat;
  std::vector<Exemplar> exemplars;
};

struct PhraseReport {
  uint64_t min_freq = kDefaultMinFreq;
  std::vector<ReportRow> rows;  // aggregation order

  // Exact normalized text first, then the slug form with spaces as '-'
  // ("pleural-effusion"). nullptr if neither matches.
  const ReportRow* find(std::string_view phrase) const;
};

// Keeps stats with frequency >= min_freq and resolves every exemplar id
// against `sentences`; throws ReportError for an id that is missing.
PhraseReport render_report(std::span<const PhraseStat> stats,
                           std::span<const Sentence> sentences, uint64_t min_freq);

// The phrase file format, header included even when empty.
std::string write_report_tsv(const PhraseReport& report);
Json report_to_json(const PhraseReport& report);
Json row_to_json(const ReportRow& row, size_t rank);

std::string phrase_slug(std::string_view normalized);

}  // namespace radmine

#endif  // RADMINE_REPORT_H_
