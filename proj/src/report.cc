#include "radmine/report.h"

#include <algorithm>

namespace radmine {

std::string phrase_slug(std::string_view normalized) {
  std::string s(normalized);
  std::replace(s.begin(), s.end(), ' ', '-');
  return s;
}

const ReportRow* PhraseReport::find(std::string_view phrase) const {
  for (const auto& row : rows) {
    if (row.stat.normalized == phrase) return &row;
  }
  for (const auto& row : rows) {
    if (phrase_slug(row.stat.normalized) == phrase) return &row;
  }
  return nullptr;
}

PhraseReport render_report(std::span<const PhraseStat> stats,
                           std::span<const Sentence> sentences, uint64_t min_freq) {
  std::map<SentenceId, const Sentence*> by_id;
  for (const Sentence& s : sentences) by_id.emplace(s.id, &s);

  PhraseReport report;
  report.min_freq = min_freq;
  for (const PhraseStat& stat : stats) {
    if (stat.frequency < min_freq) continue;
    ReportRow row{stat, {}};
    for (const SentenceId& id : stat.exemplars) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw ReportError(id);
      Exemplar ex{id, it->second->text, {}};
      for (const NounPhrase& np : noun_phrases_in(*it->second)) {
        if (np.normalized == stat.normalized) ex.spans.push_back(np.span);
      }
      row.exemplars.push_back(std::move(ex));
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     return phrase_rank_less(a.stat, b.stat);
                   });
  return report;
}

std::string write_report_tsv(const PhraseReport& report) {
  std::vector<PhraseStat> stats;
  stats.reserve(report.rows.size());
  for (const auto& row : report.rows) stats.push_back(row.stat);
  return write_phrase_file(stats);
}

Json row_to_json(const ReportRow& row, size_t rank) {
  Json exemplars = Json::array();
  for (const auto& ex : row.exemplars) {
    Json spans = Json::array();
    for (const Span& s : ex.spans) spans.push_back({s.begin, s.end});
    exemplars.push_back(
        {{"sentence_id", ex.sentence_id.str()}, {"text", ex.text}, {"spans", spans}});
  }
  return {{"rank", rank},
          {"phrase", row.stat.normalized},
          {"slug", phrase_slug(row.stat.normalized)},
          {"frequency", row.stat.frequency},
          {"exemplars", exemplars}};
}

Json report_to_json(const PhraseReport& report) {
  Json rows = Json::array();
  for (size_t i = 0; i < report.rows.size(); ++i) {
    rows.push_back(row_to_json(report.rows[i], i + 1));
  }
  return {{"min_freq", report.min_freq}, {"phrases", rows}};
}

}  // namespace radmine
