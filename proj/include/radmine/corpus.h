#ifndef RADMINE_CORPUS_H_
#define RADMINE_CORPUS_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radmine {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Calendar date. Partial dates ("2020", "2020-03") resolve to the first day
// of the period they name.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
  std::string str() const;  // YYYY-MM-DD
};

// Accepts YYYY, YYYY-MM and YYYY-MM-DD. Returns nullopt for anything else,
// including out-of-range months and days.
std::optional<Date> parse_date(std::string_view text);

struct Article {
  std::string article_id;
  std::string title;
  std::optional<Date> publish_date;
  std::vector<std::string> paragraphs;
};

// (article_id, paragraph index, sentence index). Ordering is lexicographic
// on that tuple, which is also corpus order.
struct SentenceId {
  std::string article_id;
  uint32_t paragraph = 0;
  uint32_t index = 0;

  friend auto operator<=>(const SentenceId&, const SentenceId&) = default;
  friend bool operator==(const SentenceId&, const SentenceId&) = default;

  // "article_id:paragraph:index"
  std::string str() const;
  // Inverse of str(). The article id may itself contain ':'; the two numeric
  // fields are taken from the right.
  static std::optional<SentenceId> parse(std::string_view text);
};

// Half-open byte range.
struct Span {
  size_t begin = 0;
  size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Sentence {
  SentenceId id;
  std::string text;  // trimmed
  Span span;         // within the paragraph
};

struct CorpusFilter {
  // Exclusive lower bound: an article is kept iff publish_date > this.
  Date min_publish_date{2019, 11, 30};
  bool include_undated = false;

  bool admits(const Article& article) const;
};

struct SkippedFile {
  std::string path;
  std::string cause;
};

struct IngestReport {
  uint64_t files_read = 0;
  uint64_t files_skipped = 0;
  uint64_t articles_kept = 0;
  uint64_t sentences_emitted = 0;
  std::vector<SkippedFile> skipped;

  std::string to_json() const;
};

struct IngestResult {
  std::vector<Article> articles;  // sorted by article_id
  IngestReport report;
};

struct IngestOptions {
  CorpusFilter filter;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Reads every *.json (CORD-19 document layout) and *.txt (line format) file
// under `root`, recursively. A `metadata.tsv` file directly under root maps
// article ids to publish dates and overrides dates found in the documents.
// Malformed files and duplicate article ids are skipped and reported.
// Throws CorpusError if root is not a readable directory.
IngestResult ingest_corpus(const std::string& root, const IngestOptions& options);

// Parsers for a single document; throw CorpusError describing the defect.
Article parse_cord19_json(std::string_view contents);
Article parse_line_document(std::string_view contents);

// Sentence boundaries within one paragraph, as trimmed spans.
std::vector<Span> segment_paragraph(std::string_view paragraph);

std::vector<Sentence> segment_sentences(const Article& article);

// Abbreviations that suppress a boundary after their final period.
const std::vector<std::string>& sentence_abbreviations();

// Ingests and segments; fills report.sentences_emitted.
std::vector<Sentence> segment_corpus(const std::vector<Article>& articles,
                                     IngestReport* report = nullptr);

}  // namespace radmine

#endif  // RADMINE_CORPUS_H_
