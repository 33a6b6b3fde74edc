#ifndef RADMINE_NPX_H_
#define RADMINE_NPX_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radmine/corpus.h"
#include "radmine/textproc.h"

namespace radmine {

// Shallow parse tree. TOKEN nodes are leaves; NP nodes hold TOKEN leaves;
// the root S holds NP and TOKEN children covering every token in order.
struct ParseNode {
  enum class Label { kS, kNP, kToken };

  Label label = Label::kS;
  size_t begin = 0;  // token index range [begin, end)
  size_t end = 0;
  std::vector<ParseNode> children;
};

std::string_view label_name(ParseNode::Label label);

// Bracketed rendering, e.g. "(S (NP the pleural effusion) showed)".
std::string to_bracketed(const ParseNode& node, std::span<const Token> tokens);

// Left-to-right longest match of
//   DET? (ADJ|VBN|VBG|NOUN|NOUN_PL|PROPN|NUM)* (NOUN|NOUN_PL|PROPN)+
// with no backtracking into a matched NP. Throws std::invalid_argument if a
// token is untagged.
ParseNode chunk_parse(std::span<const Token> tokens);

struct NounPhrase {
  std::string raw;         // surface text of the NP
  std::string normalized;  // lowercased, stopword-free, head lemmatized
  SentenceId sentence_id;
  Span span;               // character range within the sentence
};

// Normalizes the tokens of one NP. Empty if every token is a stopword.
std::string normalize_phrase(std::span<const Token> np_tokens,
                             const StopwordList& stopwords,
                             const Lemmatizer& lemmatizer);

// One NounPhrase per NP node in textual order; NPs that normalize to empty
// are dropped.
std::vector<NounPhrase> extract_noun_phrases(
    const ParseNode& root, std::span<const Token> tokens,
    const SentenceId& sentence_id,
    const StopwordList& stopwords = StopwordList::bundled(),
    const Lemmatizer& lemmatizer = Lemmatizer::bundled());

// tokenize -> pos_tag -> chunk_parse -> extract_noun_phrases.
std::vector<NounPhrase> noun_phrases_in(const Sentence& sentence);

inline constexpr size_t kExemplarCap = 5;

struct PhraseStat {
  std::string normalized;
  uint64_t frequency = 0;
  std::vector<SentenceId> exemplars;

  friend bool operator==(const PhraseStat&, const PhraseStat&) = default;
};

// Mergeable partial counts. Exemplars are the `cap` smallest distinct
// sentence ids seen for a phrase, which is first-seen order whenever
// phrases arrive in corpus order, and makes merge() commutative.
class PhraseCounter {
 public:
  explicit PhraseCounter(size_t exemplar_cap = kExemplarCap)
      : cap_(exemplar_cap) {}

  void add(const NounPhrase& phrase);
  void add(std::string_view normalized, const SentenceId& sentence_id);
  void merge(const PhraseCounter& other);

  // Frequency descending, ties by normalized text ascending.
  std::vector<PhraseStat> finish() const;

  uint64_t total() const { return total_; }

 private:
  struct Entry {
    uint64_t frequency = 0;
    std::vector<SentenceId> exemplars;  // sorted, unique, size <= cap
  };
  void offer(Entry* entry, const SentenceId& id) const;

  size_t cap_;
  uint64_t total_ = 0;
  std::map<std::string, Entry, std::less<>> entries_;
};

std::vector<PhraseStat> aggregate_phrases(std::span<const NounPhrase> phrases,
                                          size_t exemplar_cap = kExemplarCap);

// Total order used for phrase reports.
bool phrase_rank_less(const PhraseStat& a, const PhraseStat& b);

// "normalized<TAB>frequency<TAB>id,id,..." with a header line.
inline constexpr std::string_view kPhraseFileHeader =
    "normalized\tfrequency\texemplar_ids";
std::string write_phrase_file(std::span<const PhraseStat> stats);
// Throws std::runtime_error naming the offending line.
std::vector<PhraseStat> parse_phrase_file(std::string_view text);

}  // namespace radmine

#endif  // RADMINE_NPX_H_
