#ifndef RADMINE_TEXTPROC_H_
#define RADMINE_TEXTPROC_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "radmine/corpus.h"

namespace radmine {

enum class Tag {
  kDet,
  kAdj,
  kNoun,
  kNounPl,
  kPropn,
  kVerb,
  kVbg,
  kVbn,
  kAdp,
  kConj,
  kNum,
  kPunct,
  kOther,
};

inline constexpr int kNumTags = 13;

// "DET", "NOUN_PL", ... as used in lexicon files.
std::string_view tag_name(Tag tag);
std::optional<Tag> parse_tag(std::string_view name);

inline bool is_noun_tag(Tag t) {
  return t == Tag::kNoun || t == Tag::kNounPl || t == Tag::kPropn;
}

struct Token {
  std::string text;
  Span span;  // within the sentence
  std::optional<Tag> tag;
};

// Splits on whitespace, then peels leading and trailing punctuation into
// single-character tokens. Hyphenated compounds stay whole, abbreviations
// keep their period, and a possessive "'s" becomes its own token.
std::vector<Token> tokenize(std::string_view sentence);

// Lowercased surface form -> tag.
class Lexicon {
 public:
  Lexicon() = default;

  // "#version<TAB>v" header, then "surface<TAB>TAG" lines; '#' comments.
  static Lexicon parse(std::string_view text);
  static const Lexicon& bundled();

  std::optional<Tag> lookup(std::string_view lowercase) const;
  void add(std::string surface, Tag tag) { entries_[std::move(surface)] = tag; }

  const std::string& version() const { return version_; }
  size_t size() const { return entries_.size(); }
  bool contains(std::string_view lowercase) const {
    return lookup(lowercase).has_value();
  }

 private:
  std::string version_;
  std::unordered_map<std::string, Tag> entries_;
};

// Tag for a single token absent from the lexicon. `sentence_initial` is true
// for the first non-punctuation token of the sentence.
Tag suffix_rule_tag(std::string_view surface, bool sentence_initial);

// Lexicon hit first, then suffix_rule_tag. Total and deterministic.
std::vector<Token> pos_tag(std::vector<Token> tokens, const Lexicon& lexicon);

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words)
      : words_(std::move(words)) {}

  static StopwordList parse(std::string_view text);
  static const StopwordList& bundled();

  bool contains(std::string_view lowercase) const {
    return words_.contains(std::string(lowercase));
  }
  size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

bool is_stopword(std::string_view lowercase);  // bundled list

// Reduces plural nouns to their singular form. The exception table is
// consulted first; `rules` only sees words that miss it.
class Lemmatizer {
 public:
  using Rules = std::function<std::string(std::string_view)>;
  using Exceptions = std::unordered_map<std::string, std::string>;

  explicit Lemmatizer(Exceptions exceptions, Rules rules = plural_rules);

  // "surface<TAB>lemma" per line; '#' comments.
  static Exceptions parse_exceptions(std::string_view text);
  static const Lemmatizer& bundled();

  // -ies>y, -ses>sis, -i>us, -es after s/x/z/ch/sh, else strip -s.
  static std::string plural_rules(std::string_view word);

  // Only NOUN_PL is reduced; other tags come back unchanged.
  std::string lemmatize(std::string_view lowercase, Tag tag) const;

  const Exceptions& exceptions() const { return exceptions_; }

 private:
  Exceptions exceptions_;
  Rules rules_;
};

std::string lemmatize(std::string_view lowercase, Tag tag);  // bundled table

// Convenience: tokenize + pos_tag with the bundled lexicon.
std::vector<Token> tag_sentence(std::string_view sentence);

// Bundled resource texts, compiled in from data/.
namespace resources {
std::string_view lexicon_text();
std::string_view stopwords_text();
std::string_view lemma_exceptions_text();
std::string_view radiology_vocabulary_text();
}  // namespace resources

}  // namespace radmine

#endif  // RADMINE_TEXTPROC_H_
