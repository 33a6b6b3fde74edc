#include "radmine/textproc.h"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "radmine/text_util.h"

namespace radmine {

namespace {

constexpr std::array<std::string_view, kNumTags> kTagNames = {
    "DET", "ADJ", "NOUN", "NOUN_PL", "PROPN", "VERB", "VBG",
    "VBN", "ADP", "CONJ", "NUM",     "PUNCT", "OTHER"};

constexpr std::string_view kLeadingPunct = "([{\"'`<";
constexpr std::string_view kTrailingPunct = ".,;:!?)]}\"'>";

// Token-level abbreviations; these keep their final period.
bool is_abbreviation_token(std::string_view word) {
  static const std::array<std::string_view, 9> kAbbr = {
      "fig.", "dr.", "e.g.", "i.e.", "al.", "vs.", "no.", "approx.", "eq."};
  std::string lower = to_lower(word);
  return std::find(kAbbr.begin(), kAbbr.end(), lower) != kAbbr.end();
}

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Suffix matches only count when at least two characters of stem remain.
bool has_suffix(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() + 2 && ends_with(w, suffix);
}

bool has_noun_suffix(std::string_view w) {
  for (std::string_view s : {"tion", "sis", "oma", "itis", "gram", "pathy"}) {
    if (has_suffix(w, s)) return true;
  }
  return false;
}

void chop_chunk(std::string_view sentence, size_t begin, size_t end,
                std::vector<Token>* out) {
  std::vector<Token> tail;
  auto emit = [&](size_t b, size_t e, std::vector<Token>* dst) {
    dst->push_back({std::string(sentence.substr(b, e - b)), {b, e}, {}});
  };
  while (begin < end && kLeadingPunct.find(sentence[begin]) != std::string_view::npos) {
    emit(begin, begin + 1, out);
    ++begin;
  }
  while (end > begin) {
    char c = sentence[end - 1];
    if (kTrailingPunct.find(c) == std::string_view::npos) break;
    if (c == '.' && end - begin > 1 &&
        is_abbreviation_token(sentence.substr(begin, end - begin))) {
      break;
    }
    emit(end - 1, end, &tail);
    --end;
  }
  if (end > begin) {
    std::string_view core = sentence.substr(begin, end - begin);
    size_t possessive = 0;
    if (core.size() > 2 && ends_with(core, "'s")) {
      possessive = 2;
    } else if (core.size() > 4 && ends_with(core, "\xE2\x80\x99s")) {
      possessive = 4;
    }
    if (possessive > 0) {
      emit(begin, end - possessive, out);
      emit(end - possessive, end, out);
    } else {
      emit(begin, end, out);
    }
  }
  out->insert(out->end(), tail.rbegin(), tail.rend());
}

template <typename Fn>
void for_each_data_line(std::string_view text, Fn fn) {
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') {
      fn(line_no, line, true);
    } else {
      fn(line_no, line, false);
    }
  }
}

}  // namespace

std::string_view tag_name(Tag tag) { return kTagNames[static_cast<int>(tag)]; }

std::optional<Tag> parse_tag(std::string_view name) {
  for (int i = 0; i < kNumTags; ++i) {
    if (kTagNames[i] == name) return static_cast<Tag>(i);
  }
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    size_t start = i;
    while (i < sentence.size() && !is_space(sentence[i])) ++i;
    if (i > start) chop_chunk(sentence, start, i, &tokens);
  }
  return tokens;
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  for_each_data_line(text, [&](size_t line_no, std::string_view line,
                               bool comment) {
    if (comment) {
      if (line.starts_with("#version\t")) {
        lex.version_ = std::string(trim(line.substr(9)));
      }
      return;
    }
    auto fields = split(line, '\t');
    std::optional<Tag> tag;
    if (fields.size() == 2) tag = parse_tag(trim(fields[1]));
    if (!tag || trim(fields[0]).empty()) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected 'surface<TAB>TAG'");
    }
    lex.entries_[to_lower(trim(fields[0]))] = *tag;
  });
  if (lex.version_.empty()) {
    throw std::runtime_error("lexicon lacks a '#version' header line");
  }
  return lex;
}

const Lexicon& Lexicon::bundled() {
  static const Lexicon kLexicon = parse(resources::lexicon_text());
  return kLexicon;
}

std::optional<Tag> Lexicon::lookup(std::string_view lowercase) const {
  auto it = entries_.find(std::string(lowercase));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Tag suffix_rule_tag(std::string_view surface, bool sentence_initial) {
  if (!surface.empty() && is_alpha(surface.front())) {
    std::string w = to_lower(surface);
    if (has_noun_suffix(w)) return Tag::kNoun;
    if (has_suffix(w, "s") && has_noun_suffix(std::string_view(w).substr(0, w.size() - 1))) {
      return Tag::kNounPl;
    }
    if (has_suffix(w, "ing")) return Tag::kVbg;
    if (has_suffix(w, "ed")) return Tag::kVbn;
    for (std::string_view s : {"al", "ous", "ar", "ic"}) {
      if (has_suffix(w, s)) return Tag::kAdj;
    }
    if (!sentence_initial && is_upper(surface.front())) return Tag::kPropn;
  }
  if (!surface.empty() &&
      (is_digit(surface.front()) ||
       (surface.size() > 1 && (surface[0] == '-' || surface[0] == '+') &&
        is_digit(surface[1])))) {
    return Tag::kNum;
  }
  if (!surface.empty() &&
      std::all_of(surface.begin(), surface.end(), is_ascii_punct)) {
    return Tag::kPunct;
  }
  return Tag::kOther;
}

std::vector<Token> pos_tag(std::vector<Token> tokens, const Lexicon& lexicon) {
  bool seen_word = false;
  for (Token& t : tokens) {
    bool punct = std::all_of(t.text.begin(), t.text.end(), is_ascii_punct);
    if (auto hit = lexicon.lookup(to_lower(t.text))) {
      t.tag = *hit;
    } else {
      t.tag = suffix_rule_tag(t.text, !seen_word);
    }
    if (!punct) seen_word = true;
  }
  return tokens;
}

StopwordList StopwordList::parse(std::string_view text) {
  std::unordered_set<std::string> words;
  for_each_data_line(text, [&](size_t, std::string_view line, bool comment) {
    if (!comment) words.insert(to_lower(trim(line)));
  });
  return StopwordList(std::move(words));
}

const StopwordList& StopwordList::bundled() {
  static const StopwordList kList = parse(resources::stopwords_text());
  return kList;
}

bool is_stopword(std::string_view lowercase) {
  return StopwordList::bundled().contains(lowercase);
}

Lemmatizer::Lemmatizer(Exceptions exceptions, Rules rules)
    : exceptions_(std::move(exceptions)), rules_(std::move(rules)) {}

Lemmatizer::Exceptions Lemmatizer::parse_exceptions(std::string_view text) {
  Exceptions table;
  for_each_data_line(text, [&](size_t line_no, std::string_view line,
                               bool comment) {
    if (comment) return;
    auto fields = split(line, '\t');
    if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
      throw std::runtime_error("exception table line " + std::to_string(line_no) +
                               ": expected 'surface<TAB>lemma'");
    }
    table[to_lower(trim(fields[0]))] = to_lower(trim(fields[1]));
  });
  return table;
}

const Lemmatizer& Lemmatizer::bundled() {
  static const Lemmatizer kLemmatizer(
      parse_exceptions(resources::lemma_exceptions_text()));
  return kLemmatizer;
}

std::string Lemmatizer::plural_rules(std::string_view w) {
  auto stem = [&](size_t n) { return std::string(w.substr(0, w.size() - n)); };
  if (has_suffix(w, "ies")) return stem(3) + "y";
  if (has_suffix(w, "ses")) return stem(3) + "sis";
  if (has_suffix(w, "i")) return stem(1) + "us";
  // "-ses" never reaches this point; the -sis rule above claims it.
  for (std::string_view s : {"xes", "zes", "ches", "shes"}) {
    if (has_suffix(w, s)) return stem(2);
  }
  if (has_suffix(w, "s")) return stem(1);
  return std::string(w);
}

std::string Lemmatizer::lemmatize(std::string_view lowercase, Tag tag) const {
  if (tag != Tag::kNounPl) return std::string(lowercase);
  if (auto it = exceptions_.find(std::string(lowercase)); it != exceptions_.end()) {
    return it->second;
  }
  return rules_(lowercase);
}

std::string lemmatize(std::string_view lowercase, Tag tag) {
  return Lemmatizer::bundled().lemmatize(lowercase, tag);
}

std::vector<Token> tag_sentence(std::string_view sentence) {
  return pos_tag(tokenize(sentence), Lexicon::bundled());
}

}  // namespace radmine
