#include "radmine/npx.h"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "radmine/text_util.h"

namespace radmine {

namespace {

bool is_modifier(Tag t) {
  switch (t) {
    case Tag::kAdj:
    case Tag::kVbn:
    case Tag::kVbg:
    case Tag::kNoun:
    case Tag::kNounPl:
    case Tag::kPropn:
    case Tag::kNum:
      return true;
    default:
      return false;
  }
}

ParseNode leaf(size_t i) { return {ParseNode::Label::kToken, i, i + 1, {}}; }

// End (exclusive) of the longest NP starting at `i`, or `i` if none.
size_t match_np(std::span<const Token> tokens, size_t i) {
  size_t j = i;
  if (j < tokens.size() && *tokens[j].tag == Tag::kDet) ++j;
  size_t end = i;
  while (j < tokens.size() && is_modifier(*tokens[j].tag)) {
    if (is_noun_tag(*tokens[j].tag)) end = j + 1;
    ++j;
  }
  return end;
}

void render(const ParseNode& node, std::span<const Token> tokens,
            std::string* out) {
  if (node.label == ParseNode::Label::kToken) {
    *out += tokens[node.begin].text;
    return;
  }
  *out += '(';
  *out += label_name(node.label);
  for (const auto& child : node.children) {
    *out += ' ';
    render(child, tokens, out);
  }
  *out += ')';
}

}  // namespace

std::string_view label_name(ParseNode::Label label) {
  switch (label) {
    case ParseNode::Label::kS: return "S";
    case ParseNode::Label::kNP: return "NP";
    case ParseNode::Label::kToken: return "TOKEN";
  }
  return "?";
}

std::string to_bracketed(const ParseNode& node, std::span<const Token> tokens) {
  std::string out;
  render(node, tokens, &out);
  return out;
}

ParseNode chunk_parse(std::span<const Token> tokens) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].tag) {
      throw std::invalid_argument("chunk_parse: token " + std::to_string(i) +
                                  " ('" + tokens[i].text + "') is untagged");
    }
  }
  ParseNode root{ParseNode::Label::kS, 0, tokens.size(), {}};
  size_t i = 0;
  while (i < tokens.size()) {
    size_t end = match_np(tokens, i);
    if (end == i) {
      root.children.push_back(leaf(i++));
      continue;
    }
    ParseNode np{ParseNode::Label::kNP, i, end, {}};
    for (size_t k = i; k < end; ++k) np.children.push_back(leaf(k));
    root.children.push_back(std::move(np));
    i = end;
  }
  return root;
}

std::string normalize_phrase(std::span<const Token> np_tokens,
                             const StopwordList& stopwords,
                             const Lemmatizer& lemmatizer) {
  std::string out;
  for (size_t k = 0; k < np_tokens.size(); ++k) {
    std::string word = to_lower(np_tokens[k].text);
    if (stopwords.contains(word)) continue;
    if (k + 1 == np_tokens.size()) {
      word = lemmatizer.lemmatize(word, np_tokens[k].tag.value_or(Tag::kOther));
    }
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

std::vector<NounPhrase> extract_noun_phrases(const ParseNode& root,
                                             std::span<const Token> tokens,
                                             const SentenceId& sentence_id,
                                             const StopwordList& stopwords,
                                             const Lemmatizer& lemmatizer) {
  std::vector<NounPhrase> out;
  for (const ParseNode& child : root.children) {
    if (child.label != ParseNode::Label::kNP) continue;
    auto np = tokens.subspan(child.begin, child.end - child.begin);
    std::string normalized = normalize_phrase(np, stopwords, lemmatizer);
    if (normalized.empty()) continue;
    NounPhrase phrase;
    phrase.span = {np.front().span.begin, np.back().span.end};
    for (size_t k = 0; k < np.size(); ++k) {
      if (k > 0) {
        phrase.raw.append(np[k].span.begin - np[k - 1].span.end, ' ');
      }
      phrase.raw += np[k].text;
    }
    phrase.normalized = std::move(normalized);
    phrase.sentence_id = sentence_id;
    out.push_back(std::move(phrase));
  }
  return out;
}

std::vector<NounPhrase> noun_phrases_in(const Sentence& sentence) {
  auto tokens = tag_sentence(sentence.text);
  ParseNode root = chunk_parse(tokens);
  return extract_noun_phrases(root, tokens, sentence.id);
}

void PhraseCounter::offer(Entry* entry, const SentenceId& id) const {
  auto& ex = entry->exemplars;
  auto pos = std::lower_bound(ex.begin(), ex.end(), id);
  if (pos != ex.end() && *pos == id) return;
  if (ex.size() == cap_ && pos == ex.end()) return;
  ex.insert(pos, id);
  if (ex.size() > cap_) ex.pop_back();
}

void PhraseCounter::add(const NounPhrase& phrase) {
  add(phrase.normalized, phrase.sentence_id);
}

void PhraseCounter::add(std::string_view normalized, const SentenceId& id) {
  auto it = entries_.find(normalized);
  if (it == entries_.end()) {
    it = entries_.emplace(std::string(normalized), Entry{}).first;
  }
  ++it->second.frequency;
  ++total_;
  if (cap_ > 0) offer(&it->second, id);
}

void PhraseCounter::merge(const PhraseCounter& other) {
  for (const auto& [text, theirs] : other.entries_) {
    Entry& mine = entries_[text];
    mine.frequency += theirs.frequency;
    for (const auto& id : theirs.exemplars) {
      if (cap_ > 0) offer(&mine, id);
    }
  }
  total_ += other.total_;
}

bool phrase_rank_less(const PhraseStat& a, const PhraseStat& b) {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  return a.normalized < b.normalized;
}

std::vector<PhraseStat> PhraseCounter::finish() const {
  std::vector<PhraseStat> out;
  out.reserve(entries_.size());
  for (const auto& [text, entry] : entries_) {
    out.push_back({text, entry.frequency, entry.exemplars});
  }
  std::sort(out.begin(), out.end(), phrase_rank_less);
  return out;
}

std::vector<PhraseStat> aggregate_phrases(std::span<const NounPhrase> phrases,
                                          size_t exemplar_cap) {
  PhraseCounter counter(exemplar_cap);
  for (const auto& p : phrases) counter.add(p);
  return counter.finish();
}

std::string write_phrase_file(std::span<const PhraseStat> stats) {
  std::string out(kPhraseFileHeader);
  out += '\n';
  for (const auto& s : stats) {
    out += s.normalized;
    out += '\t';
    out += std::to_string(s.frequency);
    out += '\t';
    for (size_t i = 0; i < s.exemplars.size(); ++i) {
      if (i > 0) out += ',';
      out += s.exemplars[i].str();
    }
    out += '\n';
  }
  return out;
}

std::vector<PhraseStat> parse_phrase_file(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != kPhraseFileHeader) {
    throw std::runtime_error("phrase file: missing header line");
  }
  std::vector<PhraseStat> out;
  for (size_t n = 1; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (line.empty()) continue;
    auto bad = [&](const std::string& why) {
      return std::runtime_error("phrase file line " + std::to_string(n + 1) +
                                ": " + why);
    };
    auto fields = split(line, '\t');
    if (fields.size() != 3) throw bad("expected 3 tab-separated fields");
    PhraseStat stat;
    stat.normalized = std::string(fields[0]);
    if (stat.normalized.empty()) throw bad("empty phrase");
    auto f = fields[1];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), stat.frequency);
    if (ec != std::errc() || ptr != f.data() + f.size() || stat.frequency == 0) {
      throw bad("frequency must be a positive integer");
    }
    if (!fields[2].empty()) {
      for (auto id_text : split(fields[2], ',')) {
        auto id = SentenceId::parse(id_text);
        if (!id) throw bad("bad sentence id '" + std::string(id_text) + "'");
        stat.exemplars.push_back(std::move(*id));
      }
    }
    out.push_back(std::move(stat));
  }
  return out;
}

}  // namespace radmine
