#include <gtest/gtest.h>

#include <map>

#include "oracles.h"
#include "radmine/npx.h"
#include "radmine/text_util.h"
#include "testing.h"

namespace radmine {
namespace {

std::string joined_phrases(const Sentence& s) {
  std::string out;
  for (const auto& np : noun_phrases_in(s)) {
    if (!out.empty()) out += " | ";
    out += np.normalized;
  }
  return out;
}

std::vector<Tag> tags_of(const std::vector<Token>& tokens) {
  std::vector<Tag> out;
  for (const auto& t : tokens) out.push_back(*t.tag);
  return out;
}

TEST(NounPhrases, GoldenCorpus) {
  std::map<std::string, std::string> gold;
  for (const std::string& line : testing::data_lines("golden/np_gold.tsv")) {
    auto fields = split(line, '\t');
    ASSERT_EQ(fields.size(), 2u);
    gold[std::string(fields[0])] = std::string(fields[1]);
  }
  auto sentences = testing::golden_sentences();
  ASSERT_EQ(sentences.size(), 20u);
  for (const auto& s : sentences) {
    ASSERT_TRUE(gold.contains(s.id.str())) << s.id.str();
    EXPECT_EQ(joined_phrases(s), gold[s.id.str()]) << s.text;
  }
}

TEST(NounPhrases, BracketedParse) {
  auto tokens = tag_sentence("The pleural effusion resolved.");
  ParseNode root = chunk_parse(tokens);
  EXPECT_EQ(to_bracketed(root, tokens),
            "(S (NP The pleural effusion) resolved .)");
}

TEST(NounPhrases, UntaggedTokenRejected) {
  auto tokens = tokenize("pleural effusion");
  EXPECT_THROW(chunk_parse(tokens), std::invalid_argument);
}

TEST(NounPhrases, SpansAndRawText) {
  Sentence s{{"x", 0, 0}, "CT showed bilateral pleural effusions.", {}};
  auto nps = noun_phrases_in(s);
  ASSERT_EQ(nps.size(), 2u);
  EXPECT_EQ(nps[1].raw, "bilateral pleural effusions");
  EXPECT_EQ(nps[1].normalized, "bilateral pleural effusion");
  EXPECT_EQ(s.text.substr(nps[1].span.begin, nps[1].span.end - nps[1].span.begin),
            nps[1].raw);
  EXPECT_EQ(nps[1].sentence_id, s.id);
}

TEST(NounPhrases, StopwordOnlyPhraseDropped) {
  Lexicon lex;
  lex.add("this", Tag::kNoun);
  auto tokens = pos_tag(tokenize("this"), lex);
  ParseNode root = chunk_parse(tokens);
  ASSERT_EQ(root.children.size(), 1u);
  EXPECT_EQ(root.children[0].label, ParseNode::Label::kNP);
  EXPECT_TRUE(extract_noun_phrases(root, tokens, {"x", 0, 0}).empty());
}

// Every NP matches the grammar, NPs are maximal left-to-right matches, and
// the root's children cover each token exactly once.
TEST(ChunkParse, AgreesWithRegexOracle) {
  testing::Gen gen(404);
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<Token> tokens(gen.below(16));
    for (auto& t : tokens) {
      t.text = "w";
      t.tag = static_cast<Tag>(gen.below(kNumTags));
    }
    std::vector<Tag> tags = tags_of(tokens);
    ParseNode root = chunk_parse(tokens);
    ASSERT_EQ(root.label, ParseNode::Label::kS);
    std::vector<std::pair<size_t, size_t>> nps;
    size_t next = 0;
    for (const auto& child : root.children) {
      ASSERT_EQ(child.begin, next);
      if (child.label == ParseNode::Label::kNP) {
        nps.emplace_back(child.begin, child.end);
        ASSERT_TRUE(oracle::matches_np_grammar(
            std::span<const Tag>(tags).subspan(child.begin, child.end - child.begin)));
        ASSERT_EQ(child.children.size(), child.end - child.begin);
      } else {
        ASSERT_EQ(child.label, ParseNode::Label::kToken);
        ASSERT_EQ(child.end, child.begin + 1);
      }
      next = child.end;
    }
    ASSERT_EQ(next, tokens.size());
    ASSERT_EQ(nps, oracle::chunk(tags));
  }
}

TEST(ChunkParse, RealSentencesAgreeWithOracle) {
  testing::Gen gen(5);
  for (int trial = 0; trial < 1000; ++trial) {
    auto tokens = tag_sentence(gen.sentence());
    ParseNode root = chunk_parse(tokens);
    std::vector<std::pair<size_t, size_t>> nps;
    for (const auto& c : root.children) {
      if (c.label == ParseNode::Label::kNP) nps.emplace_back(c.begin, c.end);
    }
    ASSERT_EQ(nps, oracle::chunk(tags_of(tokens)));
  }
}

std::vector<NounPhrase> random_phrases(testing::Gen& gen, size_t n) {
  static const std::vector<std::string> kTexts = {
      "pleural effusion", "consolidation", "ground glass opacity", "patient",
      "lung",             "nodule",        "chest ct",             "b", "a"};
  std::vector<NounPhrase> out;
  for (size_t i = 0; i < n; ++i) {
    NounPhrase p;
    p.normalized = gen.pick(kTexts);
    p.sentence_id = gen.sentence_id();
    out.push_back(p);
  }
  return out;
}

TEST(Aggregate, MatchesBruteForceOracle) {
  testing::Gen gen(77);
  for (int trial = 0; trial < 300; ++trial) {
    auto phrases = random_phrases(gen, gen.below(200));
    size_t cap = gen.below(7);
    std::vector<std::pair<std::string, SentenceId>> occ;
    for (const auto& p : phrases) occ.emplace_back(p.normalized, p.sentence_id);
    EXPECT_EQ(aggregate_phrases(phrases, cap), oracle::count_phrases(occ, cap));
  }
}

TEST(Aggregate, GoldenCorpusAgainstOracle) {
  std::vector<NounPhrase> all;
  std::vector<std::pair<std::string, SentenceId>> occ;
  for (const auto& s : testing::golden_sentences()) {
    for (auto& np : noun_phrases_in(s)) {
      occ.emplace_back(np.normalized, np.sentence_id);
      all.push_back(std::move(np));
    }
  }
  auto stats = aggregate_phrases(all);
  EXPECT_EQ(stats, oracle::count_phrases(occ, kExemplarCap));
  uint64_t total = 0;
  for (const auto& s : stats) total += s.frequency;
  EXPECT_EQ(total, all.size());
}

TEST(Aggregate, OrderOfInputDoesNotMatter) {
  testing::Gen gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto phrases = random_phrases(gen, 150);
    auto expected = aggregate_phrases(phrases);
    Rng rng(trial);
    rng.shuffle(std::span<NounPhrase>(phrases));
    EXPECT_EQ(aggregate_phrases(phrases), expected);
  }
}

TEST(Aggregate, MergeIsCommutativeAndMatchesSingleCounter) {
  testing::Gen gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto left = random_phrases(gen, gen.below(100));
    auto right = random_phrases(gen, gen.below(100));
    PhraseCounter a, b, whole;
    for (const auto& p : left) a.add(p), whole.add(p);
    for (const auto& p : right) b.add(p), whole.add(p);
    PhraseCounter ab = a, ba = b;
    ab.merge(b);
    ba.merge(a);
    EXPECT_EQ(ab.finish(), ba.finish());
    EXPECT_EQ(ab.finish(), whole.finish());
    EXPECT_EQ(ab.total(), left.size() + right.size());
  }
}

TEST(Aggregate, ExemplarsAreFirstSeenInCorpusOrder) {
  PhraseCounter c(2);
  c.add("lung", {"a", 0, 0});
  c.add("lung", {"a", 0, 0});
  c.add("lung", {"a", 0, 3});
  c.add("lung", {"b", 0, 0});
  auto stats = c.finish();
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_EQ(stats[0].frequency, 4u);
  EXPECT_EQ(stats[0].exemplars,
            (std::vector<SentenceId>{{"a", 0, 0}, {"a", 0, 3}}));
}

TEST(Aggregate, RankOrderMatchesSortOracle) {
  testing::Gen gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PhraseStat> stats;
    for (size_t i = 0, n = gen.below(40); i < n; ++i) {
      stats.push_back({gen.word(), 1 + gen.below(5), {}});
    }
    std::vector<std::pair<std::string, SentenceId>> occ;
    for (const auto& s : stats) {
      for (uint64_t k = 0; k < s.frequency; ++k) occ.emplace_back(s.normalized, SentenceId{});
    }
    auto expected = oracle::count_phrases(occ, 0);
    PhraseCounter c(0);
    for (const auto& [text, id] : occ) c.add(text, id);
    auto got = c.finish();
    ASSERT_EQ(got.size(), expected.size());
    for (size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].normalized, expected[i].normalized);
      EXPECT_EQ(got[i].frequency, expected[i].frequency);
      if (i > 0) EXPECT_TRUE(phrase_rank_less(got[i - 1], got[i]));
    }
  }
}

TEST(PhraseFile, RoundTripsFixture) {
  std::string text = testing::read_data("golden/table_top_rows.tsv");
  auto stats = parse_phrase_file(text);
  ASSERT_EQ(stats.size(), 3u);
  EXPECT_EQ(stats[0].normalized, "consolidation");
  EXPECT_EQ(stats[0].frequency, 79u);
  EXPECT_EQ(stats[1].exemplars.size(), 5u);
  EXPECT_EQ(stats[2].exemplars, (std::vector<SentenceId>{{"table", 7, 0}}));
  EXPECT_EQ(write_phrase_file(stats), text);
}

TEST(PhraseFile, Defects) {
  EXPECT_THROW(parse_phrase_file("lung\t3\t\n"), std::runtime_error);
  std::string h = std::string(kPhraseFileHeader) + "\n";
  EXPECT_THROW(parse_phrase_file(h + "lung\t0\t\n"), std::runtime_error);
  EXPECT_THROW(parse_phrase_file(h + "lung\tx\t\n"), std::runtime_error);
  EXPECT_THROW(parse_phrase_file(h + "lung\t3\tnot-an-id\n"), std::runtime_error);
  EXPECT_EQ(parse_phrase_file(h + "lung\t3\t\n").at(0).exemplars.size(), 0u);
  EXPECT_TRUE(parse_phrase_file(h).empty());
}

}  // namespace
}  // namespace radmine
