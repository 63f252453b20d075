// Copyright 2026 The mgram Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mgram/lm/ngram.h"
#include "mgram/lm/tokenize.h"
#include "mgram/multigram/trainer.h"
#include "oracles.h"
#include "test_util.h"

namespace mgram {
namespace {

using Seqs = std::vector<std::vector<std::string>>;

int64_t CountOf(const NgramCounts& c, const std::vector<std::string>& gram) {
  Ngram ids;
  for (const auto& t : gram) ids.push_back(c.vocabulary.Find(t));
  const auto& table = c.counts.at(gram.size() - 1);
  auto it = table.find(ids);
  return it == table.end() ? 0 : it->second;
}

double Prob(const NgramModel& m, const std::vector<std::string>& history,
            const std::string& word) {
  std::vector<int32_t> h;
  for (const auto& t : history) h.push_back(m.vocabulary().Find(t));
  return std::pow(10.0, m.ConditionalLog10(h, m.vocabulary().Find(word)));
}

// Sum of P(w | h) over every token that can follow a history.
double ContextMass(const NgramModel& m, const std::vector<int32_t>& history) {
  double sum = 0.0;
  for (int32_t w = 0; w < static_cast<int32_t>(m.vocabulary().size()); ++w) {
    if (w == Vocabulary::kBos) continue;
    sum += std::pow(10.0, oracle::BackoffLog10(m, history, w));
  }
  return sum;
}

Seqs SampleTokens(size_t lines) {
  auto corpus = LoadCorpus(testing::SampleData("fr.train.txt"), "fr");
  corpus.resize(std::min(lines, corpus.size()));
  return TokenizeWords(corpus);
}

TEST(CountNgrams, PaddedBigrams) {
  const Seqs seqs = {{"a", "b"}};
  const auto c = CountNgrams(seqs, 2, false);
  EXPECT_EQ(CountOf(c, {"<s>", "a"}), 1);
  EXPECT_EQ(CountOf(c, {"a", "b"}), 1);
  EXPECT_EQ(CountOf(c, {"b", "</s>"}), 1);
  EXPECT_EQ(c.counts[1].size(), 3u);
}

TEST(CountNgrams, ConcatenatedStream) {
  const Seqs seqs = {{"a"}, {"a"}};
  const auto c = CountNgrams(seqs, 2, true);
  EXPECT_EQ(CountOf(c, {"a"}), 2);
  EXPECT_EQ(CountOf(c, {"a", "<sp>"}), 1);
  EXPECT_EQ(CountOf(c, {"<sp>", "a"}), 1);
}

TEST(CountNgrams, UnigramsAreFrequencies) {
  const Seqs seqs = {{"x", "y", "x"}, {"x"}};
  const auto c = CountNgrams(seqs, 1, false);
  EXPECT_EQ(CountOf(c, {"x"}), 3);
  EXPECT_EQ(CountOf(c, {"y"}), 1);
}

TEST(CountNgrams, PrefixCountsDominateExtensions) {
  const auto c = CountNgrams(SampleTokens(200), 3, false);
  for (int k = 2; k <= 3; ++k) {
    NgramMap<int64_t> sums;
    for (const auto& [g, n] : c.counts[k - 1]) {
      sums[Ngram(g.begin(), g.end() - 1)] += n;
    }
    for (const auto& [prefix, n] : sums) {
      auto it = c.counts[k - 2].find(prefix);
      ASSERT_NE(it, c.counts[k - 2].end());
      EXPECT_GE(it->second, n);
    }
  }
}

TEST(CountNgrams, ExtraVocabulary) {
  const Seqs seqs = {{"a"}};
  const std::vector<std::string> extra = {"zz"};
  const auto c = CountNgrams(seqs, 1, false, extra);
  EXPECT_GE(c.vocabulary.Find("zz"), 0);
  const auto m = EstimateKneserNey(c);
  EXPECT_GT(Prob(m, {}, "zz"), 0.0);
}

TEST(CountNgrams, RejectsBadInput) {
  EXPECT_MGRAM_ERROR(CountNgrams(Seqs{}, 2, false), ErrorCode::kInvalidArgument);
  EXPECT_MGRAM_ERROR(CountNgrams(Seqs{{"a"}}, 0, false),
                     ErrorCode::kInvalidArgument);
}

TEST(KneserNey, UnigramOrdering) {
  const Seqs seqs = {{"a", "a", "a", "b"}};
  const auto m = EstimateKneserNey(CountNgrams(seqs, 1, false));
  const double pa = Prob(m, {}, "a"), pb = Prob(m, {}, "b");
  const double punk = Prob(m, {}, "<unk>");
  EXPECT_GT(pa, pb);
  EXPECT_GT(pb, punk);
  EXPECT_GT(punk, 0.0);
  EXPECT_NEAR(pa + pb + Prob(m, {}, "</s>") + punk + Prob(m, {}, "<sp>"), 1.0,
              1e-6);
}

TEST(KneserNey, SingleTokenVocabulary) {
  const Seqs seqs = {{"a"}, {"a"}, {"a"}};
  const auto m = EstimateKneserNey(CountNgrams(seqs, 1, false));
  EXPECT_GT(Prob(m, {}, "a"), Prob(m, {}, "<unk>"));
  EXPECT_NEAR(ContextMass(m, {}), 1.0, 1e-6);
}

TEST(KneserNey, ContextsNormalize) {
  const auto m = EstimateKneserNey(CountNgrams(SampleTokens(300), 3, false));
  std::mt19937_64 rng(9);
  std::vector<Ngram> contexts;
  for (int k = 1; k < m.order(); ++k) {
    for (const auto& [g, e] : m.entries(k)) {
      if (e.has_backoff) contexts.push_back(g);
    }
  }
  ASSERT_FALSE(contexts.empty());
  for (int i = 0; i < 100; ++i) {
    const Ngram& h = contexts[rng() % contexts.size()];
    EXPECT_NEAR(ContextMass(m, h), 1.0, 1e-6);
  }
  EXPECT_NEAR(ContextMass(m, {}), 1.0, 1e-6);
}

TEST(ScoreSequence, BoundaryOnly) {
  const auto m = EstimateKneserNey(CountNgrams(SampleTokens(100), 2, false));
  EXPECT_NEAR(m.ScoreSequence({}), std::log10(Prob(m, {"<s>"}, "</s>")), 1e-12);
}

TEST(ScoreSequence, SingleToken) {
  const auto m = EstimateKneserNey(CountNgrams(SampleTokens(100), 3, false));
  const std::vector<std::string> w = {"de"};
  const double expected = std::log10(Prob(m, {"<s>"}, w[0])) +
                          std::log10(Prob(m, {"<s>", w[0]}, "</s>"));
  EXPECT_NEAR(m.ScoreSequence(w), expected, 1e-12);
}

TEST(ScoreSequence, MatchesBackoffOracle) {
  const Seqs train = SampleTokens(300);
  const auto m = EstimateKneserNey(CountNgrams(train, 4, false));
  std::mt19937_64 rng(17);
  const auto& vocab = m.vocabulary().tokens();
  for (int i = 0; i < 60; ++i) {
    std::vector<std::string> seq;
    if (i % 2 == 0) {
      seq = train[rng() % train.size()];
    } else {
      const size_t n = rng() % 10;
      for (size_t k = 0; k < n; ++k) seq.push_back(vocab[rng() % vocab.size()]);
      if (rng() % 3 == 0) seq.push_back("never-seen-token");
    }
    EXPECT_NEAR(m.ScoreSequence(seq), oracle::SequenceLog10(m, seq), 1e-9);
  }
}

TEST(Perplexity, UniformModel) {
  Vocabulary vocab;
  vocab.Add("x");
  vocab.Add("y");
  NgramModel m(1, vocab);
  const double p = std::log10(1.0 / 5.0);  // </s>, <unk>, <sp>, x, y
  for (const char* t : {"</s>", "<unk>", "<sp>", "x", "y"}) {
    m.Set({vocab.Find(t)}, {p, 0.0, false});
  }
  const Seqs text = {{"x", "y", "y"}, {"x"}};
  EXPECT_NEAR(Perplexity(m, text), 5.0, 1e-9);
}

TEST(Perplexity, HighOrderBeatsUnigramOnTrainingSentence) {
  const Seqs one = {{"le", "chat", "dort", "ici"}};
  const auto high = EstimateKneserNey(CountNgrams(one, 6, false));
  const auto uni = EstimateKneserNey(CountNgrams(one, 1, false));
  EXPECT_LT(Perplexity(high, one), Perplexity(uni, one));
}

TEST(Perplexity, MatchesScores) {
  const Seqs train = SampleTokens(50);
  const auto m = EstimateKneserNey(CountNgrams(train, 2, false));
  double total = 0.0;
  size_t n = 0;
  for (const auto& s : train) {
    total += m.ScoreSequence(s);
    n += s.size() + 1;
  }
  EXPECT_NEAR(Perplexity(m, train), std::pow(10.0, -total / n), 1e-9);
  EXPECT_MGRAM_ERROR(Perplexity(m, Seqs{}), ErrorCode::kInvalidArgument);
}

TEST(Arpa, RoundTrip) {
  const auto m = EstimateKneserNey(CountNgrams(SampleTokens(200), 3, false));
  const auto back = ParseArpa(ArpaString(m));
  ASSERT_EQ(back.order(), m.order());
  for (int k = 1; k <= m.order(); ++k) {
    ASSERT_EQ(back.NumEntries(k), m.NumEntries(k));
    for (const auto& [g, e] : m.entries(k)) {
      Ngram ids;
      for (int32_t id : g) ids.push_back(back.vocabulary().Find(m.vocabulary().Token(id)));
      const NgramEntry* b = back.Find(ids);
      ASSERT_NE(b, nullptr);
      EXPECT_NEAR(b->log10_prob, e.log10_prob, 1e-6);
      EXPECT_NEAR(b->log10_backoff, e.log10_backoff, 1e-6);
    }
  }
}

TEST(Arpa, RejectsMalformed) {
  EXPECT_MGRAM_ERROR(ParseArpa("not an arpa file\n"), ErrorCode::kFormat);
  EXPECT_MGRAM_ERROR(
      ParseArpa("\\data\\\nngram 1=2\n\n\\1-grams:\n-0.3\ta\n\\end\\\n"),
      ErrorCode::kFormat);
}

TEST(Arpa, FileRoundTrip) {
  testing::TempDir dir;
  const auto m = EstimateKneserNey(CountNgrams(SampleTokens(20), 2, false));
  WriteArpa(m, dir / "lm.arpa");
  EXPECT_EQ(ArpaString(ReadArpa(dir / "lm.arpa")), ArpaString(m));
}

TEST(OovCoverage, FullLexicon) {
  const std::vector<std::u32string> words = {U"chat", U"dort", U"chat"};
  const std::set<std::u32string, std::less<>> lex(words.begin(), words.end());
  const auto r = OovAndCoverage(lex, words);
  EXPECT_DOUBLE_EQ(r.oov_rate, 0.0);
  EXPECT_DOUBLE_EQ(r.coverage_rate, 100.0);
  EXPECT_EQ(r.running_words, 3u);
}

TEST(OovCoverage, SubwordUnitsSpellNewWords) {
  const std::set<std::u32string, std::less<>> lex = {U"ch", U"at", U"do"};
  EXPECT_TRUE(IsSegmentable(U"chatat", lex, 2));
  EXPECT_FALSE(IsSegmentable(U"dort", lex, 2));
  const std::vector<std::u32string> words = {U"chat", U"dort", U"doch", U"x"};
  const auto r = OovAndCoverage(lex, words);
  EXPECT_DOUBLE_EQ(r.oov_rate, 50.0);
  EXPECT_DOUBLE_EQ(r.coverage_rate, 50.0);
}

TEST(Tokenize, WordsAndCharacters) {
  const CorpusLine line{U"Oui, ça va", "fr"};
  EXPECT_EQ(TokenizeWordsLine(line),
            (std::vector<std::string>{"Oui", ",", "<sp>", "ça", "<sp>", "va"}));
  EXPECT_EQ(TokenizeCharactersLine({U"a b", ""}),
            (std::vector<std::string>{"a", "<sp>", "b"}));
}

TEST(Tokenize, LexiconTypeNames) {
  int k = 0;
  EXPECT_EQ(ParseLexiconType("m3", &k), LexiconType::kMultigram);
  EXPECT_EQ(k, 3);
  EXPECT_EQ(ParseLexiconType("char"), LexiconType::kCharacter);
  EXPECT_EQ(ParseLexiconType("word"), LexiconType::kWord);
  EXPECT_EQ(LexiconTypeName(LexiconType::kMultigram, 4), "m4");
  EXPECT_MGRAM_ERROR(ParseLexiconType("bogus"), ErrorCode::kInvalidArgument);
}

TEST(Tokenize, FileRoundTrip) {
  testing::TempDir dir;
  const Seqs seqs = {{"ab", "<sp>", "c"}, {"d"}};
  WriteTokenized(dir / "t.txt", seqs);
  EXPECT_EQ(ReadTokenized(dir / "t.txt"), seqs);
}

}  // namespace
}  // namespace mgram
