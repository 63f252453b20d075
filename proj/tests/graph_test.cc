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
#include <numbers>
#include <random>
#include <set>

#include "mgram/base/utf8.h"
#include "mgram/fst/algorithms.h"
#include "mgram/graph/builder.h"
#include "mgram/lm/ngram.h"
#include "mgram/text/corpus.h"
#include "oracles.h"
#include "test_util.h"

namespace mgram {
namespace {

const CharacterInventory kAbc({U'a', U'b', U'c'});

// Linear acceptor over `labels`, optionally with a self-loop on `loop` at
// every state.
Transducer Acceptor(const std::vector<Label>& labels, Label loop = -1) {
  Transducer t;
  t.AddStates(labels.size() + 1);
  t.SetStart(0);
  for (size_t i = 0; i < labels.size(); ++i) {
    t.AddArc(static_cast<StateId>(i),
             {labels[i], labels[i], TropicalWeight::One(), static_cast<StateId>(i + 1)});
  }
  if (loop >= 0) {
    for (StateId s = 0; s <= static_cast<StateId>(labels.size()); ++s) {
      t.AddArc(s, {loop, loop, TropicalWeight::One(), s});
    }
  }
  t.SetFinal(static_cast<StateId>(labels.size()), TropicalWeight::One());
  return t;
}

std::u32string Collapse(const std::vector<int>& frames, const std::u32string& chars) {
  std::u32string out;
  int prev = -1;
  for (int f : frames) {
    if (f != 0 && f != prev) out.push_back(chars[f - 1]);
    prev = f;
  }
  return out;
}

// Output strings of `frames` (0 = blank, j = j-th character) through T.
std::set<std::u32string> TokenFstOutputs(const Transducer& t,
                                         const std::vector<int>& frames) {
  std::vector<Label> labels;
  for (int f : frames) labels.push_back(f + 1);
  std::set<std::u32string> outs;
  for (const auto& [key, w] : oracle::WeightedLanguage(Compose(Acceptor(labels), t))) {
    std::u32string s;
    for (Label l : key.second) {
      s += SymbolCharacter(t.output_symbols()->Symbol(l));
    }
    outs.insert(s);
  }
  return outs;
}

NgramModel TrainLm(const std::vector<std::vector<std::string>>& seqs, int order,
                   const std::vector<std::string>& extra = {}) {
  return EstimateKneserNey(CountNgrams(seqs, order, false, extra));
}

TEST(TokenFst, CollapseExamples) {
  const Transducer t = BuildTokenFst(kAbc);
  EXPECT_EQ(TokenFstOutputs(t, {0, 1, 1, 0, 2}), std::set<std::u32string>{U"ab"});
  EXPECT_EQ(TokenFstOutputs(t, {1, 0, 1}), std::set<std::u32string>{U"aa"});
  EXPECT_EQ(TokenFstOutputs(t, {0, 0}), std::set<std::u32string>{U""});
}

TEST(TokenFst, ExhaustiveCollapse) {
  const Transducer t = BuildTokenFst(kAbc);
  for (int len = 1; len <= 6; ++len) {
    std::vector<int> frames(len, 0);
    while (true) {
      EXPECT_EQ(TokenFstOutputs(t, frames),
                std::set<std::u32string>{Collapse(frames, U"abc")});
      int i = 0;
      while (i < len && ++frames[i] == 4) frames[i++] = 0;
      if (i == len) break;
    }
  }
}

TEST(TokenFst, EmptyInventoryFails) {
  EXPECT_MGRAM_ERROR(BuildTokenFst(CharacterInventory()), ErrorCode::kInvalidArgument);
}

TEST(CharacterTable, Layout) {
  const auto table = MakeCharacterTable(CharacterInventory({U' ', U'a'}));
  EXPECT_EQ(table->symbols(),
            (std::vector<std::string>{"<eps>", "<blk>", "<space>", "a"}));
}

// Distinct token sequences L maps the characters of `word` to, ignoring
// auxiliary symbols and the #0 loop.
std::set<std::vector<std::string>> LexiconReadings(const Transducer& l,
                                                    const std::u32string& word) {
  const auto& isyms = *l.input_symbols();
  const auto& osyms = *l.output_symbols();
  std::set<std::vector<std::string>> out;
  for (const Path& p : EnumeratePaths(l, word.size() * 2 + 2)) {
    std::u32string chars;
    bool uses_loop = false;
    for (const Arc& a : p.arcs) {
      const std::string& sym = isyms.Symbol(a.ilabel);
      if (sym == "#0") uses_loop = true;
      if (sym[0] != '#') chars += SymbolCharacter(sym);
    }
    if (uses_loop || chars != word) continue;
    std::vector<std::string> tokens;
    for (Label o : p.output) tokens.push_back(osyms.Symbol(o));
    out.insert(tokens);
  }
  return out;
}

TEST(LexiconFst, SingleToken) {
  const std::vector<std::string> lex = {"ab"};
  const auto tokens = MakeTokenTable(lex);
  const Transducer l = BuildLexiconFst(lex, kAbc, tokens);
  EXPECT_EQ(LexiconReadings(l, U"ab").size(), 1u);
  EXPECT_TRUE(LexiconReadings(l, U"ba").empty());
}

TEST(LexiconFst, PrefixTokensNeedDisambiguation) {
  const std::vector<std::string> two = {"a", "ab"};
  const Transducer l2 = BuildLexiconFst(two, kAbc, MakeTokenTable(two));
  EXPECT_EQ(LexiconReadings(l2, U"ab"),
            (std::set<std::vector<std::string>>{{"ab"}}));
  EXPECT_GE(l2.input_symbols()->Find("#1"), 0);
  const std::vector<std::string> three = {"a", "b", "ab"};
  const Transducer l3 = BuildLexiconFst(three, kAbc, MakeTokenTable(three));
  EXPECT_EQ(LexiconReadings(l3, U"ab"),
            (std::set<std::vector<std::string>>{{"ab"}, {"a", "b"}}));
}

TEST(LexiconFst, SpaceToken) {
  const CharacterInventory inv({U' ', U'a'});
  const std::vector<std::string> lex = {"a", "<sp>"};
  const Transducer l = BuildLexiconFst(lex, inv, MakeTokenTable(lex));
  EXPECT_EQ(LexiconReadings(l, U"a a"),
            (std::set<std::vector<std::string>>{{"a", "<sp>", "a"}}));
}

TEST(LexiconFst, RejectsOutOfInventorySpelling) {
  const std::vector<std::string> lex = {"az"};
  EXPECT_MGRAM_ERROR(BuildLexiconFst(lex, kAbc, MakeTokenTable(lex)),
                     ErrorCode::kInvalidArgument);
}

TEST(GrammarFst, UnigramSingleState) {
  const auto m = TrainLm({{"a"}, {"a", "a"}}, 1);
  const auto tokens = MakeTokenTable(PredictableTokens(m));
  const Transducer g = BuildGrammarFst(m, tokens);
  EXPECT_EQ(g.NumStates(), 1u);
  const Label a = tokens->Find("a");
  const double pa = std::pow(10.0, m.ConditionalLog10({}, m.vocabulary().Find("a")));
  bool found = false;
  for (const Arc& arc : g.Arcs(0)) {
    if (arc.ilabel == a) {
      EXPECT_NEAR(arc.weight.Value(), -std::log(pa), 1e-12);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(GrammarFst, BackoffArcsMatchBackoffEntries) {
  const auto m = TrainLm({{"a", "b"}, {"b", "a", "a"}, {"c"}}, 3);
  const auto tokens = MakeTokenTable(PredictableTokens(m));
  const Transducer g = BuildGrammarFst(m, tokens);
  size_t contexts = 0;
  for (int k = 1; k < m.order(); ++k) {
    for (const auto& [gram, e] : m.entries(k)) contexts += e.has_backoff;
  }
  const Label backoff = tokens->Find("#0");
  size_t backoff_arcs = 0;
  for (StateId s = 0; s < static_cast<StateId>(g.NumStates()); ++s) {
    for (const Arc& a : g.Arcs(s)) backoff_arcs += a.ilabel == backoff;
  }
  EXPECT_EQ(backoff_arcs, contexts);
}

// Tropical score of `tokens` through G, in -ln units.
double GrammarScore(const Transducer& g, const SymbolTable& tokens,
                    const std::vector<std::string>& seq) {
  std::vector<Label> labels;
  for (const auto& t : seq) labels.push_back(tokens.Find(t));
  return ShortestPath(Compose(Acceptor(labels, tokens.Find("#0")), g), 1)[0]
      .weight.Value();
}

TEST(GrammarFst, BigramScoresMatchModel) {
  const auto corpus = LoadCorpus(testing::SampleData("en.train.txt"), "en");
  std::vector<std::vector<std::string>> seqs;
  for (size_t i = 0; i < 200; ++i) {
    std::vector<std::string> words;
    for (const auto& w : SplitWords(corpus[i])) words.push_back(U32ToUtf8(w));
    seqs.push_back(words);
  }
  const auto m = TrainLm(seqs, 2);
  const auto tokens = MakeTokenTable(PredictableTokens(m));
  const Transducer g = BuildGrammarFst(m, tokens);
  std::mt19937_64 rng(4);
  const auto vocab = PredictableTokens(m);
  for (int i = 0; i < 30; ++i) {
    std::vector<std::string> seq = seqs[rng() % seqs.size()];
    if (i % 2) seq.push_back(vocab[rng() % vocab.size()]);
    const double expected = -m.ScoreSequence(seq) * std::numbers::ln10;
    EXPECT_NEAR(GrammarScore(g, *tokens, seq), expected, 1e-6);
  }
}

TEST(GrammarFst, HigherOrderScoresAreBounded) {
  const auto m = TrainLm({{"a", "b", "a"}, {"b", "b", "a"}, {"a", "a", "b", "c"}}, 3);
  const auto tokens = MakeTokenTable(PredictableTokens(m));
  const Transducer g = BuildGrammarFst(m, tokens);
  for (const auto& seq : std::vector<std::vector<std::string>>{
           {"a", "b", "a"}, {"c", "a"}, {"b", "c", "c", "a"}}) {
    const double exact = -m.ScoreSequence(seq) * std::numbers::ln10;
    EXPECT_LE(GrammarScore(g, *tokens, seq), exact + 1e-6);
  }
}

TEST(SearchGraph, SingletonLexicon) {
  const auto m = TrainLm({{"a"}}, 1);
  const CharacterInventory inv({U'a'});
  const std::vector<std::string> lex = {"a"};
  const SearchGraph s = BuildSearchGraph(m, lex, inv, {"word", 0, 0, 0});
  const auto& osyms = *s.graph.output_symbols();
  const Label a_frame = s.graph.input_symbols()->Find("a");
  const auto lang = oracle::WeightedLanguage(Compose(Acceptor({a_frame}), s.graph));
  const double expected =
      -(m.ConditionalLog10(std::vector<int32_t>{Vocabulary::kBos}, m.vocabulary().Find("a")) +
        m.ConditionalLog10(std::vector<int32_t>{Vocabulary::kBos, m.vocabulary().Find("a")},
                           Vocabulary::kEos)) *
      std::numbers::ln10;
  bool found = false;
  for (const auto& [key, w] : lang) {
    if (key.second.size() == 1 && osyms.Symbol(key.second[0]) == "a") {
      EXPECT_NEAR(w, expected, 1e-9);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(s.metadata.lm_order, 1);
  EXPECT_EQ(s.metadata.charset_size, 1u);
}

TEST(SearchGraph, EmptyVocabularyFails) {
  const NgramModel empty(1, Vocabulary());
  EXPECT_MGRAM_ERROR(BuildSearchGraph(empty, {}, kAbc, {"word", 0, 0, 0}),
                     ErrorCode::kInvalidArgument);
}

TEST(SearchGraph, ChainMismatchFails) {
  const auto m = TrainLm({{"a"}}, 1);
  const auto tokens = MakeTokenTable(PredictableTokens(m));
  const std::vector<std::string> lex = {"a"};
  const Transducer t = BuildTokenFst(CharacterInventory({U'b', U'c'}));
  const Transducer l = BuildLexiconFst(lex, CharacterInventory({U'a'}), tokens);
  EXPECT_MGRAM_ERROR(BuildSearchGraph(t, l, BuildGrammarFst(m, tokens), {}),
                     ErrorCode::kSymbolMismatch);
}

TEST(SearchGraph, OutputsAreLmTokens) {
  const auto m = TrainLm({{"ab", "<sp>", "c"}, {"a", "b"}}, 2);
  const SearchGraph s = BuildSearchGraph(m, {}, CharacterInventory({U' ', U'a', U'b', U'c'}),
                                         {"m2", 0, 0, 0});
  const auto& osyms = *s.graph.output_symbols();
  for (StateId q = 0; q < static_cast<StateId>(s.graph.NumStates()); ++q) {
    for (const Arc& a : s.graph.Arcs(q)) {
      if (a.olabel == kEpsilon) continue;
      EXPECT_GE(m.vocabulary().Find(osyms.Symbol(a.olabel)), 0);
      EXPECT_NE(osyms.Symbol(a.olabel), "#0");
    }
  }
}

TEST(GraphStats, SingleStateGraph) {
  Transducer t;
  t.AddState();
  t.SetStart(0);
  t.SetFinal(0, TropicalWeight::One());
  const GraphStats st = ComputeGraphStats(t);
  EXPECT_EQ(st.states, 1u);
  EXPECT_EQ(st.arcs, 0u);
  EXPECT_GT(st.bytes, 0u);
}

TEST(GraphFiles, RoundTrip) {
  testing::TempDir dir;
  const auto m = TrainLm({{"ab", "c"}, {"a", "b"}}, 2);
  const SearchGraph s = BuildSearchGraph(m, {}, kAbc, {"m2", 0, 0, 1234});
  WriteSearchGraph(s, dir.path());
  const SearchGraph back = ReadSearchGraph(dir.path());
  EXPECT_EQ(back.metadata.lexicon_type, "m2");
  EXPECT_EQ(back.metadata.lm_order, 2);
  EXPECT_EQ(back.metadata.charset_size, 3u);
  EXPECT_EQ(back.metadata.timestamp, 1234);
  EXPECT_EQ(*back.graph.input_symbols(), *s.graph.input_symbols());
  EXPECT_EQ(*back.graph.output_symbols(), *s.graph.output_symbols());
  EXPECT_EQ(back.graph.NumStates(), s.graph.NumStates());
  EXPECT_EQ(back.graph.NumArcs(), s.graph.NumArcs());
  const GraphStats st = ReadGraphStats(dir.path());
  EXPECT_EQ(st.states, s.graph.NumStates());
  EXPECT_EQ(st.bytes, std::filesystem::file_size(dir / "graph.fst"));
  EXPECT_EQ(testing::ReadFile(dir / "meta.txt"),
            "lexicon_type=m2\nlm_order=2\ncharset_size=3\ntimestamp=1234\n");
}

}  // namespace
}  // namespace mgram
