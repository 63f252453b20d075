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

#include "mgram/eval/evaluate.h"

#include <gtest/gtest.h>

#include <random>

#include "mgram/base/log.h"
#include "mgram/base/utf8.h"
#include "mgram/eval/metrics.h"
#include "oracles.h"
#include "pipeline.h"
#include "test_util.h"

namespace mgram {
namespace {

using Words = std::vector<std::string>;

TEST(EditDistance, Examples) {
  EXPECT_EQ(EditDistance(Words{"a", "b", "c"}, Words{"a", "x", "c"}),
            (EditCounts{1, 1, 0, 0}));
  EXPECT_EQ(EditDistance(Words{}, Words{"a", "b"}), (EditCounts{2, 0, 0, 2}));
  EXPECT_EQ(EditDistance(Words{"a", "b"}, Words{}), (EditCounts{2, 0, 2, 0}));
  EXPECT_EQ(EditDistance(U"kitten", U"sitting").distance, 3u);
  EXPECT_EQ(EditDistance(U"", U"").distance, 0u);
}

TEST(EditDistance, PooledWordErrorRate) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"one two three four five", "one two three four five"},
      {"six seven eight nine ten", "six seven ate nine ten"}};
  const ErrorRate wer = WordErrorRate(pairs);
  EXPECT_EQ(wer.reference_length, 10u);
  EXPECT_DOUBLE_EQ(wer.percent, 10.0);
  const ErrorRate cer = CharacterErrorRate(
      std::vector<std::pair<std::string, std::string>>{{"ab", "abc"}});
  EXPECT_DOUBLE_EQ(cer.percent, 50.0);
  EXPECT_MGRAM_ERROR(WordErrorRate(std::vector<std::pair<std::string, std::string>>{{"", "a"}}),
                     ErrorCode::kInvalidArgument);
}

TEST(EditDistance, WordsOfSplitsOnWhitespace) {
  EXPECT_EQ(WordsOf("  a  bc\td "), (Words{"a", "bc", "d"}));
  EXPECT_TRUE(WordsOf("   ").empty());
}

Words RandomWords(std::mt19937_64& rng) {
  static const Words kPool = {"a", "b", "c", "d"};
  Words out(rng() % 7);
  for (auto& w : out) w = kPool[rng() % kPool.size()];
  return out;
}

TEST(EditDistance, AgreesWithOracle) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const Words a = RandomWords(rng);
    const Words b = RandomWords(rng);
    const EditCounts c = EditDistance(a, b);
    EXPECT_EQ(c.distance, oracle::Levenshtein(a, b));
    EXPECT_EQ(c.distance, c.substitutions + c.deletions + c.insertions);
    EXPECT_EQ(a.size() + c.insertions, b.size() + c.deletions);
  }
}

TEST(EditDistance, IsAMetric) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const Words a = RandomWords(rng);
    const Words b = RandomWords(rng);
    const Words c = RandomWords(rng);
    const size_t ab = EditDistance(a, b).distance;
    EXPECT_EQ(ab, EditDistance(b, a).distance);
    EXPECT_EQ(EditDistance(a, a).distance, 0u);
    EXPECT_LE(EditDistance(a, c).distance, ab + EditDistance(b, c).distance);
  }
}

TEST(FormatMinutesSeconds, Rounds) {
  EXPECT_EQ(FormatMinutesSeconds(0.0), "0:00.00");
  EXPECT_EQ(FormatMinutesSeconds(75.5), "1:15.50");
  EXPECT_EQ(FormatMinutesSeconds(599.999), "10:00.00");
}

TEST(ComplexityReport, ReductionIsRelativeToWords) {
  EXPECT_DOUBLE_EQ(StatesArcsReduction({10, 10, 0}, {20, 20, 0}), 50.0);
  EXPECT_DOUBLE_EQ(StatesArcsReduction({10, 10, 0}, {0, 0, 0}), 0.0);
  const std::vector<ComplexityRow> one = {{"m2", {5, 7, 100}}};
  EXPECT_NE(FormatComplexityReport(one).find("0.0%"), std::string::npos);
  const std::vector<ComplexityRow> rows = {{"m2", {5, 5, 1}}, {"words", {10, 10, 2}}};
  const std::string table = FormatComplexityReport(rows);
  EXPECT_NE(table.find("50.0%"), std::string::npos);
  EXPECT_NE(ComplexityReportTsv(rows).find("words"), std::string::npos);
}

// Small French system shared by the end-to-end tests.
class EvaluationTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SetLogSink([](LogLevel, std::string_view) {});
    auto train = LoadCorpus(testing::SampleData("fr.train.txt"), "fr");
    train.resize(400);
    const auto test = LoadCorpus(testing::SampleData("fr.test.txt"), "fr");
    inventory_ = new CharacterInventory(BuildCharacterInventory(train));
    test_.clear();
    for (const CorpusLine& line : test) {
      bool covered = true;
      for (char32_t c : line.text) covered = covered && inventory_->Contains(c);
      if (covered && line.text.size() < 80) test_.push_back(line);
      if (test_.size() == 12) break;
    }
    const auto models = testing::TrainMultigrams(train, 2, 5);
    system_ = new testing::System(testing::BuildSystem(
        train, LexiconType::kMultigram, models, 3, *inventory_, "m2"));
  }
  static void TearDownTestSuite() {
    delete system_;
    delete inventory_;
    SetLogSink({});
  }

  std::vector<EvalItem> Items(double eps) const {
    NoiseSpec noise;
    noise.confusion = eps;
    noise.frames_per_char = 3;
    noise.seed = 7;
    return testing::SynthesizeItems(test_, *inventory_, noise);
  }

  static inline CharacterInventory* inventory_ = nullptr;
  static inline testing::System* system_ = nullptr;
  static inline std::vector<CorpusLine> test_;
};

TEST_F(EvaluationTest, NoiselessLatticesDecodePerfectly) {
  const EvalReport report = EvaluateSet(Items(0.0), system_->graph, {}, 2);
  EXPECT_EQ(report.failed_lines, 0u);
  EXPECT_DOUBLE_EQ(report.wer, 0.0);
  EXPECT_DOUBLE_EQ(report.cer, 0.0);
  EXPECT_GT(report.decode_seconds, 0.0);
  EXPECT_EQ(report.lines.size(), test_.size());
  EXPECT_NE(FormatEvalReport(report).find("WER"), std::string::npos);
}

TEST_F(EvaluationTest, LanguageModelBeatsGreedyUnderNoise) {
  const auto items = Items(0.1);
  const EvalReport lm = EvaluateSet(items, system_->graph, {}, 1);
  const EvalReport greedy = EvaluateGreedy(items);
  EXPECT_LE(lm.wer, greedy.wer);
  EXPECT_GT(greedy.wer, 0.0);
  EXPECT_EQ(FormatEvalReport(greedy).find("OOV"), std::string::npos);
  const std::string tsv = EvalReportTsv(lm);
  EXPECT_EQ(tsv.rfind("id\t", 0), 0u);
  EXPECT_NE(tsv.find("\nline00001\t"), std::string::npos);
}

TEST_F(EvaluationTest, ParallelDecodingIsDeterministic) {
  const auto items = Items(0.1);
  const EvalReport one = EvaluateSet(items, system_->graph, {}, 1);
  const EvalReport three = EvaluateSet(items, system_->graph, {}, 3);
  ASSERT_EQ(one.lines.size(), three.lines.size());
  for (size_t i = 0; i < one.lines.size(); ++i) {
    EXPECT_EQ(one.lines[i].hypothesis, three.lines[i].hypothesis);
  }
  EXPECT_DOUBLE_EQ(one.wer, three.wer);
}

TEST_F(EvaluationTest, CoverageOfTheGraphLexicon) {
  const EvalReport report = EvaluateSet(Items(0.0), system_->graph, {}, 1);
  EXPECT_DOUBLE_EQ(report.oov_rate, 0.0);
  EXPECT_DOUBLE_EQ(report.coverage_rate, 100.0);
  const auto lexicon = GraphLexicon(system_->graph);
  EXPECT_FALSE(lexicon.empty());
  for (const std::string& t : lexicon) EXPECT_NE(t, "<sp>");
}

TEST_F(EvaluationTest, SingletonGridReturnsItsConfig) {
  const auto items = Items(0.1);
  const std::vector<double> gammas = {0.7};
  const std::vector<double> betas = {1.5};
  const TuneResult r = TuneHyperparameters(items, system_->graph, gammas, betas, {});
  EXPECT_DOUBLE_EQ(r.best.gamma, 0.7);
  EXPECT_DOUBLE_EQ(r.best.beta, 1.5);
  ASSERT_EQ(r.grid.size(), 1u);
  EXPECT_DOUBLE_EQ(r.grid[0].wer, r.best_wer);
}

TEST_F(EvaluationTest, TuningPrefersSmallestOnTies) {
  const std::vector<double> gammas = {0.5, 1.0};
  const std::vector<double> betas = {1.0, 2.0};
  const TuneResult r = TuneHyperparameters(Items(0.0), system_->graph, gammas, betas, {});
  EXPECT_DOUBLE_EQ(r.best_wer, 0.0);
  EXPECT_DOUBLE_EQ(r.best.gamma, 0.5);
  EXPECT_DOUBLE_EQ(r.best.beta, 1.0);
  EXPECT_EQ(r.grid.size(), 4u);
}

TEST_F(EvaluationTest, TunedConfigIsNoWorseThanDefault) {
  const auto items = Items(0.15);
  const std::vector<double> gammas = {0.5, 1.0, 1.5};
  const std::vector<double> betas = {0.5, 1.0, 2.0};
  const TuneResult r = TuneHyperparameters(items, system_->graph, gammas, betas, {}, 2);
  const EvalReport base = EvaluateSet(items, system_->graph, {}, 1);
  EXPECT_LE(r.best_wer, base.wer + 1e-9);
}

}  // namespace
}  // namespace mgram
