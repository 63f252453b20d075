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

#ifndef MGRAM_MULTIGRAM_TRAINER_H_
#define MGRAM_MULTIGRAM_TRAINER_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgram/multigram/model.h"
#include "mgram/text/corpus.h"

namespace mgram {

inline constexpr std::string_view kWordBoundaryToken = "<sp>";

// Probability given to characters the model has never seen when a word
// must still be tokenized.
inline constexpr double kUnseenCharacterProbability = 1e-10;

// Every substring of length <= max_length gets P(u | d) proportional to its
// occurrence count among all length-d substrings.
MultigramModel InitializeModel(std::span<const std::u32string> words,
                               int max_length,
                               std::string language_tag = "");

// Dynamic-programming tables for one word of length T. Index t is the
// number of characters consumed; `delta[t][d]` is the best log score of a
// prefix of length t whose last unit has length d (-inf if unreachable).
struct TrellisState {
  std::vector<double> alpha;  // log P(O_1..t), size T + 1
  std::vector<double> beta;   // log P(O_t+1..T), size T + 1
  std::vector<std::vector<double>> delta;
};

struct ForwardBackwardResult {
  TrellisState trellis;
  double log_likelihood = 0.0;
  std::map<std::u32string, double> expected_counts;
};

// Sums over every segmentation of `word`. Throws Error(kUnsegmentable) when
// no segmentation exists.
ForwardBackwardResult ForwardBackward(std::u32string_view word,
                                      const MultigramModel& model);

struct EmOptions {
  int max_iters = 50;
  double rel_tol = 1e-6;
  int jobs = 1;
};

struct EmResult {
  MultigramModel model;
  // Corpus log-likelihood under the initial model, then after each M-step.
  std::vector<double> log_likelihoods;
  int iterations = 0;
  size_t skipped_words = 0;
};

EmResult EmTrain(std::span<const std::u32string> words, int max_length,
                 const EmOptions& options = {},
                 std::string language_tag = "");

struct ViterbiResult {
  Segmentation segmentation;
  TrellisState trellis;  // only delta is filled
  double score = 0.0;    // log domain, penalized when requested
};

// Best segmentation. With `length_penalty` each unit contributes
// log P(u | d) / d. Ties prefer the longer final unit.
ViterbiResult ViterbiDecode(std::u32string_view word,
                            const MultigramModel& model, bool length_penalty,
                            bool floor_unseen_characters = false);

Segmentation ViterbiSegment(std::u32string_view word,
                            const MultigramModel& model,
                            bool length_penalty = true);

// Drops units below `min_prob` (length-1 units always stay) and
// renormalizes each length.
MultigramModel PruneModel(const MultigramModel& model, double min_prob);

// Word pieces are segmented with the length penalty on; pieces of one
// whitespace chunk are concatenated and chunks are joined by `<sp>`.
std::vector<std::string> TokenizeLine(const CorpusLine& line,
                                      const MultigramModel& model);

// Picks, for every line, the model whose language tag matches; a single
// model is used for every line.
std::vector<std::vector<std::string>> TokenizeCorpus(
    std::span<const CorpusLine> lines, std::span<const MultigramModel> models);

std::vector<std::vector<std::string>> TokenizeCorpus(
    std::span<const CorpusLine> lines, const MultigramModel& model);

// Occurrence count of every word piece in the corpus.
std::map<std::u32string, long> CountWords(std::span<const CorpusLine> lines);

// Every word piece, in corpus order.
std::vector<std::u32string> CorpusWords(std::span<const CorpusLine> lines);

}  // namespace mgram

#endif  // MGRAM_MULTIGRAM_TRAINER_H_
