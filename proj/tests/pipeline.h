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

#ifndef MGRAM_TESTS_PIPELINE_H_
#define MGRAM_TESTS_PIPELINE_H_

#include <span>
#include <string>
#include <vector>

#include "mgram/emulator/lattice.h"
#include "mgram/eval/evaluate.h"
#include "mgram/graph/builder.h"
#include "mgram/lm/ngram.h"
#include "mgram/lm/tokenize.h"
#include "mgram/multigram/model.h"
#include "mgram/text/corpus.h"

namespace mgram::testing {

// One trained recognizer: token lexicon, LM and search graph.
struct System {
  std::string name;
  std::vector<std::string> lexicon;  // sorted, without <sp>
  NgramModel model;
  SearchGraph graph;
};

// Trains an EM multigram model per language tag found in `lines`.
std::vector<MultigramModel> TrainMultigrams(std::span<const CorpusLine> lines,
                                            int max_length, int max_iters = 10);

struct TokenizedCorpus {
  std::vector<std::vector<std::string>> sequences;
  std::vector<std::string> lexicon;  // sorted, without <sp>
};

// `models` is used only for the multigram type; their single-character units
// always join the lexicon.
TokenizedCorpus Tokenize(std::span<const CorpusLine> lines, LexiconType type,
                         std::span<const MultigramModel> models);

// Tokenizes `lines`, trains an LM of `order` over the tokens and builds the
// graph.
System BuildSystem(std::span<const CorpusLine> lines, LexiconType type,
                   std::span<const MultigramModel> models, int order,
                   const CharacterInventory& inventory, std::string name);

// One synthetic lattice per line; line i uses seed noise.seed + i.
std::vector<EvalItem> SynthesizeItems(std::span<const CorpusLine> lines,
                                      const CharacterInventory& inventory,
                                      const NoiseSpec& noise);

}  // namespace mgram::testing

#endif  // MGRAM_TESTS_PIPELINE_H_
