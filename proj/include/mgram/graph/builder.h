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

#ifndef MGRAM_GRAPH_BUILDER_H_
#define MGRAM_GRAPH_BUILDER_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgram/fst/transducer.h"
#include "mgram/lm/ngram.h"
#include "mgram/text/corpus.h"

namespace mgram {

inline constexpr std::string_view kBlankSymbol = "<blk>";
inline constexpr std::string_view kBackoffSymbol = "#0";

// <eps>, <blk>, then one symbol per inventory character in sorted order.
// Label l corresponds to lattice column l - 1.
std::shared_ptr<SymbolTable> MakeCharacterTable(
    const CharacterInventory& inventory);

// <eps>, the given tokens in order, then the backoff symbol #0.
std::shared_ptr<SymbolTable> MakeTokenTable(std::span<const std::string> tokens);

// Tokens an LM can emit: its vocabulary without <s>, </s> and <unk>.
std::vector<std::string> PredictableTokens(const NgramModel& model);

// Characters spelled by a token: its own text, or a space for <sp>.
std::u32string TokenSpelling(std::string_view token);

// CTC collapse: blank loops, repeat loops and character changes. Every
// state is final and every arc weighs 0.
Transducer BuildTokenFst(const CharacterInventory& inventory);

// Closure over token spellings with the token emitted on the first
// character. Spellings that are prefixes of others or duplicated get a
// trailing #k. Tokens missing from `tokens` are skipped.
Transducer BuildLexiconFst(std::span<const std::string> lexicon,
                           const CharacterInventory& inventory,
                           std::shared_ptr<const SymbolTable> tokens);

// Backoff acceptor over `tokens` (which must end with #0). Backoff arcs read
// #0 and write epsilon. Weights are -ln P.
Transducer BuildGrammarFst(const NgramModel& model,
                           std::shared_ptr<const SymbolTable> tokens);

struct GraphMetadata {
  std::string lexicon_type;
  int lm_order = 0;
  size_t charset_size = 0;
  int64_t timestamp = 0;
};

struct SearchGraph {
  Transducer graph;
  GraphMetadata metadata;
};

// T o (Min(Det(L o G)) with disambiguation symbols mapped to epsilon).
SearchGraph BuildSearchGraph(const Transducer& token_fst,
                             const Transducer& lexicon_fst,
                             const Transducer& grammar_fst,
                             GraphMetadata metadata);

// Convenience wrapper over the three builders.
SearchGraph BuildSearchGraph(const NgramModel& model,
                             std::span<const std::string> lexicon,
                             const CharacterInventory& inventory,
                             GraphMetadata metadata);

struct GraphStats {
  size_t states = 0;
  size_t arcs = 0;
  size_t bytes = 0;
};

GraphStats ComputeGraphStats(const Transducer& graph);

// Writes graph.fst, isyms.txt, osyms.txt and meta.txt into `dir`.
void WriteSearchGraph(const SearchGraph& graph,
                      const std::filesystem::path& dir);
SearchGraph ReadSearchGraph(const std::filesystem::path& dir);
// Stats from the files in `dir` without rebuilding.
GraphStats ReadGraphStats(const std::filesystem::path& dir);

}  // namespace mgram

#endif  // MGRAM_GRAPH_BUILDER_H_
