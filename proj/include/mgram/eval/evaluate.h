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

#ifndef MGRAM_EVAL_EVALUATE_H_
#define MGRAM_EVAL_EVALUATE_H_

#include <span>
#include <string>
#include <vector>

#include "mgram/decoder/decoder.h"
#include "mgram/emulator/lattice.h"
#include "mgram/eval/metrics.h"
#include "mgram/graph/builder.h"

namespace mgram {

struct EvalItem {
  std::string id;
  PosteriorLattice lattice;
  std::string reference;  // UTF-8
};

struct LineResult {
  std::string id;
  std::string reference;
  std::string hypothesis;
  EditCounts word_errors;
  EditCounts char_errors;
  bool failed = false;
  std::string error;
};

struct EvalReport {
  ErrorRate word_rate;
  ErrorRate char_rate;
  double wer = 0.0;
  double cer = 0.0;
  double oov_rate = 0.0;
  double coverage_rate = 0.0;
  std::vector<LineResult> lines;
  size_t failed_lines = 0;
  double decode_seconds = 0.0;
  GraphStats graph_stats;
};

// Loads every lattice named by the manifest using the graph's label table.
std::vector<EvalItem> LoadEvalItems(std::span<const ManifestEntry> manifest,
                                    const SearchGraph& graph);

// Decodes every item on `jobs` threads. Lines that fail to decode are kept
// in `lines` with their error and left out of the pooled rates. OOV and
// coverage are measured against the graph's output tokens.
EvalReport EvaluateSet(std::span<const EvalItem> items,
                       const SearchGraph& graph, const DecodeConfig& config,
                       size_t jobs = 1);

// Same metrics for the LM-free greedy collapse.
EvalReport EvaluateGreedy(std::span<const EvalItem> items);

// Distinct tokens a graph can emit, excluding <sp> and auxiliary symbols.
std::vector<std::string> GraphLexicon(const SearchGraph& graph);

std::string FormatEvalReport(const EvalReport& report);
// Header row, then one row per line: id, word errors, reference words,
// char errors, reference chars, status, hypothesis.
std::string EvalReportTsv(const EvalReport& report);

struct ComplexityRow {
  std::string name;
  GraphStats stats;
};

// Aligned table with the states+arcs reduction relative to the row named
// "words", or to the first row when there is none.
std::string FormatComplexityReport(std::span<const ComplexityRow> rows);
std::string ComplexityReportTsv(std::span<const ComplexityRow> rows);
double StatesArcsReduction(const GraphStats& candidate,
                           const GraphStats& reference);

struct Scenario {
  std::string name;
  const SearchGraph* graph = nullptr;
  std::vector<EvalItem> items;
};

std::vector<EvalReport> RunScenarios(std::span<const Scenario> scenarios,
                                     const DecodeConfig& config,
                                     size_t jobs = 1);
std::string FormatScenarioTable(std::span<const Scenario> scenarios,
                                std::span<const EvalReport> reports);

struct TuneResult {
  DecodeConfig best;
  double best_wer = 0.0;
  struct Cell {
    double gamma;
    double beta;
    double wer;
  };
  std::vector<Cell> grid;
};

// Exhaustive grid search minimizing pooled WER. Failed lines count as empty
// hypotheses. Ties go to the smaller gamma, then the smaller beta.
TuneResult TuneHyperparameters(std::span<const EvalItem> dev,
                               const SearchGraph& graph,
                               std::span<const double> gammas,
                               std::span<const double> betas,
                               const DecodeConfig& base, size_t jobs = 1);

}  // namespace mgram

#endif  // MGRAM_EVAL_EVALUATE_H_
