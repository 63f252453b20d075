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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "mgram/base/error.h"
#include "mgram/base/utf8.h"
#include "mgram/lm/ngram.h"
#include "mgram/text/corpus.h"

namespace mgram {
namespace {

constexpr std::string_view kSpToken = "<sp>";

// Runs fn(i) for i in [0, n) on up to `jobs` threads, striding by job.
template <typename Fn>
void ParallelFor(size_t n, size_t jobs, Fn fn) {
  jobs = std::max<size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  for (size_t k = 0; k < jobs; ++k) {
    workers.emplace_back([&, k] {
      for (size_t i = k; i < n; i += jobs) fn(i);
    });
  }
}

void Score(LineResult* line) {
  const auto r = WordsOf(line->reference);
  const auto h = WordsOf(line->hypothesis);
  line->word_errors = EditDistance(r, h);
  line->char_errors =
      EditDistance(Utf8ToU32(line->reference), Utf8ToU32(line->hypothesis));
}

void Summarize(EvalReport* report) {
  std::vector<std::pair<std::string, std::string>> pairs;
  report->failed_lines = 0;
  for (const LineResult& line : report->lines) {
    if (line.failed) {
      ++report->failed_lines;
      continue;
    }
    pairs.emplace_back(line.reference, line.hypothesis);
  }
  if (pairs.empty()) {
    report->wer = report->cer = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  report->word_rate = WordErrorRate(pairs);
  report->char_rate = CharacterErrorRate(pairs);
  report->wer = report->word_rate.percent;
  report->cer = report->char_rate.percent;
}

void FillOov(std::span<const EvalItem> items, const SearchGraph& graph,
             EvalReport* report) {
  std::set<std::u32string, std::less<>> units;
  for (const std::string& token : GraphLexicon(graph)) {
    units.insert(Utf8ToU32(token));
  }
  std::vector<std::u32string> words;
  for (const EvalItem& item : items) {
    CorpusLine line{Utf8ToU32(NormalizeUtf8(item.reference)), ""};
    for (std::u32string& w : SplitWords(line)) words.push_back(std::move(w));
  }
  if (words.empty()) return;
  const OovCoverage oov = OovAndCoverage(units, words);
  report->oov_rate = oov.oov_rate;
  report->coverage_rate = oov.coverage_rate;
}

}  // namespace

std::vector<EvalItem> LoadEvalItems(std::span<const ManifestEntry> manifest,
                                    const SearchGraph& graph) {
  const auto& isyms = graph.graph.input_symbols();
  if (!isyms) {
    Fail(ErrorCode::kInvalidArgument, "search graph has no input symbols");
  }
  const std::vector<std::string> labels(isyms->symbols().begin() + 1,
                                        isyms->symbols().end());
  std::vector<EvalItem> items;
  for (const ManifestEntry& e : manifest) {
    items.push_back({e.id, ReadLattice(e.lattice, labels), e.reference});
  }
  return items;
}

std::vector<std::string> GraphLexicon(const SearchGraph& graph) {
  std::vector<std::string> tokens;
  const auto& osyms = graph.graph.output_symbols();
  if (!osyms) return tokens;
  std::set<Label> used;
  for (StateId s = 0; s < static_cast<StateId>(graph.graph.NumStates()); ++s) {
    for (const Arc& arc : graph.graph.Arcs(s)) {
      if (arc.olabel != kEpsilon) used.insert(arc.olabel);
    }
  }
  for (Label l : used) {
    const std::string& token = osyms->Symbol(l);
    if (token == kSpToken || token == kBackoffSymbol) continue;
    tokens.push_back(token);
  }
  return tokens;
}

EvalReport EvaluateSet(std::span<const EvalItem> items,
                       const SearchGraph& graph, const DecodeConfig& config,
                       size_t jobs) {
  ValidateDecodeConfig(config);
  EvalReport report;
  report.lines.resize(items.size());
  const auto start = std::chrono::steady_clock::now();
  ParallelFor(items.size(), jobs, [&](size_t i) {
    LineResult& line = report.lines[i];
    line.id = items[i].id;
    line.reference = NormalizeUtf8(items[i].reference);
    try {
      const auto hyps = DecodeLattice(items[i].lattice, graph.graph, config);
      line.hypothesis = hyps.front().text;
      Score(&line);
    } catch (const Error& e) {
      line.failed = true;
      line.error = e.what();
    }
  });
  report.decode_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  Summarize(&report);
  FillOov(items, graph, &report);
  report.graph_stats = {graph.graph.NumStates(), graph.graph.NumArcs(), 0};
  return report;
}

EvalReport EvaluateGreedy(std::span<const EvalItem> items) {
  EvalReport report;
  const auto start = std::chrono::steady_clock::now();
  for (const EvalItem& item : items) {
    LineResult line;
    line.id = item.id;
    line.reference = NormalizeUtf8(item.reference);
    line.hypothesis = NormalizeUtf8(U32ToUtf8(GreedyCollapse(item.lattice)));
    Score(&line);
    report.lines.push_back(std::move(line));
  }
  report.decode_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  Summarize(&report);
  return report;
}

std::string FormatEvalReport(const EvalReport& report) {
  std::string out;
  out += fmt::format("WER        {:.2f} %  ({} errors / {} words)\n", report.wer,
                     report.word_rate.counts.distance,
                     report.word_rate.reference_length);
  out += fmt::format("CER        {:.2f} %  ({} errors / {} characters)\n",
                     report.cer, report.char_rate.counts.distance,
                     report.char_rate.reference_length);
  // Greedy reports have no graph, so lexicon rates are undefined.
  if (report.graph_stats.states > 0) {
    out += fmt::format("OOV        {:.2f} %\n", report.oov_rate);
    out += fmt::format("coverage   {:.2f} %\n", report.coverage_rate);
  }
  out += fmt::format("lines      {} ({} failed)\n", report.lines.size(),
                     report.failed_lines);
  out += fmt::format("decode     {}\n",
                     FormatMinutesSeconds(report.decode_seconds));
  if (report.graph_stats.states > 0) {
    out += fmt::format("graph      {} states, {} arcs\n",
                       report.graph_stats.states, report.graph_stats.arcs);
  }
  return out;
}

std::string EvalReportTsv(const EvalReport& report) {
  std::string out =
      "id\tword_errors\tref_words\tchar_errors\tref_chars\tstatus\thypothesis\n";
  for (const LineResult& line : report.lines) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", line.id,
                       line.word_errors.distance, WordsOf(line.reference).size(),
                       line.char_errors.distance,
                       Utf8ToU32(line.reference).size(),
                       line.failed ? "failed" : "ok",
                       line.failed ? line.error : line.hypothesis);
  }
  return out;
}

double StatesArcsReduction(const GraphStats& candidate,
                           const GraphStats& reference) {
  const double ref = static_cast<double>(reference.states + reference.arcs);
  if (ref == 0.0) return 0.0;
  return 100.0 *
         (1.0 - static_cast<double>(candidate.states + candidate.arcs) / ref);
}

namespace {

const GraphStats& ReferenceRow(std::span<const ComplexityRow> rows) {
  for (const ComplexityRow& row : rows) {
    if (row.name == "words") return row.stats;
  }
  return rows.front().stats;
}

}  // namespace

std::string FormatComplexityReport(std::span<const ComplexityRow> rows) {
  std::string out = fmt::format("{:<12} {:>12} {:>12} {:>14} {:>10}\n",
                                "lexicon", "states", "arcs", "bytes",
                                "reduction");
  if (rows.empty()) return out;
  const GraphStats& ref = ReferenceRow(rows);
  for (const ComplexityRow& row : rows) {
    out += fmt::format("{:<12} {:>12} {:>12} {:>14} {:>9.1f}%\n", row.name,
                       row.stats.states, row.stats.arcs, row.stats.bytes,
                       StatesArcsReduction(row.stats, ref));
  }
  return out;
}

std::string ComplexityReportTsv(std::span<const ComplexityRow> rows) {
  std::string out = "lexicon\tstates\tarcs\tbytes\treduction_percent\n";
  if (rows.empty()) return out;
  const GraphStats& ref = ReferenceRow(rows);
  for (const ComplexityRow& row : rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{:.4f}\n", row.name, row.stats.states,
                       row.stats.arcs, row.stats.bytes,
                       StatesArcsReduction(row.stats, ref));
  }
  return out;
}

std::vector<EvalReport> RunScenarios(std::span<const Scenario> scenarios,
                                     const DecodeConfig& config, size_t jobs) {
  std::vector<EvalReport> reports;
  for (const Scenario& s : scenarios) {
    if (s.graph == nullptr) {
      Fail(ErrorCode::kInvalidArgument, "scenario '" + s.name + "' has no graph");
    }
    reports.push_back(EvaluateSet(s.items, *s.graph, config, jobs));
  }
  return reports;
}

std::string FormatScenarioTable(std::span<const Scenario> scenarios,
                                std::span<const EvalReport> reports) {
  std::string out = fmt::format("{:<16} {:>8} {:>8} {:>8} {:>10} {:>10}\n",
                                "scenario", "WER %", "CER %", "OOV %",
                                "coverage", "time");
  for (size_t i = 0; i < scenarios.size() && i < reports.size(); ++i) {
    const EvalReport& r = reports[i];
    out += fmt::format("{:<16} {:>8.2f} {:>8.2f} {:>8.2f} {:>10.2f} {:>10}\n",
                       scenarios[i].name, r.wer, r.cer, r.oov_rate,
                       r.coverage_rate, FormatMinutesSeconds(r.decode_seconds));
  }
  return out;
}

TuneResult TuneHyperparameters(std::span<const EvalItem> dev,
                               const SearchGraph& graph,
                               std::span<const double> gammas,
                               std::span<const double> betas,
                               const DecodeConfig& base, size_t jobs) {
  if (dev.empty()) Fail(ErrorCode::kInvalidArgument, "tune: empty dev set");
  if (gammas.empty() || betas.empty()) {
    Fail(ErrorCode::kInvalidArgument, "tune: empty gamma or beta grid");
  }
  std::vector<double> gs(gammas.begin(), gammas.end());
  std::vector<double> bs(betas.begin(), betas.end());
  std::sort(gs.begin(), gs.end());
  std::sort(bs.begin(), bs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());

  TuneResult result;
  result.best_wer = std::numeric_limits<double>::infinity();
  for (double g : gs) {
    for (double b : bs) {
      DecodeConfig config = base;
      config.gamma = g;
      config.beta = b;
      config.n_best = 1;
      ValidateDecodeConfig(config);
      std::vector<std::pair<std::string, std::string>> pairs(dev.size());
      ParallelFor(dev.size(), jobs, [&](size_t i) {
        pairs[i].first = NormalizeUtf8(dev[i].reference);
        try {
          pairs[i].second =
              DecodeLattice(dev[i].lattice, graph.graph, config).front().text;
        } catch (const Error&) {
          pairs[i].second.clear();
        }
      });
      const double wer = WordErrorRate(pairs).percent;
      result.grid.push_back({g, b, wer});
      if (wer < result.best_wer) {
        result.best_wer = wer;
        result.best = config;
        result.best.n_best = base.n_best;
      }
    }
  }
  return result;
}

}  // namespace mgram
