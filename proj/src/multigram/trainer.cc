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

#include "mgram/multigram/trainer.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include "mgram/base/error.h"
#include "mgram/base/log.h"
#include "mgram/base/utf8.h"

namespace mgram {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// A distinct training word with unit ids resolved for every (end, length)
// cell, so the EM loop never touches strings.
struct CompiledWord {
  int length = 0;
  long count = 0;
  std::vector<int> unit_at;  // [(end - 1) * max_length + (d - 1)], -1 absent

  int Unit(int end, int d, int max_length) const {
    return unit_at[(end - 1) * max_length + (d - 1)];
  }
};

struct UnitIndex {
  std::vector<std::u32string> units;
  std::unordered_map<std::u32string, int> ids;

  int Intern(const std::u32string& unit) {
    auto [it, inserted] = ids.emplace(unit, static_cast<int>(units.size()));
    if (inserted) units.push_back(unit);
    return it->second;
  }
};

// Log-likelihood of one word and its posterior unit counts (scaled by the
// word's multiplicity) added into `counts`. Returns -inf when the word has
// no segmentation under `log_probs`.
double AccumulateWord(const CompiledWord& word, int max_length,
                      const std::vector<double>& log_probs,
                      std::vector<double>& alpha, std::vector<double>& beta,
                      std::vector<double>& counts) {
  const int T = word.length;
  alpha.assign(T + 1, kNegInf);
  beta.assign(T + 1, kNegInf);
  alpha[0] = 0.0;
  for (int t = 1; t <= T; ++t) {
    double acc = kNegInf;
    for (int d = 1; d <= std::min(max_length, t); ++d) {
      const int u = word.Unit(t, d, max_length);
      if (u < 0 || log_probs[u] == kNegInf) continue;
      acc = LogAdd(acc, alpha[t - d] + log_probs[u]);
    }
    alpha[t] = acc;
  }
  const double ll = alpha[T];
  if (ll == kNegInf) return ll;
  beta[T] = 0.0;
  for (int s = T - 1; s >= 0; --s) {
    double acc = kNegInf;
    for (int d = 1; d <= std::min(max_length, T - s); ++d) {
      const int u = word.Unit(s + d, d, max_length);
      if (u < 0 || log_probs[u] == kNegInf) continue;
      acc = LogAdd(acc, log_probs[u] + beta[s + d]);
    }
    beta[s] = acc;
  }
  for (int t = 1; t <= T; ++t) {
    for (int d = 1; d <= std::min(max_length, t); ++d) {
      const int u = word.Unit(t, d, max_length);
      if (u < 0 || log_probs[u] == kNegInf) continue;
      const double post = alpha[t - d] + log_probs[u] + beta[t] - ll;
      if (post == kNegInf) continue;
      counts[u] += static_cast<double>(word.count) * std::exp(post);
    }
  }
  return ll * static_cast<double>(word.count);
}

struct EStepResult {
  double log_likelihood = 0.0;
  std::vector<double> counts;
  size_t skipped = 0;
};

EStepResult EStep(const std::vector<CompiledWord>& words, int max_length,
                  const std::vector<double>& log_probs, int jobs) {
  const size_t n = words.size();
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<EStepResult> partial(jobs);
  auto work = [&](int shard) {
    EStepResult& r = partial[shard];
    r.counts.assign(log_probs.size(), 0.0);
    std::vector<double> alpha, beta;
    const size_t begin = n * shard / jobs;
    const size_t end = n * (shard + 1) / jobs;
    for (size_t i = begin; i < end; ++i) {
      const double ll =
          AccumulateWord(words[i], max_length, log_probs, alpha, beta, r.counts);
      if (ll == kNegInf) {
        ++r.skipped;
      } else {
        r.log_likelihood += ll;
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (int shard = 0; shard < jobs; ++shard) threads.emplace_back(work, shard);
  }
  EStepResult total = std::move(partial[0]);
  for (int shard = 1; shard < jobs; ++shard) {
    total.log_likelihood += partial[shard].log_likelihood;
    total.skipped += partial[shard].skipped;
    for (size_t u = 0; u < total.counts.size(); ++u) {
      total.counts[u] += partial[shard].counts[u];
    }
  }
  return total;
}

// Per-length relative frequencies; zero-count units get -inf.
std::vector<double> MStep(const UnitIndex& index,
                          const std::vector<double>& counts, int max_length) {
  std::vector<double> mass(max_length + 1, 0.0);
  for (size_t u = 0; u < counts.size(); ++u) {
    mass[index.units[u].size()] += counts[u];
  }
  std::vector<double> log_probs(counts.size(), kNegInf);
  for (size_t u = 0; u < counts.size(); ++u) {
    if (counts[u] > 0.0) {
      log_probs[u] = std::log(counts[u] / mass[index.units[u].size()]);
    }
  }
  return log_probs;
}

void CheckMaxLength(int max_length) {
  if (max_length < 1) Fail(ErrorCode::kInvalidArgument, "d_max must be >= 1");
}

// Log score of the unit word[begin, begin + d), or -inf.
template <typename UnitScore>
ViterbiResult RunViterbi(std::u32string_view word, int max_length,
                         UnitScore&& unit_score) {
  const int T = static_cast<int>(word.size());
  ViterbiResult result;
  auto& delta = result.trellis.delta;
  delta.assign(T + 1, std::vector<double>(max_length + 1, kNegInf));
  std::vector<double> best(T + 1, kNegInf);
  std::vector<int> best_length(T + 1, 0);
  best[0] = 0.0;
  for (int t = 1; t <= T; ++t) {
    for (int d = 1; d <= std::min(max_length, t); ++d) {
      if (best[t - d] == kNegInf) continue;
      const double s = unit_score(t - d, d);
      if (s == kNegInf) continue;
      delta[t][d] = best[t - d] + s;
      // Ascending d with >= keeps the longest unit among equal scores.
      if (delta[t][d] >= best[t]) {
        best[t] = delta[t][d];
        best_length[t] = d;
      }
    }
  }
  if (T > 0 && best[T] == kNegInf) {
    Fail(ErrorCode::kUnsegmentable,
         "word '" + U32ToUtf8(word) + "' has no segmentation");
  }
  result.score = best[T];
  result.segmentation.source_word = std::u32string(word);
  std::vector<std::u32string> reversed;
  for (int t = T; t > 0;) {
    const int d = best_length[t];
    reversed.emplace_back(word.substr(t - d, d));
    t -= d;
  }
  result.segmentation.units.assign(reversed.rbegin(), reversed.rend());
  return result;
}

}  // namespace

MultigramModel InitializeModel(std::span<const std::u32string> words,
                               int max_length, std::string language_tag) {
  CheckMaxLength(max_length);
  if (words.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot initialize from an empty word list");
  }
  std::map<std::u32string, double> counts;
  std::vector<double> per_length(max_length + 1, 0.0);
  for (const std::u32string& word : words) {
    const int T = static_cast<int>(word.size());
    for (int start = 0; start < T; ++start) {
      for (int d = 1; d <= std::min(max_length, T - start); ++d) {
        counts[word.substr(start, d)] += 1.0;
        per_length[d] += 1.0;
      }
    }
  }
  MultigramModel model(max_length, std::move(language_tag));
  for (auto& [unit, c] : counts) {
    model.SetProbability(unit, c / per_length[unit.size()]);
  }
  return model;
}

ForwardBackwardResult ForwardBackward(std::u32string_view word,
                                      const MultigramModel& model) {
  const int D = model.max_length();
  CompiledWord compiled;
  compiled.length = static_cast<int>(word.size());
  compiled.count = 1;
  compiled.unit_at.assign(compiled.length * D, -1);
  UnitIndex index;
  std::vector<double> log_probs;
  for (int t = 1; t <= compiled.length; ++t) {
    for (int d = 1; d <= std::min(D, t); ++d) {
      std::u32string unit(word.substr(t - d, d));
      const double p = model.Probability(unit);
      if (p <= 0.0) continue;
      const int id = index.Intern(unit);
      if (id == static_cast<int>(log_probs.size())) log_probs.push_back(std::log(p));
      compiled.unit_at[(t - 1) * D + (d - 1)] = id;
    }
  }
  ForwardBackwardResult result;
  std::vector<double> counts(log_probs.size(), 0.0);
  result.log_likelihood = AccumulateWord(compiled, D, log_probs,
                                         result.trellis.alpha,
                                         result.trellis.beta, counts);
  if (result.log_likelihood == kNegInf || compiled.length == 0) {
    if (compiled.length == 0) {
      Fail(ErrorCode::kUnsegmentable, "empty word");
    }
    Fail(ErrorCode::kUnsegmentable,
         "word '" + U32ToUtf8(word) + "' has no segmentation");
  }
  for (size_t u = 0; u < counts.size(); ++u) {
    result.expected_counts[index.units[u]] = counts[u];
  }
  return result;
}

EmResult EmTrain(std::span<const std::u32string> words, int max_length,
                 const EmOptions& options, std::string language_tag) {
  CheckMaxLength(max_length);
  if (options.max_iters < 1) {
    Fail(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  }
  if (!(options.rel_tol > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "rel_tol must be > 0");
  }
  std::map<std::u32string, long> distinct;
  for (const std::u32string& w : words) {
    if (!w.empty()) ++distinct[w];
  }
  if (distinct.empty()) {
    Fail(ErrorCode::kInvalidArgument, "no segmentable words to train on");
  }
  const MultigramModel initial =
      InitializeModel(words, max_length, language_tag);

  const int D = max_length;
  UnitIndex index;
  std::vector<double> log_probs;
  std::vector<CompiledWord> compiled;
  compiled.reserve(distinct.size());
  for (const auto& [w, c] : distinct) {
    CompiledWord cw;
    cw.length = static_cast<int>(w.size());
    cw.count = c;
    cw.unit_at.assign(cw.length * D, -1);
    for (int t = 1; t <= cw.length; ++t) {
      for (int d = 1; d <= std::min(D, t); ++d) {
        std::u32string unit = w.substr(t - d, d);
        const int id = index.Intern(unit);
        if (id == static_cast<int>(log_probs.size())) {
          log_probs.push_back(std::log(initial.Probability(unit)));
        }
        cw.unit_at[(t - 1) * D + (d - 1)] = id;
      }
    }
    compiled.push_back(std::move(cw));
  }

  EmResult result;
  EStepResult e = EStep(compiled, D, log_probs, options.jobs);
  if (e.skipped == compiled.size()) {
    Fail(ErrorCode::kUnsegmentable, "no segmentable words to train on");
  }
  if (e.skipped > 0) {
    LogWarning(fmt::format("EM: skipped {} unsegmentable words", e.skipped));
  }
  result.skipped_words = e.skipped;
  result.log_likelihoods.push_back(e.log_likelihood);
  for (int it = 1; it <= options.max_iters; ++it) {
    log_probs = MStep(index, e.counts, D);
    const double previous = e.log_likelihood;
    e = EStep(compiled, D, log_probs, options.jobs);
    result.log_likelihoods.push_back(e.log_likelihood);
    result.iterations = it;
    const double improvement =
        (e.log_likelihood - previous) / std::max(std::abs(previous), 1e-300);
    if (improvement < options.rel_tol) break;
  }

  result.model = MultigramModel(max_length, std::move(language_tag));
  for (size_t u = 0; u < log_probs.size(); ++u) {
    if (log_probs[u] == kNegInf) continue;
    result.model.SetProbability(index.units[u],
                                std::min(1.0, std::exp(log_probs[u])));
  }
  return result;
}

ViterbiResult ViterbiDecode(std::u32string_view word,
                            const MultigramModel& model, bool length_penalty,
                            bool floor_unseen_characters) {
  const double floor_log = std::log(kUnseenCharacterProbability);
  return RunViterbi(word, model.max_length(), [&](int begin, int d) {
    const double p = model.Probability(word.substr(begin, d));
    double s;
    if (p > 0.0) {
      s = std::log(p);
    } else if (floor_unseen_characters && d == 1) {
      s = floor_log;
    } else {
      return kNegInf;
    }
    return length_penalty ? s / d : s;
  });
}

Segmentation ViterbiSegment(std::u32string_view word,
                            const MultigramModel& model, bool length_penalty) {
  return ViterbiDecode(word, model, length_penalty).segmentation;
}

MultigramModel PruneModel(const MultigramModel& model, double min_prob) {
  if (!(min_prob >= 0.0 && min_prob < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "min_prob must lie in [0, 1)");
  }
  if (min_prob == 0.0) return model;
  MultigramModel pruned(model.max_length(), model.language_tag());
  for (const auto& [unit, p] : model.emissions()) {
    if (unit.size() == 1 || p >= min_prob) pruned.SetProbability(unit, p);
  }
  pruned.Renormalize();
  return pruned;
}

std::vector<std::string> TokenizeLine(const CorpusLine& line,
                                      const MultigramModel& model) {
  std::vector<std::string> tokens;
  for (const auto& chunk : SplitChunks(line)) {
    if (!tokens.empty()) tokens.emplace_back(kWordBoundaryToken);
    for (const std::u32string& piece : chunk) {
      ViterbiResult best = ViterbiDecode(piece, model, /*length_penalty=*/true,
                                         /*floor_unseen_characters=*/true);
      for (const auto& unit : best.segmentation.units) {
        tokens.push_back(U32ToUtf8(unit));
      }
    }
  }
  return tokens;
}

std::vector<std::vector<std::string>> TokenizeCorpus(
    std::span<const CorpusLine> lines, std::span<const MultigramModel> models) {
  if (models.empty()) {
    Fail(ErrorCode::kInvalidArgument, "tokenization needs at least one model");
  }
  std::vector<std::vector<std::string>> out;
  out.reserve(lines.size());
  for (const CorpusLine& line : lines) {
    const MultigramModel* chosen = &models.front();
    if (models.size() > 1) {
      chosen = nullptr;
      for (const MultigramModel& m : models) {
        if (m.language_tag() == line.language_tag) chosen = &m;
      }
      if (chosen == nullptr) {
        Fail(ErrorCode::kInvalidArgument,
             "no multigram model for language '" + line.language_tag + "'");
      }
    }
    out.push_back(TokenizeLine(line, *chosen));
  }
  return out;
}

std::vector<std::vector<std::string>> TokenizeCorpus(
    std::span<const CorpusLine> lines, const MultigramModel& model) {
  return TokenizeCorpus(lines, std::span<const MultigramModel>(&model, 1));
}

std::map<std::u32string, long> CountWords(std::span<const CorpusLine> lines) {
  std::map<std::u32string, long> counts;
  for (const CorpusLine& line : lines) {
    for (auto& w : SplitWords(line)) ++counts[w];
  }
  return counts;
}

std::vector<std::u32string> CorpusWords(std::span<const CorpusLine> lines) {
  std::vector<std::u32string> words;
  for (const CorpusLine& line : lines) {
    for (auto& w : SplitWords(line)) words.push_back(std::move(w));
  }
  return words;
}

}  // namespace mgram
