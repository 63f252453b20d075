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

#include "mgram/lm/ngram.h"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "mgram/base/error.h"
#include "mgram/base/log.h"
#include "mgram/multigram/trainer.h"

namespace mgram {

Vocabulary::Vocabulary() {
  Add(kSentenceStart);
  Add(kSentenceEnd);
  Add(kUnknownToken);
  Add(kWordBoundaryToken);
}

int Vocabulary::Add(std::string_view token) {
  auto [it, inserted] =
      ids_.emplace(std::string(token), static_cast<int>(tokens_.size()));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

int Vocabulary::Find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? -1 : it->second;
}

int Vocabulary::FindOrUnk(std::string_view token) const {
  const int id = Find(token);
  return id < 0 ? kUnk : id;
}

NgramModel::NgramModel(int order, Vocabulary vocabulary)
    : order_(order), vocabulary_(std::move(vocabulary)), tables_(order) {
  if (order < 1) Fail(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
}

const NgramEntry* NgramModel::Find(std::span<const int32_t> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return nullptr;
  const auto& table = tables_[ngram.size() - 1];
  auto it = table.find(Ngram(ngram.begin(), ngram.end()));
  return it == table.end() ? nullptr : &it->second;
}

void NgramModel::Set(Ngram ngram, const NgramEntry& entry) {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) {
    Fail(ErrorCode::kInvalidArgument, "n-gram length outside 1..order");
  }
  tables_[ngram.size() - 1][std::move(ngram)] = entry;
}

void NgramModel::SetBackoff(const Ngram& context, double log10_backoff) {
  auto& table = tables_.at(context.size() - 1);
  auto it = table.find(context);
  if (it == table.end()) {
    Fail(ErrorCode::kInternal, "backoff weight for a context without entry");
  }
  it->second.log10_backoff = log10_backoff;
  it->second.has_backoff = true;
}

double NgramModel::ConditionalLog10(std::span<const int32_t> history,
                                    int32_t word) const {
  if (static_cast<int>(history.size()) > order_ - 1) {
    history = history.subspan(history.size() - (order_ - 1));
  }
  Ngram key;
  key.reserve(order_);
  double backoff = 0.0;
  for (size_t start = 0; start <= history.size(); ++start) {
    key.assign(history.begin() + start, history.end());
    key.push_back(word);
    const auto& table = tables_[key.size() - 1];
    auto it = table.find(key);
    if (it != table.end()) return backoff + it->second.log10_prob;
    if (start < history.size()) {
      key.pop_back();
      const auto& ctx_table = tables_[key.size() - 1];
      auto ctx = ctx_table.find(key);
      if (ctx != ctx_table.end() && ctx->second.has_backoff) {
        backoff += ctx->second.log10_backoff;
      }
    }
  }
  Fail(ErrorCode::kInternal,
       "token '" + vocabulary_.Token(word) + "' has no unigram entry");
}

double NgramModel::ScoreSequence(std::span<const std::string> tokens) const {
  Ngram ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(Vocabulary::kBos);
  for (const std::string& t : tokens) {
    int id = vocabulary_.Find(t);
    if (id < 0 || Find(std::span<const int32_t>(&id, 1)) == nullptr) {
      id = Vocabulary::kUnk;
    }
    ids.push_back(id);
  }
  ids.push_back(Vocabulary::kEos);
  double total = 0.0;
  for (size_t i = 1; i < ids.size(); ++i) {
    total += ConditionalLog10(std::span<const int32_t>(ids.data(), i), ids[i]);
  }
  return total;
}

NgramCounts CountNgrams(std::span<const std::vector<std::string>> sequences,
                        int order, bool concatenate,
                        std::span<const std::string> extra_vocabulary) {
  if (order < 1) Fail(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
  if (sequences.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot count n-grams of an empty corpus");
  }
  NgramCounts counts;
  counts.order = order;
  counts.counts.resize(order);
  for (const std::string& t : extra_vocabulary) counts.vocabulary.Add(t);
  auto count_stream = [&](const std::vector<int32_t>& stream) {
    Ngram g;
    for (size_t end = 1; end <= stream.size(); ++end) {
      for (int k = 1; k <= order && static_cast<size_t>(k) <= end; ++k) {
        g.assign(stream.begin() + (end - k), stream.begin() + end);
        ++counts.counts[k - 1][g];
      }
    }
  };
  std::vector<int32_t> stream;
  auto append = [&](const std::vector<std::string>& seq) {
    for (const std::string& t : seq) stream.push_back(counts.vocabulary.Add(t));
  };
  if (concatenate) {
    stream.push_back(Vocabulary::kBos);
    bool first = true;
    for (const auto& seq : sequences) {
      if (!first) stream.push_back(Vocabulary::kSp);
      first = false;
      append(seq);
    }
    stream.push_back(Vocabulary::kEos);
    count_stream(stream);
  } else {
    for (const auto& seq : sequences) {
      stream.clear();
      stream.push_back(Vocabulary::kBos);
      append(seq);
      stream.push_back(Vocabulary::kEos);
      count_stream(stream);
    }
  }
  return counts;
}

namespace {

struct Discounts {
  std::array<double, 4> d{0.0, 0.0, 0.0, 0.0};  // d[c] for c = 1, 2, 3+

  double For(int64_t count) const {
    return d[std::min<int64_t>(count, 3)];
  }
};

Discounts ComputeDiscounts(const NgramMap<int64_t>& adjusted, int order) {
  std::array<int64_t, 5> n{0, 0, 0, 0, 0};
  for (const auto& [g, c] : adjusted) {
    if (c >= 1 && c <= 4) ++n[c];
  }
  Discounts out;
  if (n[1] == 0 || n[2] == 0) {
    LogWarning(fmt::format(
        "Kneser-Ney: degenerate count-of-counts at order {} (n1={}, n2={}); "
        "using absolute discount 0.5",
        order, n[1], n[2]));
    out.d = {0.0, 0.5, 0.5, 0.5};
    return out;
  }
  const double y = static_cast<double>(n[1]) / (n[1] + 2.0 * n[2]);
  out.d[1] = 1.0 - 2.0 * y * n[2] / n[1];
  out.d[2] = 2.0 - 3.0 * y * n[3] / n[2];
  out.d[3] = n[3] > 0 ? 3.0 - 4.0 * y * n[4] / n[3] : out.d[2];
  for (int c = 1; c <= 3; ++c) out.d[c] = std::clamp(out.d[c], 0.0, double(c));
  return out;
}

struct ContextStats {
  int64_t total = 0;
  std::array<int64_t, 4> n{0, 0, 0, 0};  // n[c] for c = 1, 2, 3+
};

}  // namespace

NgramModel EstimateKneserNey(const NgramCounts& counts) {
  const int order = counts.order;
  if (order < 1 || counts.counts.size() != static_cast<size_t>(order) ||
      counts.counts[0].empty()) {
    Fail(ErrorCode::kInvalidArgument, "empty n-gram counts");
  }
  const Vocabulary& vocab = counts.vocabulary;

  // Highest order keeps raw counts; lower orders use the number of distinct
  // left extensions, except n-grams anchored at <s>.
  std::vector<NgramMap<int64_t>> adjusted(order);
  adjusted[order - 1] = counts.counts[order - 1];
  for (int k = order - 1; k >= 1; --k) {
    auto& level = adjusted[k - 1];
    for (const auto& [g, c] : counts.counts[k - 1]) {
      if (g[0] == Vocabulary::kBos) level[g] = c;
    }
    for (const auto& [g, c] : counts.counts[k]) {
      if (c <= 0) continue;
      Ngram suffix(g.begin() + 1, g.end());
      if (suffix[0] == Vocabulary::kBos) continue;
      ++level[suffix];
    }
  }
  // <s> is never predicted.
  for (auto& level : adjusted) {
    for (auto it = level.begin(); it != level.end();) {
      if (it->first.back() == Vocabulary::kBos) {
        it = level.erase(it);
      } else {
        ++it;
      }
    }
  }

  NgramModel model(order, vocab);
  const double predictable = static_cast<double>(vocab.size() - 1);
  const double uniform = 1.0 / predictable;

  // Unigrams interpolate with the uniform base distribution.
  {
    const auto& level = adjusted[0];
    const Discounts disc = ComputeDiscounts(level, 1);
    ContextStats stats;
    for (const auto& [g, c] : level) {
      stats.total += c;
      ++stats.n[std::min<int64_t>(c, 3)];
    }
    double gamma = 1.0;
    if (stats.total > 0) {
      gamma = (disc.d[1] * stats.n[1] + disc.d[2] * stats.n[2] +
               disc.d[3] * stats.n[3]) /
              static_cast<double>(stats.total);
    }
    for (size_t id = 0; id < vocab.size(); ++id) {
      const int32_t w = static_cast<int32_t>(id);
      NgramEntry entry;
      if (w == Vocabulary::kBos) {
        entry.log10_prob = -99.0;
      } else {
        double p = gamma * uniform;
        auto it = level.find(Ngram{w});
        if (it != level.end() && stats.total > 0) {
          p += (it->second - disc.For(it->second)) /
               static_cast<double>(stats.total);
        }
        entry.log10_prob = std::log10(p);
      }
      model.Set(Ngram{w}, entry);
    }
  }

  for (int k = 2; k <= order; ++k) {
    const auto& level = adjusted[k - 1];
    const Discounts disc = ComputeDiscounts(level, k);
    NgramMap<ContextStats> contexts;
    for (const auto& [g, c] : level) {
      ContextStats& s = contexts[Ngram(g.begin(), g.end() - 1)];
      s.total += c;
      ++s.n[std::min<int64_t>(c, 3)];
    }
    NgramMap<double> gammas;
    for (const auto& [h, s] : contexts) {
      gammas[h] = (disc.d[1] * s.n[1] + disc.d[2] * s.n[2] + disc.d[3] * s.n[3]) /
                  static_cast<double>(s.total);
    }
    for (const auto& [g, c] : level) {
      Ngram h(g.begin(), g.end() - 1);
      const ContextStats& s = contexts[h];
      const double lower = std::pow(
          10.0, model.ConditionalLog10(
                    std::span<const int32_t>(g.data() + 1, g.size() - 2),
                    g.back()));
      const double p = (c - disc.For(c)) / static_cast<double>(s.total) +
                       gammas[h] * lower;
      NgramEntry entry;
      entry.log10_prob = std::log10(p);
      model.Set(g, entry);
    }
    for (const auto& [h, gamma] : gammas) {
      if (model.Find(h) == nullptr) {
        Fail(ErrorCode::kInternal, "context missing from lower order table");
      }
      model.SetBackoff(h, std::log10(gamma));
    }
  }
  return model;
}

double Perplexity(const NgramModel& model,
                  std::span<const std::vector<std::string>> sequences) {
  if (sequences.empty()) {
    Fail(ErrorCode::kInvalidArgument, "perplexity needs a non-empty set");
  }
  double total = 0.0;
  double tokens = 0.0;
  for (const auto& seq : sequences) {
    total += model.ScoreSequence(seq);
    tokens += static_cast<double>(seq.size() + 1);
  }
  return std::pow(10.0, -total / tokens);
}

bool IsSegmentable(std::u32string_view word,
                   const std::set<std::u32string, std::less<>>& lexicon,
                   int max_unit_length) {
  const size_t T = word.size();
  std::vector<char> reachable(T + 1, 0);
  reachable[0] = 1;
  for (size_t t = 1; t <= T; ++t) {
    for (size_t d = 1; d <= std::min<size_t>(max_unit_length, t); ++d) {
      if (reachable[t - d] && lexicon.count(word.substr(t - d, d)) > 0) {
        reachable[t] = 1;
        break;
      }
    }
  }
  return reachable[T] != 0;
}

OovCoverage OovAndCoverage(const std::set<std::u32string, std::less<>>& lexicon,
                           std::span<const std::u32string> eval_words) {
  size_t longest = 0;
  for (const auto& unit : lexicon) longest = std::max(longest, unit.size());
  OovCoverage result;
  result.running_words = eval_words.size();
  for (const std::u32string& w : eval_words) {
    if (!IsSegmentable(w, lexicon, static_cast<int>(longest))) ++result.oov_words;
  }
  if (result.running_words > 0) {
    const double n = static_cast<double>(result.running_words);
    result.oov_rate = 100.0 * static_cast<double>(result.oov_words) / n;
    result.coverage_rate = 100.0 - result.oov_rate;
  }
  return result;
}

}  // namespace mgram
