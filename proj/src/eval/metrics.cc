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

#include "mgram/eval/metrics.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mgram/base/error.h"
#include "mgram/base/utf8.h"

namespace mgram {
namespace {

template <typename Seq>
EditCounts Align(const Seq& ref, const Seq& hyp) {
  const size_t n = ref.size();
  const size_t m = hyp.size();
  std::vector<size_t> d((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> size_t& { return d[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  EditCounts counts;
  counts.distance = at(n, m);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

ErrorRate Pool(std::span<const std::pair<std::string, std::string>> pairs,
               bool words) {
  ErrorRate rate;
  for (const auto& [ref, hyp] : pairs) {
    EditCounts c;
    if (words) {
      const auto r = WordsOf(ref);
      const auto h = WordsOf(hyp);
      c = EditDistance(r, h);
      rate.reference_length += r.size();
    } else {
      const std::u32string r = Utf8ToU32(ref);
      c = EditDistance(r, Utf8ToU32(hyp));
      rate.reference_length += r.size();
    }
    rate.counts.distance += c.distance;
    rate.counts.substitutions += c.substitutions;
    rate.counts.deletions += c.deletions;
    rate.counts.insertions += c.insertions;
  }
  if (rate.reference_length == 0) {
    Fail(ErrorCode::kInvalidArgument,
         "error rate needs a non-empty reference corpus");
  }
  rate.percent = 100.0 * static_cast<double>(rate.counts.distance) /
                 static_cast<double>(rate.reference_length);
  return rate;
}

}  // namespace

EditCounts EditDistance(std::span<const std::string> reference,
                        std::span<const std::string> hypothesis) {
  return Align(reference, hypothesis);
}

EditCounts EditDistance(std::u32string_view reference,
                        std::u32string_view hypothesis) {
  return Align(reference, hypothesis);
}

std::vector<std::string> WordsOf(std::string_view text) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

ErrorRate WordErrorRate(
    std::span<const std::pair<std::string, std::string>> pairs) {
  return Pool(pairs, true);
}

ErrorRate CharacterErrorRate(
    std::span<const std::pair<std::string, std::string>> pairs) {
  return Pool(pairs, false);
}

std::string FormatMinutesSeconds(double seconds) {
  if (!(seconds >= 0.0)) seconds = 0.0;
  const auto centis = std::llround(seconds * 100.0);
  return fmt::format("{}:{:02}.{:02}", centis / 6000, (centis % 6000) / 100,
                     centis % 100);
}

}  // namespace mgram
