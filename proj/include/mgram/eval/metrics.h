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

#ifndef MGRAM_EVAL_METRICS_H_
#define MGRAM_EVAL_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgram {

struct EditCounts {
  size_t distance = 0;
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;

  bool operator==(const EditCounts&) const = default;
};

// Unit-cost Levenshtein. The counts follow one optimal alignment, preferring
// substitution, then deletion, then insertion when tracing back.
EditCounts EditDistance(std::span<const std::string> reference,
                        std::span<const std::string> hypothesis);
EditCounts EditDistance(std::u32string_view reference,
                        std::u32string_view hypothesis);

// Whitespace-separated words of a UTF-8 string.
std::vector<std::string> WordsOf(std::string_view text);

struct ErrorRate {
  EditCounts counts;
  size_t reference_length = 0;
  double percent = 0.0;  // unclamped
};

// Corpus-pooled rates over (reference, hypothesis) UTF-8 pairs. WER counts
// whitespace-separated words; CER counts code points, spaces included.
// Throw when the pooled reference is empty.
ErrorRate WordErrorRate(
    std::span<const std::pair<std::string, std::string>> pairs);
ErrorRate CharacterErrorRate(
    std::span<const std::pair<std::string, std::string>> pairs);

// "M:SS.ss".
std::string FormatMinutesSeconds(double seconds);

}  // namespace mgram

#endif  // MGRAM_EVAL_METRICS_H_
