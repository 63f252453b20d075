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

#ifndef MGRAM_LM_NGRAM_H_
#define MGRAM_LM_NGRAM_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mgram {

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknownToken = "<unk>";

// Token <-> id map. The four special tokens always occupy ids 0..3.
class Vocabulary {
 public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kUnk = 2;
  static constexpr int kSp = 3;

  Vocabulary();

  int Add(std::string_view token);
  // -1 when absent.
  int Find(std::string_view token) const;
  int FindOrUnk(std::string_view token) const;
  const std::string& Token(int id) const { return tokens_.at(id); }
  size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

using Ngram = std::vector<int32_t>;

struct NgramHash {
  size_t operator()(const Ngram& g) const {
    uint64_t h = 1469598103934665603ull;
    for (int32_t x : g) {
      h ^= static_cast<uint64_t>(static_cast<uint32_t>(x)) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
      h ^= h >> 29;
    }
    return static_cast<size_t>(h);
  }
};

template <typename V>
using NgramMap = std::unordered_map<Ngram, V, NgramHash>;

struct NgramCounts {
  int order = 0;
  Vocabulary vocabulary;
  // counts[k - 1] holds the raw k-gram counts.
  std::vector<NgramMap<int64_t>> counts;
};

struct NgramEntry {
  double log10_prob = 0.0;
  double log10_backoff = 0.0;
  bool has_backoff = false;
};

// Backoff language model in ARPA form (log10 probabilities).
class NgramModel {
 public:
  NgramModel() = default;
  NgramModel(int order, Vocabulary vocabulary);

  int order() const { return order_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const NgramMap<NgramEntry>& entries(int length) const {
    return tables_.at(length - 1);
  }
  size_t NumEntries(int length) const { return tables_.at(length - 1).size(); }

  const NgramEntry* Find(std::span<const int32_t> ngram) const;
  void Set(Ngram ngram, const NgramEntry& entry);
  void SetBackoff(const Ngram& context, double log10_backoff);

  // log10 P(word | history) following backoff; `history` is oldest first and
  // may be longer than order - 1.
  double ConditionalLog10(std::span<const int32_t> history, int32_t word) const;

  // log10 P(<s> tokens </s>); unknown tokens map to <unk>.
  double ScoreSequence(std::span<const std::string> tokens) const;

 private:
  int order_ = 0;
  Vocabulary vocabulary_;
  std::vector<NgramMap<NgramEntry>> tables_;
};

// With `concatenate` all sequences form one stream joined by <sp> and
// wrapped in a single <s> ... </s>; otherwise each sequence is padded.
// `extra_vocabulary` tokens join the vocabulary even when never seen.
NgramCounts CountNgrams(std::span<const std::vector<std::string>> sequences,
                        int order, bool concatenate,
                        std::span<const std::string> extra_vocabulary = {});

// Interpolated modified Kneser-Ney written in backoff form. The base
// distribution below unigrams is uniform over every predictable token, so
// unseen vocabulary items (<unk>, an unused <sp>) share the unigram
// backoff mass.
NgramModel EstimateKneserNey(const NgramCounts& counts);

double Perplexity(const NgramModel& model,
                  std::span<const std::vector<std::string>> sequences);

struct OovCoverage {
  double oov_rate = 0.0;       // percent of running words not spellable
  double coverage_rate = 0.0;  // percent of running words spellable
  size_t running_words = 0;
  size_t oov_words = 0;
};

// A word is covered when some concatenation of lexicon units spells it.
bool IsSegmentable(std::u32string_view word,
                   const std::set<std::u32string, std::less<>>& lexicon,
                   int max_unit_length);

OovCoverage OovAndCoverage(const std::set<std::u32string, std::less<>>& lexicon,
                           std::span<const std::u32string> eval_words);

void WriteArpa(const NgramModel& model, const std::filesystem::path& path);
std::string ArpaString(const NgramModel& model);
NgramModel ReadArpa(const std::filesystem::path& path);
NgramModel ParseArpa(std::string_view text, const std::string& source = "arpa");

}  // namespace mgram

#endif  // MGRAM_LM_NGRAM_H_
