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

#ifndef MGRAM_MULTIGRAM_MODEL_H_
#define MGRAM_MULTIGRAM_MODEL_H_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgram {

class MultigramLexicon;

// Zero-order HSMM over character units. Each unit u of length d carries
// P(u | d); the distributions for different d are independent.
class MultigramModel {
 public:
  using EmissionTable = std::map<std::u32string, double, std::less<>>;

  MultigramModel() = default;
  MultigramModel(int max_length, std::string language_tag);

  int max_length() const { return max_length_; }
  const std::string& language_tag() const { return language_tag_; }
  const EmissionTable& emissions() const { return emissions_; }
  size_t size() const { return emissions_.size(); }

  // 0 when the unit is absent.
  double Probability(std::u32string_view unit) const;
  bool Contains(std::u32string_view unit) const;

  // Requires 1 <= |unit| <= max_length and 0 < probability <= 1.
  void SetProbability(std::u32string unit, double probability);
  void Erase(std::u32string_view unit);

  // Sum of P(u | d) over the units of length d.
  double DurationMass(int length) const;

  // Rescales each per-length distribution to sum to one.
  void Renormalize();

  MultigramLexicon Lexicon() const;

 private:
  int max_length_ = 0;
  std::string language_tag_;
  EmissionTable emissions_;
};

// Decomposition of one word into consecutive units.
struct Segmentation {
  std::vector<std::u32string> units;
  std::u32string source_word;
};

// Set of units, each remembering which languages contributed it.
class MultigramLexicon {
 public:
  using UnitTable = std::map<std::u32string, std::set<std::string>>;

  void Add(const std::u32string& unit, const std::string& tag);
  void Add(const std::u32string& unit, const std::set<std::string>& tags);
  bool Contains(std::u32string_view unit) const;
  size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }
  int max_unit_length() const;
  const UnitTable& units() const { return units_; }

  bool operator==(const MultigramLexicon&) const = default;

 private:
  UnitTable units_;
};

MultigramLexicon MergeLexicons(std::span<const MultigramLexicon> lexicons);

// Units actually used by a tokenized corpus; `<sp>` is not a unit.
MultigramLexicon LexiconFromTokens(
    std::span<const std::vector<std::string>> token_sequences,
    const std::string& language_tag);

// `#d_max=<k> lang=<tag>` header, then `unit<TAB>length<TAB>log10_prob`.
void WriteModel(const MultigramModel& model, const std::filesystem::path& path);
MultigramModel ReadModel(const std::filesystem::path& path);

// `unit<TAB>tag1,tag2` per line, sorted by unit.
void WriteLexicon(const MultigramLexicon& lexicon,
                  const std::filesystem::path& path);
MultigramLexicon ReadLexicon(const std::filesystem::path& path);

}  // namespace mgram

#endif  // MGRAM_MULTIGRAM_MODEL_H_
