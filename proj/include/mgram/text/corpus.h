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

#ifndef MGRAM_TEXT_CORPUS_H_
#define MGRAM_TEXT_CORPUS_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgram {

// One normalized sample of training or evaluation text.
struct CorpusLine {
  std::u32string text;
  std::string language_tag;

  bool operator==(const CorpusLine&) const = default;
};

// Sorted set of distinct code points seen in a corpus.
class CharacterInventory {
 public:
  CharacterInventory() = default;
  explicit CharacterInventory(std::vector<char32_t> characters);

  const std::vector<char32_t>& characters() const { return characters_; }
  bool includes_space() const { return includes_space_; }
  size_t size() const { return characters_.size(); }
  bool empty() const { return characters_.empty(); }
  bool Contains(char32_t c) const;
  // Position of `c` in the sorted character list, or -1.
  int IndexOf(char32_t c) const;

  bool operator==(const CharacterInventory&) const = default;

 private:
  std::vector<char32_t> characters_;
  bool includes_space_ = false;
};

// NFC, whitespace runs collapsed to one U+0020, leading/trailing trimmed.
std::u32string NormalizeText(std::u32string_view text);
std::string NormalizeUtf8(std::string_view text);

// Reads one sample per line; blank lines are dropped. Encoding errors
// are reported with the 1-based line number.
std::vector<CorpusLine> LoadCorpus(const std::filesystem::path& path,
                                   std::string_view language_tag);

// Reads `language_tag<TAB>text` lines.
std::vector<CorpusLine> LoadTaggedCorpus(const std::filesystem::path& path);

void WriteCorpus(const std::filesystem::path& path,
                 std::span<const CorpusLine> lines);

CharacterInventory BuildCharacterInventory(std::span<const CorpusLine> lines);

CharacterInventory UnifyInventories(const CharacterInventory& a,
                                    const CharacterInventory& b);

bool IsPunctuation(char32_t c);

// Whitespace-delimited chunks of a line, each split further so that every
// punctuation mark is its own piece: "darling." -> {{"darling", "."}}.
std::vector<std::vector<std::u32string>> SplitChunks(const CorpusLine& line);

// Flattened SplitChunks.
std::vector<std::u32string> SplitWords(const CorpusLine& line);

// Symbol used for U+0020 wherever characters are written as table entries.
inline constexpr std::string_view kSpaceSymbol = "<space>";

std::string CharacterSymbol(char32_t c);
char32_t SymbolCharacter(std::string_view symbol);

// `symbol<TAB>index` per line, in inventory order.
void WriteCharacterInventory(const CharacterInventory& inventory,
                             const std::filesystem::path& path);
CharacterInventory ReadCharacterInventory(const std::filesystem::path& path);

}  // namespace mgram

#endif  // MGRAM_TEXT_CORPUS_H_
