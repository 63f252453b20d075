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

#ifndef MGRAM_LM_TOKENIZE_H_
#define MGRAM_LM_TOKENIZE_H_

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgram/text/corpus.h"

namespace mgram {

enum class LexiconType { kWord, kCharacter, kMultigram };

std::string LexiconTypeName(LexiconType type, int max_length = 0);
// Accepts "word", "char"/"character", "multigram" and "m<k>".
LexiconType ParseLexiconType(std::string_view name, int* max_length = nullptr);

// Word pieces as tokens; `<sp>` only where the text had a space.
std::vector<std::string> TokenizeWordsLine(const CorpusLine& line);
// One token per character; spaces become `<sp>`.
std::vector<std::string> TokenizeCharactersLine(const CorpusLine& line);

std::vector<std::vector<std::string>> TokenizeWords(
    std::span<const CorpusLine> lines);
std::vector<std::vector<std::string>> TokenizeCharacters(
    std::span<const CorpusLine> lines);

// Distinct tokens other than `<sp>`.
std::set<std::string> TokenSet(
    std::span<const std::vector<std::string>> sequences);

std::set<std::u32string, std::less<>> UnitSet(const std::set<std::string>& tokens);

// Reads/writes a tokenized corpus: tokens separated by single spaces.
void WriteTokenized(const std::filesystem::path& path,
                    std::span<const std::vector<std::string>> sequences);
std::vector<std::vector<std::string>> ReadTokenized(
    const std::filesystem::path& path);

}  // namespace mgram

#endif  // MGRAM_LM_TOKENIZE_H_
