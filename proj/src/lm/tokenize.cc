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

#include "mgram/lm/tokenize.h"

#include <fstream>
#include <sstream>

#include "mgram/base/error.h"
#include "mgram/base/utf8.h"
#include "mgram/multigram/trainer.h"

namespace mgram {

std::string LexiconTypeName(LexiconType type, int max_length) {
  switch (type) {
    case LexiconType::kWord:
      return "word";
    case LexiconType::kCharacter:
      return "char";
    case LexiconType::kMultigram:
      return max_length > 0 ? "m" + std::to_string(max_length) : "multigram";
  }
  return "unknown";
}

LexiconType ParseLexiconType(std::string_view name, int* max_length) {
  if (max_length != nullptr) *max_length = 0;
  if (name == "word" || name == "words") return LexiconType::kWord;
  if (name == "char" || name == "character" || name == "characters") {
    return LexiconType::kCharacter;
  }
  if (name == "multigram") return LexiconType::kMultigram;
  if (name.size() >= 2 && name[0] == 'm') {
    int k = 0;
    for (char c : name.substr(1)) {
      if (c < '0' || c > '9') {
        Fail(ErrorCode::kInvalidArgument,
             "unknown lexicon type '" + std::string(name) + "'");
      }
      k = k * 10 + (c - '0');
    }
    if (max_length != nullptr) *max_length = k;
    return LexiconType::kMultigram;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown lexicon type '" + std::string(name) + "'");
}

std::vector<std::string> TokenizeWordsLine(const CorpusLine& line) {
  std::vector<std::string> tokens;
  for (const auto& chunk : SplitChunks(line)) {
    if (!tokens.empty()) tokens.emplace_back(kWordBoundaryToken);
    for (const auto& piece : chunk) tokens.push_back(U32ToUtf8(piece));
  }
  return tokens;
}

std::vector<std::string> TokenizeCharactersLine(const CorpusLine& line) {
  std::vector<std::string> tokens;
  tokens.reserve(line.text.size());
  for (char32_t c : line.text) {
    tokens.push_back(c == U' ' ? std::string(kWordBoundaryToken) : U32ToUtf8(c));
  }
  return tokens;
}

std::vector<std::vector<std::string>> TokenizeWords(
    std::span<const CorpusLine> lines) {
  std::vector<std::vector<std::string>> out;
  out.reserve(lines.size());
  for (const CorpusLine& line : lines) out.push_back(TokenizeWordsLine(line));
  return out;
}

std::vector<std::vector<std::string>> TokenizeCharacters(
    std::span<const CorpusLine> lines) {
  std::vector<std::vector<std::string>> out;
  out.reserve(lines.size());
  for (const CorpusLine& line : lines) out.push_back(TokenizeCharactersLine(line));
  return out;
}

std::set<std::string> TokenSet(
    std::span<const std::vector<std::string>> sequences) {
  std::set<std::string> tokens;
  for (const auto& seq : sequences) {
    for (const auto& t : seq) {
      if (t != kWordBoundaryToken) tokens.insert(t);
    }
  }
  return tokens;
}

std::set<std::u32string, std::less<>> UnitSet(const std::set<std::string>& tokens) {
  std::set<std::u32string, std::less<>> units;
  for (const auto& t : tokens) units.insert(Utf8ToU32(t));
  return units;
}

void WriteTokenized(const std::filesystem::path& path,
                    std::span<const std::vector<std::string>> sequences) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& seq : sequences) {
    for (size_t i = 0; i < seq.size(); ++i) {
      if (i > 0) out << ' ';
      out << seq[i];
    }
    out << '\n';
  }
}

std::vector<std::vector<std::string>> ReadTokenized(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::vector<std::string>> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!IsValidUtf8(line)) {
      Fail(ErrorCode::kEncoding,
           path.string() + ":" + std::to_string(lineno) + ": invalid UTF-8");
    }
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string t;
    while (fields >> t) tokens.push_back(t);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

}  // namespace mgram
