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

#include "mgram/text/corpus.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "mgram/base/error.h"
#include "mgram/base/utf8.h"

namespace mgram {
namespace {

bool IsSpaceLike(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

std::u32string ToNfc(std::u32string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    Fail(ErrorCode::kInternal, "ICU NFC normalizer unavailable");
  }
  icu::UnicodeString src = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(text.data()),
      static_cast<int32_t>(text.size()));
  icu::UnicodeString dst = nfc->normalize(src, status);
  if (U_FAILURE(status)) {
    Fail(ErrorCode::kEncoding, "NFC normalization failed");
  }
  std::u32string out(dst.countChar32(), U'\0');
  dst.toUTF32(reinterpret_cast<UChar32*>(out.data()),
              static_cast<int32_t>(out.size()), status);
  return out;
}

std::string StripCr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::u32string DecodeLine(const std::string& raw,
                          const std::filesystem::path& path, size_t lineno) {
  try {
    return Utf8ToU32(raw);
  } catch (const Error& e) {
    Fail(ErrorCode::kEncoding, path.string() + ":" + std::to_string(lineno) +
                                   ": " + e.what());
  }
}

}  // namespace

CharacterInventory::CharacterInventory(std::vector<char32_t> characters)
    : characters_(std::move(characters)) {
  std::sort(characters_.begin(), characters_.end());
  characters_.erase(std::unique(characters_.begin(), characters_.end()),
                    characters_.end());
  includes_space_ = Contains(U' ');
}

bool CharacterInventory::Contains(char32_t c) const {
  return std::binary_search(characters_.begin(), characters_.end(), c);
}

int CharacterInventory::IndexOf(char32_t c) const {
  auto it = std::lower_bound(characters_.begin(), characters_.end(), c);
  if (it == characters_.end() || *it != c) return -1;
  return static_cast<int>(it - characters_.begin());
}

std::u32string NormalizeText(std::u32string_view text) {
  const std::u32string nfc = ToNfc(text);
  std::u32string out;
  out.reserve(nfc.size());
  bool pending_space = false;
  for (char32_t c : nfc) {
    if (IsSpaceLike(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string NormalizeUtf8(std::string_view text) {
  return U32ToUtf8(NormalizeText(Utf8ToU32(text)));
}

std::vector<CorpusLine> LoadCorpus(const std::filesystem::path& path,
                                   std::string_view language_tag) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open corpus " + path.string());
  std::vector<CorpusLine> lines;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::u32string text = NormalizeText(DecodeLine(StripCr(raw), path, lineno));
    if (text.empty()) continue;
    lines.push_back({std::move(text), std::string(language_tag)});
  }
  if (in.bad()) Fail(ErrorCode::kIo, "read error on " + path.string());
  return lines;
}

std::vector<CorpusLine> LoadTaggedCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open corpus " + path.string());
  std::vector<CorpusLine> lines;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    raw = StripCr(raw);
    if (raw.empty()) continue;
    const size_t tab = raw.find('\t');
    if (tab == std::string::npos || tab == 0) {
      Fail(ErrorCode::kFormat, path.string() + ":" + std::to_string(lineno) +
                                   ": expected language_tag<TAB>text");
    }
    std::u32string text =
        NormalizeText(DecodeLine(raw.substr(tab + 1), path, lineno));
    if (text.empty()) continue;
    lines.push_back({std::move(text), raw.substr(0, tab)});
  }
  return lines;
}

void WriteCorpus(const std::filesystem::path& path,
                 std::span<const CorpusLine> lines) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const CorpusLine& line : lines) out << U32ToUtf8(line.text) << '\n';
}

CharacterInventory BuildCharacterInventory(std::span<const CorpusLine> lines) {
  if (lines.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "cannot build a character inventory from an empty corpus");
  }
  std::vector<char32_t> chars;
  for (const CorpusLine& line : lines) {
    chars.insert(chars.end(), line.text.begin(), line.text.end());
  }
  return CharacterInventory(std::move(chars));
}

CharacterInventory UnifyInventories(const CharacterInventory& a,
                                    const CharacterInventory& b) {
  std::vector<char32_t> merged;
  std::set_union(a.characters().begin(), a.characters().end(),
                 b.characters().begin(), b.characters().end(),
                 std::back_inserter(merged));
  return CharacterInventory(std::move(merged));
}

bool IsPunctuation(char32_t c) {
  return u_ispunct(static_cast<UChar32>(c)) != 0;
}

std::vector<std::vector<std::u32string>> SplitChunks(const CorpusLine& line) {
  std::vector<std::vector<std::u32string>> chunks;
  std::vector<std::u32string> pieces;
  std::u32string word;
  auto flush_word = [&] {
    if (!word.empty()) pieces.push_back(std::move(word));
    word.clear();
  };
  auto flush_chunk = [&] {
    flush_word();
    if (!pieces.empty()) chunks.push_back(std::move(pieces));
    pieces.clear();
  };
  for (char32_t c : line.text) {
    if (c == U' ') {
      flush_chunk();
    } else if (IsPunctuation(c)) {
      flush_word();
      pieces.emplace_back(1, c);
    } else {
      word.push_back(c);
    }
  }
  flush_chunk();
  return chunks;
}

std::vector<std::u32string> SplitWords(const CorpusLine& line) {
  std::vector<std::u32string> words;
  for (auto& chunk : SplitChunks(line)) {
    for (auto& piece : chunk) words.push_back(std::move(piece));
  }
  return words;
}

std::string CharacterSymbol(char32_t c) {
  if (c == U' ') return std::string(kSpaceSymbol);
  return U32ToUtf8(c);
}

char32_t SymbolCharacter(std::string_view symbol) {
  if (symbol == kSpaceSymbol) return U' ';
  const std::u32string decoded = Utf8ToU32(symbol);
  if (decoded.size() != 1) {
    Fail(ErrorCode::kFormat,
         "character symbol must be one code point: '" + std::string(symbol) +
             "'");
  }
  return decoded[0];
}

void WriteCharacterInventory(const CharacterInventory& inventory,
                             const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  for (size_t i = 0; i < inventory.size(); ++i) {
    out << CharacterSymbol(inventory.characters()[i]) << '\t' << i << '\n';
  }
}

CharacterInventory ReadCharacterInventory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open character set " + path.string());
  std::vector<char32_t> chars;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      Fail(ErrorCode::kFormat, where + ": expected symbol<TAB>index");
    }
    if (line.substr(tab + 1) != std::to_string(chars.size())) {
      Fail(ErrorCode::kFormat, where + ": indices must be 0, 1, 2, ...");
    }
    try {
      chars.push_back(SymbolCharacter(line.substr(0, tab)));
    } catch (const Error& e) {
      Fail(ErrorCode::kFormat, where + ": " + e.what());
    }
    if (chars.size() > 1 && chars[chars.size() - 2] >= chars.back()) {
      Fail(ErrorCode::kFormat, where + ": characters must be sorted and unique");
    }
  }
  if (chars.empty()) Fail(ErrorCode::kFormat, path.string() + ": empty character set");
  return CharacterInventory(std::move(chars));
}

}  // namespace mgram
