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

#ifndef MGRAM_FST_SYMBOL_TABLE_H_
#define MGRAM_FST_SYMBOL_TABLE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mgram {

using Label = int32_t;
inline constexpr Label kEpsilon = 0;
inline constexpr std::string_view kEpsilonSymbol = "<eps>";

// Dense label table; id 0 is always epsilon.
class SymbolTable {
 public:
  SymbolTable();

  Label Add(std::string_view symbol);
  // -1 when absent.
  Label Find(std::string_view symbol) const;
  const std::string& Symbol(Label label) const { return symbols_.at(label); }
  size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  // True when one table's ids are a prefix of the other's.
  bool IsCompatible(const SymbolTable& other) const;

  bool operator==(const SymbolTable& other) const {
    return symbols_ == other.symbols_;
  }

  // `symbol<TAB>id` per line.
  void WriteText(const std::filesystem::path& path) const;
  std::string ToText() const;
  static SymbolTable ReadText(const std::filesystem::path& path);

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Label> ids_;
};

}  // namespace mgram

#endif  // MGRAM_FST_SYMBOL_TABLE_H_
