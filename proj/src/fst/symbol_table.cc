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


#include "mgram/fst/symbol_table.h"

#include <algorithm>
#include <fstream>

#include "mgram/base/error.h"

namespace mgram {

SymbolTable::SymbolTable() { Add(kEpsilonSymbol); }

Label SymbolTable::Add(std::string_view symbol) {
  auto [it, inserted] =
      ids_.emplace(std::string(symbol), static_cast<Label>(symbols_.size()));
  if (inserted) symbols_.emplace_back(symbol);
  return it->second;
}

Label SymbolTable::Find(std::string_view symbol) const {
  auto it = ids_.find(std::string(symbol));
  return it == ids_.end() ? -1 : it->second;
}

bool SymbolTable::IsCompatible(const SymbolTable& other) const {
  const size_t n = std::min(size(), other.size());
  return std::equal(symbols_.begin(), symbols_.begin() + n,
                    other.symbols_.begin());
}

std::string SymbolTable::ToText() const {
  std::string out;
  for (size_t i = 0; i < symbols_.size(); ++i) {
    out += symbols_[i];
    out += '\t';
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

void SymbolTable::WriteText(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << ToText();
}

SymbolTable SymbolTable::ReadText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open symbol table " + path.string());
  SymbolTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t tab = line.rfind('\t');
    auto where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (tab == std::string::npos || tab == 0) {
      Fail(ErrorCode::kFormat, where + "expected symbol<TAB>id");
    }
    Label id = -1;
    try {
      id = static_cast<Label>(std::stol(line.substr(tab + 1)));
    } catch (const std::exception&) {
      Fail(ErrorCode::kFormat, where + "non-numeric id");
    }
    const std::string symbol = line.substr(0, tab);
    if (id == 0) {
      if (symbol != kEpsilonSymbol) {
        Fail(ErrorCode::kFormat, where + "id 0 is reserved for <eps>");
      }
      continue;
    }
    if (id != static_cast<Label>(table.size())) {
      Fail(ErrorCode::kFormat, where + "ids must be dense and increasing");
    }
    if (table.Find(symbol) >= 0) {
      Fail(ErrorCode::kFormat, where + "duplicate symbol '" + symbol + "'");
    }
    table.Add(symbol);
  }
  return table;
}

}  // namespace mgram
