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

#include "mgram/multigram/model.h"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "mgram/base/error.h"
#include "mgram/base/utf8.h"
#include "mgram/multigram/trainer.h"

namespace mgram {

MultigramModel::MultigramModel(int max_length, std::string language_tag)
    : max_length_(max_length), language_tag_(std::move(language_tag)) {
  if (max_length < 1) {
    Fail(ErrorCode::kInvalidArgument, "d_max must be >= 1");
  }
}

double MultigramModel::Probability(std::u32string_view unit) const {
  auto it = emissions_.find(unit);
  return it == emissions_.end() ? 0.0 : it->second;
}

bool MultigramModel::Contains(std::u32string_view unit) const {
  return emissions_.find(unit) != emissions_.end();
}

void MultigramModel::SetProbability(std::u32string unit, double probability) {
  const int length = static_cast<int>(unit.size());
  if (length < 1 || length > max_length_) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("unit length {} outside 1..{}", length, max_length_));
  }
  if (!(probability > 0.0 && probability <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("unit probability {} outside (0, 1]", probability));
  }
  emissions_[std::move(unit)] = probability;
}

void MultigramModel::Erase(std::u32string_view unit) {
  auto it = emissions_.find(unit);
  if (it != emissions_.end()) emissions_.erase(it);
}

double MultigramModel::DurationMass(int length) const {
  double mass = 0.0;
  for (const auto& [unit, p] : emissions_) {
    if (static_cast<int>(unit.size()) == length) mass += p;
  }
  return mass;
}

void MultigramModel::Renormalize() {
  std::vector<double> mass(max_length_ + 1, 0.0);
  for (const auto& [unit, p] : emissions_) mass[unit.size()] += p;
  for (auto& [unit, p] : emissions_) p /= mass[unit.size()];
}

MultigramLexicon MultigramModel::Lexicon() const {
  MultigramLexicon lexicon;
  for (const auto& [unit, p] : emissions_) lexicon.Add(unit, language_tag_);
  return lexicon;
}

void MultigramLexicon::Add(const std::u32string& unit, const std::string& tag) {
  auto& tags = units_[unit];
  if (!tag.empty()) tags.insert(tag);
}

void MultigramLexicon::Add(const std::u32string& unit,
                           const std::set<std::string>& tags) {
  units_[unit].insert(tags.begin(), tags.end());
}

bool MultigramLexicon::Contains(std::u32string_view unit) const {
  return units_.count(std::u32string(unit)) > 0;
}

int MultigramLexicon::max_unit_length() const {
  size_t longest = 0;
  for (const auto& [unit, tags] : units_) longest = std::max(longest, unit.size());
  return static_cast<int>(longest);
}

MultigramLexicon MergeLexicons(std::span<const MultigramLexicon> lexicons) {
  MultigramLexicon merged;
  for (const MultigramLexicon& lexicon : lexicons) {
    for (const auto& [unit, tags] : lexicon.units()) merged.Add(unit, tags);
  }
  return merged;
}

MultigramLexicon LexiconFromTokens(
    std::span<const std::vector<std::string>> token_sequences,
    const std::string& language_tag) {
  MultigramLexicon lexicon;
  for (const auto& tokens : token_sequences) {
    for (const std::string& token : tokens) {
      if (token == kWordBoundaryToken) continue;
      lexicon.Add(Utf8ToU32(token), language_tag);
    }
  }
  return lexicon;
}

void WriteModel(const MultigramModel& model,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "#d_max=" << model.max_length() << " lang=" << model.language_tag()
      << '\n';
  for (const auto& [unit, p] : model.emissions()) {
    out << U32ToUtf8(unit) << '\t' << unit.size() << '\t'
        << fmt::format("{:.17g}", std::log10(p)) << '\n';
  }
  if (!out) Fail(ErrorCode::kIo, "write failed on " + path.string());
}

MultigramModel ReadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open model " + path.string());
  auto where = [&](size_t lineno) {
    return path.string() + ":" + std::to_string(lineno) + ": ";
  };
  std::string line;
  if (!std::getline(in, line)) {
    Fail(ErrorCode::kFormat, where(1) + "missing #d_max header");
  }
  int max_length = 0;
  std::string tag;
  {
    std::istringstream header(line);
    std::string field;
    while (header >> field) {
      if (field.rfind("#d_max=", 0) == 0) {
        try {
          max_length = std::stoi(field.substr(7));
        } catch (const std::exception&) {
          Fail(ErrorCode::kFormat, where(1) + "bad d_max value");
        }
      } else if (field.rfind("lang=", 0) == 0) {
        tag = field.substr(5);
      }
    }
  }
  if (max_length < 1) {
    Fail(ErrorCode::kFormat, where(1) + "header must start with #d_max=<k>");
  }
  MultigramModel model(max_length, tag);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      Fail(ErrorCode::kFormat, where(lineno) + "expected 3 tab-separated fields");
    }
    std::u32string unit;
    try {
      unit = Utf8ToU32(line.substr(0, t1));
    } catch (const Error& e) {
      Fail(ErrorCode::kEncoding, where(lineno) + e.what());
    }
    int length = 0;
    double log10p = 0.0;
    try {
      length = std::stoi(line.substr(t1 + 1, t2 - t1 - 1));
      log10p = std::stod(line.substr(t2 + 1));
    } catch (const std::exception&) {
      Fail(ErrorCode::kFormat, where(lineno) + "non-numeric length or prob");
    }
    if (length != static_cast<int>(unit.size())) {
      Fail(ErrorCode::kFormat, where(lineno) + "length field disagrees with unit");
    }
    try {
      model.SetProbability(std::move(unit), std::pow(10.0, log10p));
    } catch (const Error& e) {
      Fail(ErrorCode::kFormat, where(lineno) + e.what());
    }
  }
  return model;
}

void WriteLexicon(const MultigramLexicon& lexicon,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& [unit, tags] : lexicon.units()) {
    out << U32ToUtf8(unit) << '\t';
    bool first = true;
    for (const std::string& tag : tags) {
      if (!first) out << ',';
      out << tag;
      first = false;
    }
    out << '\n';
  }
}

MultigramLexicon ReadLexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open lexicon " + path.string());
  MultigramLexicon lexicon;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    const std::string unit_text = line.substr(0, tab);
    if (unit_text.empty()) {
      Fail(ErrorCode::kFormat,
           path.string() + ":" + std::to_string(lineno) + ": empty unit");
    }
    std::u32string unit;
    try {
      unit = Utf8ToU32(unit_text);
    } catch (const Error& e) {
      Fail(ErrorCode::kEncoding,
           path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    std::set<std::string> tags;
    if (tab != std::string::npos) {
      std::istringstream tag_list(line.substr(tab + 1));
      std::string tag;
      while (std::getline(tag_list, tag, ',')) {
        if (!tag.empty()) tags.insert(tag);
      }
    }
    lexicon.Add(unit, tags);
  }
  return lexicon;
}

}  // namespace mgram
