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

#include "mgram/fst/text_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "mgram/base/error.h"

namespace mgram {
namespace {

void AppendState(const Transducer& t, StateId s, fmt::memory_buffer* out) {
  for (const Arc& arc : t.Arcs(s)) {
    fmt::format_to(std::back_inserter(*out), "{}\t{}\t{}\t{}\t{:.9g}\n", s,
                   arc.nextstate, arc.ilabel, arc.olabel, arc.weight.Value());
  }
  if (t.IsFinal(s)) {
    fmt::format_to(std::back_inserter(*out), "{}\t{:.9g}\n", s,
                   t.Final(s).Value());
  }
}

template <typename T>
T ParseNumber(std::string_view field, std::string_view where) {
  T value{};
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    Fail(ErrorCode::kFormat,
         std::string(where) + ": malformed number '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string TransducerToText(const Transducer& t) {
  fmt::memory_buffer out;
  if (t.NumStates() == 0 || t.Start() == kNoState) return {};
  // A start state without lines cannot be told apart in this format; its
  // language is empty, so write the empty machine.
  if (t.NumArcs(t.Start()) == 0 && !t.IsFinal(t.Start())) return {};
  AppendState(t, t.Start(), &out);
  for (StateId s = 0; s < static_cast<StateId>(t.NumStates()); ++s) {
    if (s != t.Start()) AppendState(t, s, &out);
  }
  return fmt::to_string(out);
}

Transducer TransducerFromText(std::string_view text, std::string_view source) {
  Transducer t;
  size_t lineno = 0;
  std::vector<std::string_view> fields;
  auto ensure = [&](StateId s) {
    while (static_cast<StateId>(t.NumStates()) <= s) t.AddState();
  };
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    fields.clear();
    size_t pos = 0;
    while (true) {
      const size_t tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    const std::string where = fmt::format("{}:{}", source, lineno);
    if (fields.size() != 1 && fields.size() != 2 && fields.size() != 4 &&
        fields.size() != 5) {
      Fail(ErrorCode::kFormat, where + ": expected 1, 2, 4 or 5 fields");
    }
    const auto src = ParseNumber<StateId>(fields[0], where);
    if (src < 0) Fail(ErrorCode::kFormat, where + ": negative state id");
    ensure(src);
    if (t.Start() == kNoState) t.SetStart(src);
    if (fields.size() <= 2) {
      const double w =
          fields.size() == 2 ? ParseNumber<double>(fields[1], where) : 0.0;
      t.SetFinal(src, TropicalWeight(w));
      continue;
    }
    const auto dst = ParseNumber<StateId>(fields[1], where);
    const auto il = ParseNumber<Label>(fields[2], where);
    const auto ol = ParseNumber<Label>(fields[3], where);
    const double w =
        fields.size() == 5 ? ParseNumber<double>(fields[4], where) : 0.0;
    if (dst < 0 || il < 0 || ol < 0) {
      Fail(ErrorCode::kFormat, where + ": negative state or label");
    }
    ensure(dst);
    t.AddArc(src, {il, ol, TropicalWeight(w), dst});
  }
  // Keep the file's arc order; flag it as sorted only when it already is.
  auto key = [](const Arc& a) {
    return std::make_tuple(a.ilabel, a.olabel, a.nextstate, a.weight.Value());
  };
  bool sorted = true;
  for (StateId s = 0; sorted && s < static_cast<StateId>(t.NumStates()); ++s) {
    const auto arcs = t.Arcs(s);
    for (size_t i = 1; i < arcs.size(); ++i) {
      if (key(arcs[i]) < key(arcs[i - 1])) {
        sorted = false;
        break;
      }
    }
  }
  if (sorted) t.ArcSortInput();
  return t;
}

void WriteTransducer(const Transducer& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  const std::string text = TransducerToText(t);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

Transducer ReadTransducer(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return TransducerFromText(buffer.str(), path.string());
}

}  // namespace mgram
