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

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mgram/base/error.h"
#include "mgram/lm/ngram.h"

namespace mgram {
namespace {

std::string JoinTokens(const Vocabulary& vocab, const Ngram& g) {
  std::string out;
  for (size_t i = 0; i < g.size(); ++i) {
    if (i > 0) out += ' ';
    out += vocab.Token(g[i]);
  }
  return out;
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool ParseDouble(std::string_view s, double* out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string ArpaString(const NgramModel& model) {
  const Vocabulary& vocab = model.vocabulary();
  std::string out = "\\data\\\n";
  for (int k = 1; k <= model.order(); ++k) {
    out += fmt::format("ngram {}={}\n", k, model.NumEntries(k));
  }
  for (int k = 1; k <= model.order(); ++k) {
    out += fmt::format("\n\\{}-grams:\n", k);
    std::vector<std::pair<std::string, const NgramEntry*>> rows;
    rows.reserve(model.NumEntries(k));
    for (const auto& [g, entry] : model.entries(k)) {
      rows.emplace_back(JoinTokens(vocab, g), &entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [text, entry] : rows) {
      out += fmt::format("{:.10g}\t{}", entry->log10_prob, text);
      if (entry->has_backoff) {
        out += fmt::format("\t{:.10g}", entry->log10_backoff);
      }
      out += '\n';
    }
  }
  out += "\n\\end\\\n";
  return out;
}

void WriteArpa(const NgramModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << ArpaString(model);
  if (!out) Fail(ErrorCode::kIo, "write failed on " + path.string());
}

NgramModel ParseArpa(std::string_view text, const std::string& source) {
  std::vector<std::string_view> lines;
  {
    size_t start = 0;
    while (start <= text.size()) {
      size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      start = end + 1;
    }
  }
  auto error = [&](size_t lineno, const std::string& what) {
    Fail(ErrorCode::kFormat, fmt::format("{}:{}: {}", source, lineno + 1, what));
  };

  size_t i = 0;
  while (i < lines.size() && lines[i] != "\\data\\") ++i;
  if (i == lines.size()) error(0, "missing \\data\\ header");
  ++i;
  std::vector<size_t> declared;
  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line.rfind("ngram ", 0) != 0) break;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) error(i, "malformed ngram count line");
    int k = 0;
    size_t n = 0;
    auto k_text = line.substr(6, eq - 6);
    auto n_text = line.substr(eq + 1);
    if (std::from_chars(k_text.data(), k_text.data() + k_text.size(), k).ec !=
            std::errc() ||
        std::from_chars(n_text.data(), n_text.data() + n_text.size(), n).ec !=
            std::errc()) {
      error(i, "non-numeric ngram count");
    }
    if (k != static_cast<int>(declared.size()) + 1) {
      error(i, "ngram counts must be listed in order 1, 2, ...");
    }
    declared.push_back(n);
  }
  if (declared.empty()) error(i, "no ngram counts in header");
  const int order = static_cast<int>(declared.size());

  struct Row {
    std::vector<std::string_view> tokens;
    double prob;
    bool has_backoff;
    double backoff;
  };
  std::vector<std::vector<Row>> sections(order);
  int current = 0;
  bool ended = false;
  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line == "\\end\\") {
      ended = true;
      break;
    }
    if (line.front() == '\\') {
      int k = 0;
      if (line.size() < 8 || line.substr(line.size() - 7) != "-grams:" ||
          std::from_chars(line.data() + 1, line.data() + line.size() - 7, k).ec !=
              std::errc() ||
          k < 1 || k > order) {
        error(i, "unexpected section header '" + std::string(line) + "'");
      }
      current = k;
      continue;
    }
    if (current == 0) error(i, "n-gram line outside a section");
    const auto fields = SplitWhitespace(line);
    const size_t k = static_cast<size_t>(current);
    if (fields.size() != k + 1 && fields.size() != k + 2) {
      error(i, fmt::format("expected {} or {} fields in \\{}-grams:", k + 1,
                           k + 2, current));
    }
    Row row;
    if (!ParseDouble(fields[0], &row.prob)) error(i, "non-numeric probability");
    row.tokens.assign(fields.begin() + 1, fields.begin() + 1 + k);
    row.has_backoff = fields.size() == k + 2;
    row.backoff = 0.0;
    if (row.has_backoff && !ParseDouble(fields.back(), &row.backoff)) {
      error(i, "non-numeric backoff weight");
    }
    sections[current - 1].push_back(std::move(row));
  }
  if (!ended) error(lines.size() - 1, "missing \\end\\ marker");
  for (int k = 1; k <= order; ++k) {
    if (sections[k - 1].size() != declared[k - 1]) {
      Fail(ErrorCode::kFormat,
           fmt::format("{}: section \\{}-grams: has {} entries but the header "
                       "declares {}",
                       source, k, sections[k - 1].size(), declared[k - 1]));
    }
  }

  Vocabulary vocab;
  for (const Row& row : sections[0]) vocab.Add(row.tokens[0]);
  NgramModel model(order, vocab);
  for (int k = 1; k <= order; ++k) {
    for (const Row& row : sections[k - 1]) {
      Ngram g;
      g.reserve(k);
      for (std::string_view t : row.tokens) {
        const int id = vocab.Find(t);
        if (id < 0) {
          Fail(ErrorCode::kFormat,
               fmt::format("{}: token '{}' in \\{}-grams: is not a unigram",
                           source, t, k));
        }
        g.push_back(id);
      }
      NgramEntry entry;
      entry.log10_prob = row.prob;
      entry.has_backoff = row.has_backoff;
      entry.log10_backoff = row.backoff;
      model.Set(std::move(g), entry);
    }
  }
  return model;
}

NgramModel ReadArpa(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseArpa(buffer.str(), path.string());
}

}  // namespace mgram
