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

#include "mgram/graph/builder.h"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "mgram/base/error.h"
#include "mgram/base/log.h"
#include "mgram/base/utf8.h"
#include "mgram/fst/algorithms.h"
#include "mgram/fst/text_io.h"

namespace mgram {
namespace {

constexpr std::string_view kSpToken = "<sp>";

double NegLn(double log10_value) { return -log10_value * std::numbers::ln10; }

}  // namespace

std::shared_ptr<SymbolTable> MakeCharacterTable(
    const CharacterInventory& inventory) {
  auto table = std::make_shared<SymbolTable>();
  table->Add(kBlankSymbol);
  for (char32_t c : inventory.characters()) table->Add(CharacterSymbol(c));
  return table;
}

std::shared_ptr<SymbolTable> MakeTokenTable(
    std::span<const std::string> tokens) {
  auto table = std::make_shared<SymbolTable>();
  for (const std::string& token : tokens) {
    if (token == kBackoffSymbol || token == kEpsilonSymbol) {
      Fail(ErrorCode::kInvalidArgument, "reserved token '" + token + "'");
    }
    table->Add(token);
  }
  table->Add(kBackoffSymbol);
  return table;
}

std::vector<std::string> PredictableTokens(const NgramModel& model) {
  std::vector<std::string> tokens;
  const Vocabulary& vocab = model.vocabulary();
  for (int id = 0; id < static_cast<int>(vocab.size()); ++id) {
    if (id == Vocabulary::kBos || id == Vocabulary::kEos ||
        id == Vocabulary::kUnk) {
      continue;
    }
    tokens.push_back(vocab.Token(id));
  }
  return tokens;
}

std::u32string TokenSpelling(std::string_view token) {
  if (token == kSpToken) return U" ";
  return Utf8ToU32(token);
}

Transducer BuildTokenFst(const CharacterInventory& inventory) {
  if (inventory.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "token transducer needs a non-empty character inventory");
  }
  auto table = MakeCharacterTable(inventory);
  const Label blank = table->Find(kBlankSymbol);
  const auto n = static_cast<Label>(inventory.size());
  Transducer t;
  t.SetInputSymbols(table);
  t.SetOutputSymbols(table);
  t.AddStates(n + 1);
  t.SetStart(0);
  // State 0 follows a blank (or nothing); state i follows character label
  // i + 1.
  for (StateId s = 0; s <= n; ++s) t.SetFinal(s, TropicalWeight::One());
  t.AddArc(0, {blank, kEpsilon, TropicalWeight::One(), 0});
  for (Label c = 1; c <= n; ++c) {
    const Label lc = c + 1;
    t.AddArc(0, {lc, lc, TropicalWeight::One(), c});
    t.AddArc(c, {blank, kEpsilon, TropicalWeight::One(), 0});
    for (Label d = 1; d <= n; ++d) {
      const Label ld = d + 1;
      if (d == c) {
        t.AddArc(c, {lc, kEpsilon, TropicalWeight::One(), c});
      } else {
        t.AddArc(c, {ld, ld, TropicalWeight::One(), d});
      }
    }
  }
  t.ArcSortInput();
  return t;
}

Transducer BuildLexiconFst(std::span<const std::string> lexicon,
                           const CharacterInventory& inventory,
                           std::shared_ptr<const SymbolTable> tokens) {
  if (!tokens || tokens->Find(kBackoffSymbol) < 0) {
    Fail(ErrorCode::kInvalidArgument,
         "lexicon transducer needs a token table ending in #0");
  }
  struct Entry {
    Label token;
    std::u32string spelling;
  };
  std::vector<Entry> entries;
  std::set<std::string_view> seen;
  size_t skipped = 0;
  for (const std::string& token : lexicon) {
    if (!seen.insert(token).second) continue;
    std::u32string spelling = TokenSpelling(token);
    if (spelling.empty()) {
      Fail(ErrorCode::kInvalidArgument, "token with empty spelling");
    }
    for (char32_t c : spelling) {
      if (!inventory.Contains(c)) {
        Fail(ErrorCode::kInvalidArgument,
             "token '" + token + "' uses character '" + U32ToUtf8(c) +
                 "' outside the inventory");
      }
    }
    const Label label = tokens->Find(token);
    if (label < 0) {
      ++skipped;
      continue;
    }
    entries.push_back({label, std::move(spelling)});
  }
  if (skipped > 0) {
    LogWarning(fmt::format("{} lexicon tokens are not in the LM vocabulary "
                           "and were left out",
                           skipped));
  }

  std::set<std::u32string> prefixes;
  std::map<std::u32string, int> totals;
  for (const Entry& e : entries) {
    for (size_t i = 1; i < e.spelling.size(); ++i) {
      prefixes.insert(e.spelling.substr(0, i));
    }
    ++totals[e.spelling];
  }
  std::map<std::u32string, int> used;
  std::vector<int> disambig(entries.size(), 0);
  int max_disambig = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    const std::u32string& s = entries[i].spelling;
    if (prefixes.count(s) > 0 || totals[s] > 1) {
      disambig[i] = ++used[s];
      max_disambig = std::max(max_disambig, disambig[i]);
    }
  }

  auto isyms = std::make_shared<SymbolTable>(*MakeCharacterTable(inventory));
  const Label first_disambig = isyms->Add(kBackoffSymbol);
  for (int k = 1; k <= max_disambig; ++k) isyms->Add(fmt::format("#{}", k));

  Transducer l;
  l.SetInputSymbols(isyms);
  l.SetOutputSymbols(tokens);
  l.SetStart(l.AddState());
  l.SetFinal(0, TropicalWeight::One());
  l.AddArc(0, {first_disambig, tokens->Find(kBackoffSymbol),
               TropicalWeight::One(), 0});
  for (size_t i = 0; i < entries.size(); ++i) {
    std::vector<Label> input;
    for (char32_t c : entries[i].spelling) {
      input.push_back(isyms->Find(CharacterSymbol(c)));
    }
    if (disambig[i] > 0) input.push_back(first_disambig + disambig[i]);
    StateId cur = 0;
    for (size_t j = 0; j < input.size(); ++j) {
      const StateId next = j + 1 == input.size() ? 0 : l.AddState();
      const Label out = j == 0 ? entries[i].token : kEpsilon;
      l.AddArc(cur, {input[j], out, TropicalWeight::One(), next});
      cur = next;
    }
  }
  l.ArcSortInput();
  return l;
}

Transducer BuildGrammarFst(const NgramModel& model,
                           std::shared_ptr<const SymbolTable> tokens) {
  if (!tokens || tokens->Find(kBackoffSymbol) < 0) {
    Fail(ErrorCode::kInvalidArgument,
         "grammar transducer needs a token table ending in #0");
  }
  const Label backoff = tokens->Find(kBackoffSymbol);
  const Vocabulary& vocab = model.vocabulary();
  std::vector<Label> label_of(vocab.size(), -1);
  for (int id = 0; id < static_cast<int>(vocab.size()); ++id) {
    if (id == Vocabulary::kBos || id == Vocabulary::kEos) continue;
    label_of[id] = tokens->Find(vocab.Token(id));
  }

  Transducer g;
  g.SetInputSymbols(tokens);
  g.SetOutputSymbols(tokens);
  const StateId root = g.AddState();
  NgramMap<StateId> context_state;
  const int max_context = model.order() - 1;
  for (int k = 1; k <= max_context; ++k) {
    // Sorted for a deterministic state numbering.
    std::vector<Ngram> contexts;
    for (const auto& [ngram, entry] : model.entries(k)) {
      if (entry.has_backoff) contexts.push_back(ngram);
    }
    std::sort(contexts.begin(), contexts.end());
    for (Ngram& c : contexts) context_state.emplace(std::move(c), g.AddState());
  }
  auto state_for = [&](std::span<const int32_t> history) {
    const size_t max_len =
        std::min<size_t>(history.size(), static_cast<size_t>(max_context));
    for (size_t len = max_len; len >= 1; --len) {
      Ngram suffix(history.end() - static_cast<std::ptrdiff_t>(len),
                   history.end());
      auto it = context_state.find(suffix);
      if (it != context_state.end()) return it->second;
    }
    return root;
  };

  const Ngram bos = {Vocabulary::kBos};
  auto bos_it = context_state.find(bos);
  g.SetStart(bos_it != context_state.end() ? bos_it->second : root);

  for (int k = 1; k <= model.order(); ++k) {
    std::vector<std::pair<Ngram, NgramEntry>> rows(model.entries(k).begin(),
                                                   model.entries(k).end());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [ngram, entry] : rows) {
      StateId src = root;
      if (k > 1) {
        auto it = context_state.find(Ngram(ngram.begin(), ngram.end() - 1));
        if (it == context_state.end()) continue;
        src = it->second;
      }
      const int32_t word = ngram.back();
      if (word == Vocabulary::kBos) continue;
      const double w = NegLn(entry.log10_prob);
      if (word == Vocabulary::kEos) {
        g.SetFinal(src, TropicalWeight(w));
        continue;
      }
      const Label label = label_of[word];
      if (label < 0) continue;
      g.AddArc(src, {label, label, TropicalWeight(w), state_for(ngram)});
    }
  }
  for (const auto& [context, state] : context_state) {
    const NgramEntry* entry = model.Find(context);
    const StateId dst =
        state_for(std::span<const int32_t>(context).subspan(1));
    g.AddArc(state, {backoff, kEpsilon,
                     TropicalWeight(NegLn(entry->log10_backoff)), dst});
  }
  g.ArcSortInput();
  return g;
}

SearchGraph BuildSearchGraph(const Transducer& token_fst,
                             const Transducer& lexicon_fst,
                             const Transducer& grammar_fst,
                             GraphMetadata metadata) {
  if (!token_fst.output_symbols() || !lexicon_fst.input_symbols() ||
      !lexicon_fst.output_symbols() || !grammar_fst.input_symbols() ||
      !token_fst.output_symbols()->IsCompatible(*lexicon_fst.input_symbols()) ||
      !lexicon_fst.output_symbols()->IsCompatible(
          *grammar_fst.input_symbols())) {
    Fail(ErrorCode::kSymbolMismatch,
         "search graph: symbol tables of T, L and G do not chain");
  }
  const Label backoff = grammar_fst.input_symbols()->Find(kBackoffSymbol);
  bool has_tokens = false;
  for (StateId s = 0; s < static_cast<StateId>(grammar_fst.NumStates()) &&
                      !has_tokens;
       ++s) {
    for (const Arc& arc : grammar_fst.Arcs(s)) {
      if (arc.ilabel != backoff) {
        has_tokens = true;
        break;
      }
    }
  }
  if (!has_tokens) {
    Fail(ErrorCode::kInvalidArgument,
         "search graph: the language model vocabulary is empty");
  }

  Transducer lg = Compose(lexicon_fst, grammar_fst);
  Transducer det = Determinize(lg);
  Transducer min = Minimize(det);
  const Label first_disambig = lexicon_fst.input_symbols()->Find(kBackoffSymbol);
  RelabelInput(&min, [first_disambig](Label l) {
    return l >= first_disambig ? kEpsilon : l;
  });
  min.SetInputSymbols(token_fst.output_symbols());
  min.ArcSortInput();

  SearchGraph out;
  out.graph = Compose(token_fst, min);
  out.graph.ArcSortInput();
  out.metadata = std::move(metadata);
  if (out.graph.NumStates() == 0) {
    Fail(ErrorCode::kNoPath, "search graph accepts no input");
  }
  return out;
}

SearchGraph BuildSearchGraph(const NgramModel& model,
                             std::span<const std::string> lexicon,
                             const CharacterInventory& inventory,
                             GraphMetadata metadata) {
  const std::vector<std::string> predictable = PredictableTokens(model);
  auto tokens = MakeTokenTable(predictable);
  std::vector<std::string> spelled;
  std::set<std::string_view> allowed(lexicon.begin(), lexicon.end());
  for (const std::string& t : predictable) {
    if (t == kSpToken) {
      // Word boundaries exist only when the inventory has a space.
      if (inventory.includes_space()) spelled.push_back(t);
    } else if (lexicon.empty() || allowed.count(t) > 0) {
      spelled.push_back(t);
    }
  }
  metadata.charset_size = inventory.size();
  metadata.lm_order = model.order();
  return BuildSearchGraph(BuildTokenFst(inventory),
                          BuildLexiconFst(spelled, inventory, tokens),
                          BuildGrammarFst(model, tokens), std::move(metadata));
}

GraphStats ComputeGraphStats(const Transducer& graph) {
  return {graph.NumStates(), graph.NumArcs(), TransducerToText(graph).size()};
}

void WriteSearchGraph(const SearchGraph& graph,
                      const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir.string());
  WriteTransducer(graph.graph, dir / "graph.fst");
  if (graph.graph.input_symbols()) {
    graph.graph.input_symbols()->WriteText(dir / "isyms.txt");
  }
  if (graph.graph.output_symbols()) {
    graph.graph.output_symbols()->WriteText(dir / "osyms.txt");
  }
  std::ofstream meta(dir / "meta.txt", std::ios::binary);
  if (!meta) Fail(ErrorCode::kIo, "cannot write " + (dir / "meta.txt").string());
  const GraphMetadata& m = graph.metadata;
  meta << "lexicon_type=" << m.lexicon_type << "\n"
       << "lm_order=" << m.lm_order << "\n"
       << "charset_size=" << m.charset_size << "\n"
       << "timestamp=" << m.timestamp << "\n";
}

namespace {

GraphMetadata ReadMetadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  GraphMetadata m;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    const std::string where = fmt::format("{}:{}", path.string(), lineno);
    if (eq == std::string::npos) Fail(ErrorCode::kFormat, where + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "lexicon_type") {
        m.lexicon_type = value;
      } else if (key == "lm_order") {
        m.lm_order = std::stoi(value);
      } else if (key == "charset_size") {
        m.charset_size = std::stoul(value);
      } else if (key == "timestamp") {
        m.timestamp = std::stoll(value);
      }
    } catch (const std::exception&) {
      Fail(ErrorCode::kFormat, where + ": bad value for " + key);
    }
  }
  return m;
}

}  // namespace

SearchGraph ReadSearchGraph(const std::filesystem::path& dir) {
  SearchGraph out;
  out.graph = ReadTransducer(dir / "graph.fst");
  auto isyms = std::make_shared<SymbolTable>(
      SymbolTable::ReadText(dir / "isyms.txt"));
  auto osyms = std::make_shared<SymbolTable>(
      SymbolTable::ReadText(dir / "osyms.txt"));
  out.graph.SetInputSymbols(std::move(isyms));
  out.graph.SetOutputSymbols(std::move(osyms));
  out.graph.Validate();
  out.metadata = ReadMetadata(dir / "meta.txt");
  return out;
}

GraphStats ReadGraphStats(const std::filesystem::path& dir) {
  const Transducer t = ReadTransducer(dir / "graph.fst");
  GraphStats stats{t.NumStates(), t.NumArcs(), 0};
  stats.bytes = std::filesystem::file_size(dir / "graph.fst");
  return stats;
}

}  // namespace mgram
