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

#include "mgram/decoder/decoder.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include <fmt/format.h>

#include "mgram/base/error.h"

namespace mgram {
namespace {

constexpr std::string_view kSpToken = "<sp>";

struct Token {
  double acoustic;
  double lm;
  int32_t node;  // traceback entry, -1 for the empty history
  uint64_t hash;

  double total() const { return acoustic + lm; }
};

struct Node {
  int32_t parent;
  Label olabel;
};

uint64_t Extend(uint64_t hash, Label label) {
  uint64_t h = hash ^ (static_cast<uint64_t>(label) + 0x9e3779b97f4a7c15ULL +
                       (hash << 6) + (hash >> 2));
  h *= 0xff51afd7ed558ccdULL;
  return h ^ (h >> 33);
}

// Active states of one frame, each holding up to n tokens with distinct
// histories.
class ActiveSet {
 public:
  ActiveSet(size_t num_states, size_t n) : slot_(num_states, -1), n_(n) {}

  bool Add(StateId s, const Token& token) {
    int32_t slot = slot_[s];
    if (slot < 0) {
      slot = static_cast<int32_t>(states_.size());
      slot_[s] = slot;
      states_.push_back(s);
      if (tokens_.size() <= static_cast<size_t>(slot)) tokens_.emplace_back();
      tokens_[slot].clear();
    }
    std::vector<Token>& list = tokens_[slot];
    for (Token& t : list) {
      if (t.hash == token.hash) {
        if (token.total() < t.total()) {
          t = token;
          return true;
        }
        return false;
      }
    }
    if (list.size() < n_) {
      list.push_back(token);
      return true;
    }
    auto worst = std::max_element(
        list.begin(), list.end(),
        [](const Token& a, const Token& b) { return a.total() < b.total(); });
    if (token.total() < worst->total()) {
      *worst = token;
      return true;
    }
    return false;
  }

  const std::vector<StateId>& states() const { return states_; }
  const std::vector<Token>& TokensOf(StateId s) const {
    return tokens_[slot_[s]];
  }

  void Clear() {
    for (StateId s : states_) slot_[s] = -1;
    states_.clear();
  }

  void Prune(double beam) {
    if (std::isinf(beam) || states_.empty()) return;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < states_.size(); ++i) {
      for (const Token& t : tokens_[i]) best = std::min(best, t.total());
    }
    const double limit = best + beam;
    std::vector<StateId> kept;
    std::vector<std::vector<Token>> kept_tokens;
    for (size_t i = 0; i < states_.size(); ++i) {
      std::vector<Token>& list = tokens_[i];
      std::erase_if(list, [limit](const Token& t) { return t.total() > limit; });
      slot_[states_[i]] = -1;
      if (!list.empty()) {
        kept.push_back(states_[i]);
        kept_tokens.push_back(std::move(list));
      }
    }
    states_ = std::move(kept);
    for (size_t i = 0; i < states_.size(); ++i) {
      slot_[states_[i]] = static_cast<int32_t>(i);
      tokens_[i] = std::move(kept_tokens[i]);
    }
  }

 private:
  std::vector<int32_t> slot_;
  std::vector<StateId> states_;
  std::vector<std::vector<Token>> tokens_;
  size_t n_;
};

bool HasSpelling(std::string_view token) {
  if (token == kSpToken) return true;
  if (token.empty()) return false;
  if (token.size() > 2 && token.front() == '<' && token.back() == '>') {
    return false;
  }
  if (token.size() > 1 && token[0] == '#' &&
      std::all_of(token.begin() + 1, token.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  return true;
}

}  // namespace

void ValidateDecodeConfig(const DecodeConfig& config) {
  if (!(config.gamma >= 0.0) || std::isinf(config.gamma)) {
    Fail(ErrorCode::kInvalidArgument, "gamma must be finite and >= 0");
  }
  if (!(config.beta > 0.0) || std::isinf(config.beta)) {
    Fail(ErrorCode::kInvalidArgument, "beta must be finite and > 0");
  }
  if (!(config.beam > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "beam must be > 0");
  }
  if (config.n_best < 1) {
    Fail(ErrorCode::kInvalidArgument, "n_best must be at least 1");
  }
}

std::string Detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (const std::string& token : tokens) {
    if (!HasSpelling(token)) {
      Fail(ErrorCode::kInvalidArgument,
           "token '" + token + "' has no spelling");
    }
    out += token == kSpToken ? std::string(" ") : token;
  }
  const size_t first = out.find_first_not_of(' ');
  if (first == std::string::npos) return {};
  const size_t last = out.find_last_not_of(' ');
  return out.substr(first, last - first + 1);
}

std::vector<Hypothesis> DecodeLattice(const PosteriorLattice& lattice,
                                      const Transducer& input_graph,
                                      const DecodeConfig& config) {
  ValidateDecodeConfig(config);
  if (input_graph.NumStates() == 0 || input_graph.Start() == kNoState) {
    Fail(ErrorCode::kInvalidArgument, "decode: the search graph is empty");
  }
  if (const auto& isyms = input_graph.input_symbols()) {
    bool ok = isyms->size() == lattice.num_labels() + 1;
    for (size_t j = 0; ok && j < lattice.num_labels(); ++j) {
      ok = isyms->Symbol(static_cast<Label>(j + 1)) == lattice.labels()[j];
    }
    if (!ok) {
      Fail(ErrorCode::kSymbolMismatch,
           "decode: lattice label table does not match the graph input "
           "symbols");
    }
  }
  Transducer sorted;
  const Transducer* gp = &input_graph;
  if (!input_graph.IsInputSorted()) {
    sorted = input_graph;
    sorted.ArcSortInput();
    gp = &sorted;
  }
  const Transducer& graph = *gp;
  const auto& osyms = graph.output_symbols();
  const Label sp = osyms ? osyms->Find(kSpToken) : -1;
  const double word_penalty = -std::log(config.beta);
  const double gamma = config.gamma;
  const size_t num_labels = lattice.num_labels();

  std::vector<Node> nodes;
  auto advance = [&](const Token& from, const Arc& arc, double acoustic) {
    Token t = from;
    t.acoustic += acoustic;
    t.lm += gamma * arc.weight.Value();
    if (arc.olabel != kEpsilon) {
      if (arc.olabel == sp) t.lm += word_penalty;
      nodes.push_back({from.node, arc.olabel});
      t.node = static_cast<int32_t>(nodes.size() - 1);
      t.hash = Extend(from.hash, arc.olabel);
    }
    return t;
  };

  ActiveSet cur(graph.NumStates(), config.n_best);
  ActiveSet next(graph.NumStates(), config.n_best);
  std::deque<StateId> queue;
  std::vector<char> queued(graph.NumStates(), 0);
  auto closure = [&](ActiveSet& set) {
    for (StateId s : set.states()) {
      queue.push_back(s);
      queued[s] = 1;
    }
    while (!queue.empty()) {
      const StateId s = queue.front();
      queue.pop_front();
      queued[s] = 0;
      const std::vector<Token> tokens = set.TokensOf(s);
      for (const Arc& arc : graph.ArcsWithInput(s, kEpsilon)) {
        for (const Token& tok : tokens) {
          if (set.Add(arc.nextstate, advance(tok, arc, 0.0)) &&
              !queued[arc.nextstate]) {
            queued[arc.nextstate] = 1;
            queue.push_back(arc.nextstate);
          }
        }
      }
    }
  };

  cur.Add(graph.Start(), Token{0.0, 0.0, -1, 0});
  closure(cur);
  cur.Prune(config.beam);
  std::vector<double> cost(num_labels);
  for (size_t t = 0; t < lattice.num_frames(); ++t) {
    std::span<const double> frame = lattice.Frame(t);
    for (size_t j = 0; j < num_labels; ++j) {
      cost[j] = -std::log(std::max(frame[j], kPosteriorFloor));
    }
    next.Clear();
    for (StateId s : cur.states()) {
      for (const Arc& arc : graph.Arcs(s)) {
        if (arc.ilabel == kEpsilon) continue;
        const size_t column = static_cast<size_t>(arc.ilabel) - 1;
        if (column >= num_labels) {
          Fail(ErrorCode::kSymbolMismatch,
               fmt::format("decode: graph label {} has no lattice column",
                           arc.ilabel));
        }
        for (const Token& tok : cur.TokensOf(s)) {
          next.Add(arc.nextstate, advance(tok, arc, cost[column]));
        }
      }
    }
    closure(next);
    next.Prune(config.beam);
    std::swap(cur, next);
    if (cur.states().empty()) break;
  }

  std::unordered_map<uint64_t, Token> finals;
  std::vector<uint64_t> order;
  for (StateId s : cur.states()) {
    if (!graph.IsFinal(s)) continue;
    for (Token tok : cur.TokensOf(s)) {
      tok.lm += gamma * graph.Final(s).Value() + word_penalty;
      auto [it, inserted] = finals.emplace(tok.hash, tok);
      if (inserted) {
        order.push_back(tok.hash);
      } else if (tok.total() < it->second.total()) {
        it->second = tok;
      }
    }
  }
  if (finals.empty()) {
    if (std::isinf(config.beam)) {
      Fail(ErrorCode::kNoPath, "decode: the graph accepts no path for this lattice");
    }
    Fail(ErrorCode::kBeamExhausted,
         "decode: no hypothesis survived the beam; widen it");
  }
  std::vector<Token> ranked;
  for (uint64_t h : order) ranked.push_back(finals.at(h));
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Token& a, const Token& b) {
                     return a.total() < b.total();
                   });
  if (ranked.size() > config.n_best) ranked.resize(config.n_best);

  std::vector<Hypothesis> out;
  for (const Token& tok : ranked) {
    Hypothesis h;
    for (int32_t i = tok.node; i >= 0; i = nodes[i].parent) {
      const Label l = nodes[i].olabel;
      h.tokens.push_back(osyms ? osyms->Symbol(l) : std::to_string(l));
    }
    std::reverse(h.tokens.begin(), h.tokens.end());
    h.acoustic = tok.acoustic;
    h.lm = tok.lm;
    h.total = tok.total();
    h.text = osyms ? Detokenize(h.tokens) : std::string();
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace mgram
