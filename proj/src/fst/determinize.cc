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

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>

#include "mgram/base/error.h"
#include "mgram/fst/algorithms.h"

namespace mgram {
namespace {

constexpr double kResidualQuantum = 1e-10;

struct Element {
  StateId state;
  std::vector<Label> residual;
  double weight;
};

using Subset = std::vector<Element>;

struct SubsetKey {
  std::vector<int64_t> data;
  bool operator==(const SubsetKey&) const = default;
};

struct SubsetKeyHash {
  size_t operator()(const SubsetKey& k) const {
    size_t h = k.data.size();
    for (int64_t v : k.data) {
      h ^= std::hash<int64_t>()(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

SubsetKey KeyOf(const Subset& subset) {
  SubsetKey key;
  for (const Element& e : subset) {
    key.data.push_back(e.state);
    key.data.push_back(std::llround(e.weight / kResidualQuantum));
    key.data.push_back(static_cast<int64_t>(e.residual.size()));
    key.data.insert(key.data.end(), e.residual.begin(), e.residual.end());
  }
  return key;
}

size_t CommonPrefix(const std::vector<Label>& a, const std::vector<Label>& b,
                    size_t limit) {
  size_t i = 0;
  while (i < limit && i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return i;
}

[[noreturn]] void NonFunctional() {
  Fail(ErrorCode::kDeterminize,
       "determinize: input is not functional (one input string maps to "
       "several outputs)");
}

}  // namespace

Transducer Determinize(const Transducer& input, double budget_factor) {
  Transducer t = RemoveEpsilons(input);
  for (StateId s = 0; s < static_cast<StateId>(t.NumStates()); ++s) {
    for (const Arc& arc : t.Arcs(s)) {
      if (arc.ilabel == kEpsilon) {
        Fail(ErrorCode::kDeterminize,
             "determinize: input-epsilon arcs with non-epsilon output");
      }
    }
  }
  Transducer out;
  out.SetInputSymbols(t.input_symbols());
  out.SetOutputSymbols(t.output_symbols());
  if (t.NumStates() == 0 || t.Start() == kNoState) return out;

  const size_t budget = std::max<size_t>(
      static_cast<size_t>(budget_factor * static_cast<double>(t.NumStates())),
      50);
  std::unordered_map<SubsetKey, StateId, SubsetKeyHash> ids;
  std::vector<Subset> subsets;
  std::deque<StateId> queue;
  StateId flush_final = kNoState;

  auto state_of = [&](Subset subset) {
    std::sort(subset.begin(), subset.end(),
              [](const Element& x, const Element& y) { return x.state < y.state; });
    SubsetKey key = KeyOf(subset);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (out.NumStates() >= budget) {
      Fail(ErrorCode::kDeterminize,
           "determinize: state budget of " + std::to_string(budget) +
               " exceeded; the input is probably not determinizable");
    }
    const StateId id = out.AddState();
    ids.emplace(std::move(key), id);
    subsets.push_back(std::move(subset));
    queue.push_back(id);
    return id;
  };

  // Emits `residual` on a chain of input-epsilon arcs ending in a shared
  // final state.
  auto flush = [&](StateId from, const std::vector<Label>& residual,
                   double weight) {
    if (flush_final == kNoState) {
      flush_final = out.AddState();
      subsets.emplace_back();
      out.SetFinal(flush_final, TropicalWeight::One());
    }
    StateId cur = from;
    for (size_t i = 0; i < residual.size(); ++i) {
      StateId next = flush_final;
      if (i + 1 < residual.size()) {
        next = out.AddState();
        subsets.emplace_back();
      }
      const double w = i == 0 ? weight : 0.0;
      out.AddArc(cur, {kEpsilon, residual[i], TropicalWeight(w), next});
      cur = next;
    }
  };

  out.SetStart(state_of({Element{t.Start(), {}, 0.0}}));
  while (!queue.empty()) {
    const StateId src = queue.front();
    queue.pop_front();
    const Subset subset = subsets[src];

    // Final weight.
    const Element* best_final = nullptr;
    double final_weight = 0.0;
    for (const Element& e : subset) {
      if (!t.IsFinal(e.state)) continue;
      const double w = e.weight + t.Final(e.state).Value();
      if (best_final != nullptr && e.residual != best_final->residual) {
        NonFunctional();
      }
      if (best_final == nullptr || w < final_weight) {
        best_final = &e;
        final_weight = w;
      }
    }
    if (best_final != nullptr) {
      if (best_final->residual.empty()) {
        out.SetFinal(src, TropicalWeight(final_weight));
      } else {
        flush(src, best_final->residual, final_weight);
      }
    }

    // Group transitions by input label.
    struct Candidate {
      StateId next;
      std::vector<Label> output;
      double weight;
    };
    std::map<Label, std::vector<Candidate>> by_label;
    for (const Element& e : subset) {
      for (const Arc& arc : t.Arcs(e.state)) {
        Candidate c{arc.nextstate, e.residual, e.weight + arc.weight.Value()};
        if (arc.olabel != kEpsilon) c.output.push_back(arc.olabel);
        by_label[arc.ilabel].push_back(std::move(c));
      }
    }
    for (auto& [label, candidates] : by_label) {
      double total = candidates[0].weight;
      size_t prefix = candidates[0].output.size();
      for (const Candidate& c : candidates) {
        total = std::min(total, c.weight);
        prefix = CommonPrefix(candidates[0].output, c.output, prefix);
      }
      // At most one output label per arc keeps the result input-deterministic;
      // the rest of the common prefix stays in the residuals.
      prefix = std::min<size_t>(prefix, 1);
      std::map<StateId, Element> next;
      for (const Candidate& c : candidates) {
        std::vector<Label> residual(c.output.begin() + prefix, c.output.end());
        const double w = c.weight - total;
        auto [it, inserted] =
            next.try_emplace(c.next, Element{c.next, residual, w});
        if (!inserted) {
          if (it->second.residual != residual) NonFunctional();
          it->second.weight = std::min(it->second.weight, w);
        }
      }
      Subset dest;
      for (auto& [s, e] : next) dest.push_back(std::move(e));
      const Label olabel = prefix == 0 ? kEpsilon : candidates[0].output[0];
      const StateId dst = state_of(std::move(dest));
      out.AddArc(src, {label, olabel, TropicalWeight(total), dst});
    }
  }
  out.ArcSortInput();
  return out;
}

}  // namespace mgram
