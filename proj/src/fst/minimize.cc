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
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

#include "mgram/base/error.h"
#include "mgram/fst/algorithms.h"

namespace mgram {
namespace {

constexpr double kWeightQuantum = 1e-9;

int64_t Quantize(TropicalWeight w) {
  if (w.IsZero()) return std::numeric_limits<int64_t>::max();
  return std::llround(w.Value() / kWeightQuantum);
}

struct VectorHash {
  size_t operator()(const std::vector<int64_t>& v) const {
    size_t h = v.size();
    for (int64_t x : v) {
      h ^= std::hash<int64_t>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

Transducer Minimize(const Transducer& input) {
  Transducer t = Connect(input);
  if (t.NumStates() == 0) return t;
  // Epsilon counts as an ordinary label here so flushed residual arcs are
  // accepted.
  for (StateId s = 0; s < static_cast<StateId>(t.NumStates()); ++s) {
    std::vector<Label> labels;
    for (const Arc& arc : t.Arcs(s)) labels.push_back(arc.ilabel);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      Fail(ErrorCode::kInvalidArgument,
           "minimize: input is not deterministic at state " + std::to_string(s));
    }
  }

  // Push weights toward the start. The start keeps potential 0 so the total
  // path weight is unchanged.
  std::vector<TropicalWeight> potential = ShortestDistance(t, true);
  potential[t.Start()] = TropicalWeight::One();
  const auto n = static_cast<StateId>(t.NumStates());
  for (StateId s = 0; s < n; ++s) {
    for (Arc& arc : t.MutableArcs(s)) {
      arc.weight = TropicalWeight(arc.weight.Value() +
                                  potential[arc.nextstate].Value() -
                                  potential[s].Value());
    }
    if (t.IsFinal(s)) {
      t.SetFinal(s, TropicalWeight(t.Final(s).Value() - potential[s].Value()));
    }
  }

  // Moore refinement until the number of classes stops growing.
  std::vector<int32_t> cls(n, 0);
  {
    std::map<int64_t, int32_t> initial;
    for (StateId s = 0; s < n; ++s) {
      auto [it, _] = initial.emplace(Quantize(t.Final(s)),
                                     static_cast<int32_t>(initial.size()));
      cls[s] = it->second;
    }
  }
  size_t num_classes = 0;
  std::vector<int64_t> sig;
  std::vector<std::tuple<Label, Label, int64_t, int32_t>> arcs;
  while (true) {
    std::unordered_map<std::vector<int64_t>, int32_t, VectorHash> ids;
    std::vector<int32_t> next(n);
    for (StateId s = 0; s < n; ++s) {
      arcs.clear();
      for (const Arc& arc : t.Arcs(s)) {
        arcs.emplace_back(arc.ilabel, arc.olabel, Quantize(arc.weight),
                          cls[arc.nextstate]);
      }
      std::sort(arcs.begin(), arcs.end());
      sig.clear();
      sig.push_back(cls[s]);
      for (const auto& [i, o, w, c] : arcs) {
        sig.insert(sig.end(), {i, o, w, c});
      }
      auto [it, _] = ids.emplace(sig, static_cast<int32_t>(ids.size()));
      next[s] = it->second;
    }
    cls.swap(next);
    if (ids.size() == num_classes) break;
    num_classes = ids.size();
  }

  Transducer out;
  out.SetInputSymbols(t.input_symbols());
  out.SetOutputSymbols(t.output_symbols());
  // Classes are numbered in order of first appearance, so the state order of
  // the input is kept as far as possible.
  out.AddStates(num_classes);
  std::vector<char> done(num_classes, 0);
  for (StateId s = 0; s < n; ++s) {
    const int32_t c = cls[s];
    if (done[c]) continue;
    done[c] = 1;
    out.SetFinal(c, t.Final(s));
    for (const Arc& arc : t.Arcs(s)) {
      out.AddArc(c, {arc.ilabel, arc.olabel, arc.weight, cls[arc.nextstate]});
    }
  }
  out.SetStart(cls[t.Start()]);
  out.ArcSortInput();
  return out;
}

}  // namespace mgram
