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

#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <tuple>

#include "mgram/base/error.h"
#include "mgram/fst/algorithms.h"

namespace mgram {

Transducer RemoveEpsilons(const Transducer& t) {
  const auto n = static_cast<StateId>(t.NumStates());
  Transducer out;
  out.SetInputSymbols(t.input_symbols());
  out.SetOutputSymbols(t.output_symbols());
  if (n == 0 || t.Start() == kNoState) return out;
  out.AddStates(n);
  out.SetStart(t.Start());

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<size_t> visits(n, 0);
  std::vector<char> queued(n, 0);
  std::vector<StateId> touched;
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s) {
    // Closure over epsilon:epsilon arcs from s.
    for (StateId r : touched) {
      dist[r] = std::numeric_limits<double>::infinity();
      visits[r] = 0;
    }
    touched.assign(1, s);
    dist[s] = 0.0;
    queue.push_back(s);
    queued[s] = 1;
    while (!queue.empty()) {
      const StateId r = queue.front();
      queue.pop_front();
      queued[r] = 0;
      if (++visits[r] > static_cast<size_t>(n) + 1) {
        Fail(ErrorCode::kInvalidArgument,
             "remove_epsilons: negative-weight epsilon cycle");
      }
      for (const Arc& arc : t.Arcs(r)) {
        if (arc.ilabel != kEpsilon || arc.olabel != kEpsilon) continue;
        const double d = dist[r] + arc.weight.Value();
        if (d < dist[arc.nextstate]) {
          if (std::isinf(dist[arc.nextstate])) touched.push_back(arc.nextstate);
          dist[arc.nextstate] = d;
          if (!queued[arc.nextstate]) {
            queued[arc.nextstate] = 1;
            queue.push_back(arc.nextstate);
          }
        }
      }
    }

    TropicalWeight final_weight = TropicalWeight::Zero();
    std::map<std::tuple<Label, Label, StateId>, double> merged;
    for (StateId r : touched) {
      if (t.IsFinal(r)) {
        final_weight = Plus(final_weight,
                            TropicalWeight(dist[r] + t.Final(r).Value()));
      }
      for (const Arc& arc : t.Arcs(r)) {
        if (arc.ilabel == kEpsilon && arc.olabel == kEpsilon) continue;
        const double w = dist[r] + arc.weight.Value();
        auto key = std::make_tuple(arc.ilabel, arc.olabel, arc.nextstate);
        auto [it, inserted] = merged.emplace(key, w);
        if (!inserted) it->second = std::min(it->second, w);
      }
    }
    out.SetFinal(s, final_weight);
    for (const auto& [key, w] : merged) {
      const auto& [il, ol, next] = key;
      out.AddArc(s, {il, ol, TropicalWeight(w), next});
    }
  }
  Transducer result = Connect(out);
  result.ArcSortInput();
  return result;
}

}  // namespace mgram
