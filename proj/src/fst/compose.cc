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

#include <deque>
#include <unordered_map>

#include "mgram/base/error.h"
#include "mgram/fst/algorithms.h"

namespace mgram {
namespace {

struct Triple {
  StateId a;
  StateId b;
  int filter;
  bool operator==(const Triple&) const = default;
};

struct TripleHash {
  size_t operator()(const Triple& t) const {
    return (static_cast<size_t>(t.a) * 1000003u) ^
           (static_cast<size_t>(t.b) << 2) ^ static_cast<size_t>(t.filter);
  }
};

}  // namespace

// Filter states: 0 = free, 1 = only `a` may take epsilon moves next,
// 2 = only `b` may.
Transducer Compose(const Transducer& a, const Transducer& b) {
  if (a.output_symbols() && b.input_symbols() &&
      !a.output_symbols()->IsCompatible(*b.input_symbols())) {
    Fail(ErrorCode::kSymbolMismatch,
         "compose: output symbols of the left operand do not match the input "
         "symbols of the right operand");
  }
  Transducer out;
  out.SetInputSymbols(a.input_symbols());
  out.SetOutputSymbols(b.output_symbols());
  if (a.NumStates() == 0 || b.NumStates() == 0 || a.Start() == kNoState ||
      b.Start() == kNoState) {
    return out;
  }

  Transducer b_sorted;
  const Transducer* bp = &b;
  if (!b.IsInputSorted()) {
    b_sorted = b;
    b_sorted.ArcSortInput();
    bp = &b_sorted;
  }
  const Transducer& rb = *bp;

  std::vector<char> a_has_oeps(a.NumStates(), 0);
  for (StateId s = 0; s < static_cast<StateId>(a.NumStates()); ++s) {
    for (const Arc& arc : a.Arcs(s)) {
      if (arc.olabel == kEpsilon) {
        a_has_oeps[s] = 1;
        break;
      }
    }
  }
  auto b_has_ieps = [&](StateId s) {
    return !rb.ArcsWithInput(s, kEpsilon).empty();
  };

  std::unordered_map<Triple, StateId, TripleHash> ids;
  std::deque<Triple> queue;
  auto state_of = [&](StateId qa, StateId qb, int f) {
    if (f == 1 && !b_has_ieps(qb)) f = 0;
    if (f == 2 && !a_has_oeps[qa]) f = 0;
    Triple key{qa, qb, f};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const StateId id = out.AddState();
    ids.emplace(key, id);
    queue.push_back(key);
    return id;
  };

  out.SetStart(state_of(a.Start(), b.Start(), 0));
  while (!queue.empty()) {
    const Triple cur = queue.front();
    queue.pop_front();
    const StateId src = ids.at(cur);
    const TropicalWeight fa = a.Final(cur.a);
    const TropicalWeight fb = rb.Final(cur.b);
    if (!fa.IsZero() && !fb.IsZero()) out.SetFinal(src, Times(fa, fb));

    for (const Arc& x : a.Arcs(cur.a)) {
      if (x.olabel == kEpsilon) {
        // `a` advances alone.
        if (cur.filter != 2) {
          const StateId dst = state_of(x.nextstate, cur.b, 1);
          out.AddArc(src, {x.ilabel, kEpsilon, x.weight, dst});
        }
        // Both advance on epsilon.
        if (cur.filter == 0) {
          for (const Arc& y : rb.ArcsWithInput(cur.b, kEpsilon)) {
            const StateId dst = state_of(x.nextstate, y.nextstate, 0);
            out.AddArc(src, {x.ilabel, y.olabel, Times(x.weight, y.weight),
                             dst});
          }
        }
        continue;
      }
      for (const Arc& y : rb.ArcsWithInput(cur.b, x.olabel)) {
        const StateId dst = state_of(x.nextstate, y.nextstate, 0);
        out.AddArc(src, {x.ilabel, y.olabel, Times(x.weight, y.weight), dst});
      }
    }
    // `b` advances alone.
    if (cur.filter != 1) {
      for (const Arc& y : rb.ArcsWithInput(cur.b, kEpsilon)) {
        const StateId dst = state_of(cur.a, y.nextstate, 2);
        out.AddArc(src, {kEpsilon, y.olabel, y.weight, dst});
      }
    }
  }
  return Connect(out);
}

}  // namespace mgram
