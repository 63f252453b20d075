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

#ifndef MGRAM_FST_ALGORITHMS_H_
#define MGRAM_FST_ALGORITHMS_H_

#include <cstddef>
#include <functional>
#include <vector>

#include "mgram/fst/transducer.h"

namespace mgram {

struct Path {
  std::vector<Arc> arcs;
  TropicalWeight weight;
  // Non-epsilon labels along the path.
  std::vector<Label> input;
  std::vector<Label> output;
};

// Keeps only states that are both accessible and coaccessible. State order is
// preserved. Returns an empty machine when nothing survives.
Transducer Connect(const Transducer& t);

// Single-source distances from the start (forward) or to any final state,
// final weights included (reverse). Unreachable states get Zero(). Throws
// on negative cycles.
std::vector<TropicalWeight> ShortestDistance(const Transducer& t, bool reverse);

bool IsInputDeterministic(const Transducer& t);

// Three-state epsilon filter. Throws kSymbolMismatch when a's output table
// and b's input table disagree.
Transducer Compose(const Transducer& a, const Transducer& b);

// Weighted subset construction carrying output residuals. Input must be
// functional. Fails with kDeterminize once more than
// max(budget_factor * |Q|, 50) states are produced.
Transducer Determinize(const Transducer& t, double budget_factor = 50.0);

// Weight pushing followed by partition refinement over
// (ilabel, olabel, weight, next class). Input must be deterministic.
Transducer Minimize(const Transducer& t);

// Removes arcs with epsilon on both sides.
Transducer RemoveEpsilons(const Transducer& t);

// Up to n best accepting paths in non-decreasing weight order. Throws
// kNoPath when none exists.
std::vector<Path> ShortestPath(const Transducer& t, size_t n);

// Every accepting path with at most max_len arcs.
std::vector<Path> EnumeratePaths(const Transducer& t, size_t max_len);

// Applies `map` to every input label in place.
void RelabelInput(Transducer* t, const std::function<Label(Label)>& map);

}  // namespace mgram

#endif  // MGRAM_FST_ALGORITHMS_H_
