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

#include "mgram/fst/transducer.h"

#include <algorithm>
#include <tuple>

#include "mgram/base/error.h"

namespace mgram {

StateId Transducer::AddState() {
  states_.emplace_back();
  return static_cast<StateId>(states_.size() - 1);
}

void Transducer::AddStates(size_t n) { states_.resize(states_.size() + n); }

void Transducer::SetStart(StateId s) { start_ = s; }

void Transducer::SetFinal(StateId s, TropicalWeight w) {
  states_[s].final_weight = w;
}

void Transducer::AddArc(StateId s, const Arc& arc) {
  states_[s].arcs.push_back(arc);
  input_sorted_ = false;
}

size_t Transducer::NumArcs() const {
  size_t n = 0;
  for (const State& s : states_) n += s.arcs.size();
  return n;
}

void Transducer::ArcSortInput() {
  for (State& s : states_) {
    std::sort(s.arcs.begin(), s.arcs.end(), [](const Arc& a, const Arc& b) {
      return std::make_tuple(a.ilabel, a.olabel, a.nextstate, a.weight.Value()) <
             std::make_tuple(b.ilabel, b.olabel, b.nextstate, b.weight.Value());
    });
  }
  input_sorted_ = true;
}

std::span<const Arc> Transducer::ArcsWithInput(StateId s, Label ilabel) const {
  const auto& arcs = states_[s].arcs;
  auto lo = std::lower_bound(
      arcs.begin(), arcs.end(), ilabel,
      [](const Arc& a, Label l) { return a.ilabel < l; });
  auto hi = std::upper_bound(
      lo, arcs.end(), ilabel, [](Label l, const Arc& a) { return l < a.ilabel; });
  return {lo, hi};
}

void Transducer::Validate() const {
  const auto n = static_cast<StateId>(states_.size());
  if (n > 0 && (start_ < 0 || start_ >= n)) {
    Fail(ErrorCode::kInvalidArgument, "transducer has no valid start state");
  }
  for (StateId s = 0; s < n; ++s) {
    for (const Arc& arc : states_[s].arcs) {
      if (arc.nextstate < 0 || arc.nextstate >= n) {
        Fail(ErrorCode::kInvalidArgument,
             "arc from state " + std::to_string(s) + " to invalid state");
      }
      if (arc.ilabel < 0 || arc.olabel < 0 ||
          (isyms_ && static_cast<size_t>(arc.ilabel) >= isyms_->size()) ||
          (osyms_ && static_cast<size_t>(arc.olabel) >= osyms_->size())) {
        Fail(ErrorCode::kInvalidArgument,
             "arc label outside its symbol table at state " + std::to_string(s));
      }
    }
  }
}

}  // namespace mgram
