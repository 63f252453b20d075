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

#ifndef MGRAM_FST_TRANSDUCER_H_
#define MGRAM_FST_TRANSDUCER_H_

#include <memory>
#include <span>
#include <vector>

#include "mgram/fst/symbol_table.h"
#include "mgram/fst/weight.h"

namespace mgram {

using StateId = int32_t;
inline constexpr StateId kNoState = -1;

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  TropicalWeight weight;
  StateId nextstate = kNoState;

  bool operator==(const Arc&) const = default;
};

// Mutable weighted transducer with vector-backed states.
class Transducer {
 public:
  Transducer() = default;

  StateId AddState();
  void AddStates(size_t n);
  void SetStart(StateId s);
  void SetFinal(StateId s, TropicalWeight w);
  void AddArc(StateId s, const Arc& arc);
  void ReserveArcs(StateId s, size_t n) { states_[s].arcs.reserve(n); }

  StateId Start() const { return start_; }
  TropicalWeight Final(StateId s) const { return states_[s].final_weight; }
  bool IsFinal(StateId s) const { return !states_[s].final_weight.IsZero(); }
  std::span<const Arc> Arcs(StateId s) const { return states_[s].arcs; }
  std::vector<Arc>& MutableArcs(StateId s) { return states_[s].arcs; }
  size_t NumStates() const { return states_.size(); }
  size_t NumArcs() const;
  size_t NumArcs(StateId s) const { return states_[s].arcs.size(); }

  // Sorts each state's arcs by (ilabel, olabel, nextstate, weight).
  void ArcSortInput();
  bool IsInputSorted() const { return input_sorted_; }
  // Arcs of `s` with the given input label; requires ArcSortInput().
  std::span<const Arc> ArcsWithInput(StateId s, Label ilabel) const;

  const std::shared_ptr<const SymbolTable>& input_symbols() const {
    return isyms_;
  }
  const std::shared_ptr<const SymbolTable>& output_symbols() const {
    return osyms_;
  }
  void SetInputSymbols(std::shared_ptr<const SymbolTable> s) {
    isyms_ = std::move(s);
  }
  void SetOutputSymbols(std::shared_ptr<const SymbolTable> s) {
    osyms_ = std::move(s);
  }

  // Checks that arcs reference valid states and labels fit the tables.
  void Validate() const;

 private:
  struct State {
    std::vector<Arc> arcs;
    TropicalWeight final_weight = TropicalWeight::Zero();
  };

  std::vector<State> states_;
  StateId start_ = kNoState;
  bool input_sorted_ = false;
  std::shared_ptr<const SymbolTable> isyms_;
  std::shared_ptr<const SymbolTable> osyms_;
};

}  // namespace mgram

#endif  // MGRAM_FST_TRANSDUCER_H_
