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
#include <deque>
#include <queue>
#include <tuple>

#include "mgram/base/error.h"
#include "mgram/fst/algorithms.h"

namespace mgram {
namespace {

// Label-correcting relaxation over an adjacency given as (from, to, weight).
// A state re-enqueued more than |Q| times lies on a negative cycle.
std::vector<TropicalWeight> Relax(
    size_t num_states, std::vector<TropicalWeight> dist,
    const std::vector<std::vector<std::pair<StateId, double>>>& adj) {
  std::deque<StateId> queue;
  std::vector<char> queued(num_states, 0);
  std::vector<size_t> visits(num_states, 0);
  for (StateId s = 0; s < static_cast<StateId>(num_states); ++s) {
    if (!dist[s].IsZero()) {
      queue.push_back(s);
      queued[s] = 1;
    }
  }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    queued[s] = 0;
    if (++visits[s] > num_states + 1) {
      Fail(ErrorCode::kInvalidArgument, "negative-weight cycle detected");
    }
    for (const auto& [next, w] : adj[s]) {
      const double nd = dist[s].Value() + w;
      if (nd < dist[next].Value()) {
        dist[next] = TropicalWeight(nd);
        if (!queued[next]) {
          queued[next] = 1;
          queue.push_back(next);
        }
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<TropicalWeight> ShortestDistance(const Transducer& t,
                                             bool reverse) {
  const size_t n = t.NumStates();
  std::vector<TropicalWeight> dist(n, TropicalWeight::Zero());
  if (n == 0 || t.Start() == kNoState) return dist;
  std::vector<std::vector<std::pair<StateId, double>>> adj(n);
  for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
    for (const Arc& arc : t.Arcs(s)) {
      if (arc.weight.IsZero()) continue;
      if (reverse) {
        adj[arc.nextstate].emplace_back(s, arc.weight.Value());
      } else {
        adj[s].emplace_back(arc.nextstate, arc.weight.Value());
      }
    }
    if (reverse) dist[s] = t.Final(s);
  }
  if (!reverse) dist[t.Start()] = TropicalWeight::One();
  return Relax(n, std::move(dist), adj);
}

Transducer Connect(const Transducer& t) {
  const size_t n = t.NumStates();
  Transducer out;
  out.SetInputSymbols(t.input_symbols());
  out.SetOutputSymbols(t.output_symbols());
  if (n == 0 || t.Start() == kNoState) return out;

  std::vector<char> access(n, 0), coaccess(n, 0);
  std::vector<StateId> stack = {t.Start()};
  access[t.Start()] = 1;
  std::vector<std::vector<StateId>> rev(n);
  for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
    for (const Arc& arc : t.Arcs(s)) rev[arc.nextstate].push_back(s);
  }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (const Arc& arc : t.Arcs(s)) {
      if (!access[arc.nextstate]) {
        access[arc.nextstate] = 1;
        stack.push_back(arc.nextstate);
      }
    }
  }
  for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
    if (t.IsFinal(s)) {
      coaccess[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (StateId p : rev[s]) {
      if (!coaccess[p]) {
        coaccess[p] = 1;
        stack.push_back(p);
      }
    }
  }
  if (!coaccess[t.Start()]) return out;

  std::vector<StateId> remap(n, kNoState);
  for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
    if (access[s] && coaccess[s]) remap[s] = out.AddState();
  }
  for (StateId s = 0; s < static_cast<StateId>(n); ++s) {
    if (remap[s] == kNoState) continue;
    out.SetFinal(remap[s], t.Final(s));
    for (const Arc& arc : t.Arcs(s)) {
      if (remap[arc.nextstate] == kNoState || arc.weight.IsZero()) continue;
      out.AddArc(remap[s], {arc.ilabel, arc.olabel, arc.weight,
                            remap[arc.nextstate]});
    }
  }
  out.SetStart(remap[t.Start()]);
  return out;
}

bool IsInputDeterministic(const Transducer& t) {
  std::vector<Label> labels;
  for (StateId s = 0; s < static_cast<StateId>(t.NumStates()); ++s) {
    labels.clear();
    for (const Arc& arc : t.Arcs(s)) {
      if (arc.ilabel == kEpsilon) return false;
      labels.push_back(arc.ilabel);
    }
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
      return false;
    }
  }
  return true;
}

void RelabelInput(Transducer* t, const std::function<Label(Label)>& map) {
  for (StateId s = 0; s < static_cast<StateId>(t->NumStates()); ++s) {
    for (Arc& arc : t->MutableArcs(s)) arc.ilabel = map(arc.ilabel);
  }
  if (t->IsInputSorted()) t->ArcSortInput();
}

std::vector<Path> EnumeratePaths(const Transducer& t, size_t max_len) {
  std::vector<Path> paths;
  if (t.NumStates() == 0 || t.Start() == kNoState) return paths;
  std::vector<Arc> trail;
  auto emit = [&](StateId s) {
    Path p;
    p.arcs = trail;
    double w = 0.0;
    for (const Arc& arc : trail) {
      w += arc.weight.Value();
      if (arc.ilabel != kEpsilon) p.input.push_back(arc.ilabel);
      if (arc.olabel != kEpsilon) p.output.push_back(arc.olabel);
    }
    p.weight = TropicalWeight(w + t.Final(s).Value());
    paths.push_back(std::move(p));
  };
  std::function<void(StateId)> visit = [&](StateId s) {
    if (t.IsFinal(s)) emit(s);
    if (trail.size() == max_len) return;
    for (const Arc& arc : t.Arcs(s)) {
      if (arc.weight.IsZero()) continue;
      trail.push_back(arc);
      visit(arc.nextstate);
      trail.pop_back();
    }
  };
  visit(t.Start());
  return paths;
}

std::vector<Path> ShortestPath(const Transducer& t, size_t n) {
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "n must be at least 1");
  if (t.NumStates() == 0 || t.Start() == kNoState) {
    Fail(ErrorCode::kNoPath, "transducer has no accepting path");
  }
  const std::vector<TropicalWeight> potential = ShortestDistance(t, true);
  if (potential[t.Start()].IsZero()) {
    Fail(ErrorCode::kNoPath, "transducer has no accepting path");
  }

  // A* over (state, prefix) items with the exact distance-to-final as the
  // heuristic. An item with state == kNoState marks a completed path.
  struct Item {
    StateId state;
    double cost;
    int64_t parent;
    Arc arc;
  };
  std::vector<Item> items;
  using Entry = std::tuple<double, int64_t>;  // (priority, item index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  items.push_back({t.Start(), 0.0, -1, Arc{}});
  heap.emplace(potential[t.Start()].Value(), 0);
  std::vector<size_t> pops(t.NumStates(), 0);
  std::vector<Path> result;

  while (!heap.empty() && result.size() < n) {
    const auto [priority, index] = heap.top();
    heap.pop();
    const Item item = items[index];
    if (item.state == kNoState) {
      Path p;
      for (int64_t i = item.parent; items[i].parent >= 0; i = items[i].parent) {
        p.arcs.push_back(items[i].arc);
      }
      std::reverse(p.arcs.begin(), p.arcs.end());
      double w = 0.0;
      for (const Arc& arc : p.arcs) {
        w += arc.weight.Value();
        if (arc.ilabel != kEpsilon) p.input.push_back(arc.ilabel);
        if (arc.olabel != kEpsilon) p.output.push_back(arc.olabel);
      }
      p.weight = TropicalWeight(w + t.Final(items[item.parent].state).Value());
      result.push_back(std::move(p));
      continue;
    }
    if (++pops[item.state] > n) continue;
    if (t.IsFinal(item.state)) {
      const double cost = item.cost + t.Final(item.state).Value();
      items.push_back({kNoState, cost, index, Arc{}});
      heap.emplace(cost, static_cast<int64_t>(items.size() - 1));
    }
    for (const Arc& arc : t.Arcs(item.state)) {
      const TropicalWeight h = potential[arc.nextstate];
      if (h.IsZero() || arc.weight.IsZero()) continue;
      const double cost = item.cost + arc.weight.Value();
      items.push_back({arc.nextstate, cost, index, arc});
      heap.emplace(cost + h.Value(), static_cast<int64_t>(items.size() - 1));
    }
  }
  return result;
}

}  // namespace mgram
