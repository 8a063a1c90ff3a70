// gtc/trellis.cc

// Copyright 2026  The GTC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gtc/trellis.h"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace gtc {

Trellis::Trellis(std::size_t num_frames, std::vector<TrellisState> states,
                 std::vector<TrellisArc> arcs, std::vector<bool> final)
    : num_frames_(num_frames),
      states_(std::move(states)),
      arcs_(std::move(arcs)),
      final_(std::move(final)) {
  const auto n = static_cast<StateId>(states_.size());
  if (n == 0) throw InvalidGraph("trellis has no states");
  if (final_.size() != states_.size())
    throw InvalidGraph("trellis final flags do not match states");
  for (std::size_t s = 0; s < states_.size(); ++s) {
    const auto f = states_[s].frame;
    if (f < 1 || static_cast<std::size_t>(f) > num_frames_)
      throw InvalidGraph("trellis state frame out of range");
    if (final_[s] && static_cast<std::size_t>(f) != num_frames_)
      throw InvalidGraph("trellis final state before the last frame");
  }
  auto frame_of = [&](StateId s) { return s == kSource ? 0 : states_[s].frame; };
  for (const auto &a : arcs_) {
    if (a.src < kSource || a.src >= n || a.dst < 0 || a.dst >= n)
      throw InvalidGraph("trellis arc endpoint out of range");
    if (frame_of(a.dst) != frame_of(a.src) + 1)
      throw InvalidGraph("trellis arc must advance exactly one frame");
  }
  std::stable_sort(arcs_.begin(), arcs_.end(),
                   [&](const TrellisArc &a, const TrellisArc &b) {
                     return states_[a.dst].frame < states_[b.dst].frame;
                   });
}

bool Trellis::is_start(StateId s) const {
  return std::any_of(arcs_.begin(), arcs_.end(), [&](const TrellisArc &a) {
    return a.src == kSource && a.dst == s;
  });
}

Trellis intersect(const LabelGraph &graph, const EmissionMatrix &emissions) {
  validate(graph, emissions.num_symbols());
  const std::size_t num_frames = emissions.num_frames();
  const std::size_t num_nodes = graph.num_nodes();

  // fwd[t][n]: (t, n) reachable from an entry; bwd[t][n]: can reach a final
  // at the last frame. Index t runs 1..T, slot 0 unused.
  std::vector<std::vector<bool>> fwd(num_frames + 1, std::vector<bool>(num_nodes, false));
  std::vector<std::vector<bool>> bwd(num_frames + 1, std::vector<bool>(num_nodes, false));
  for (NodeId s : graph.starts()) fwd[1][s] = true;
  for (std::size_t t = 1; t < num_frames; ++t) {
    for (std::size_t n = 0; n < num_nodes; ++n) {
      if (!fwd[t][n]) continue;
      fwd[t + 1][n] = true;
      for (NodeId m : graph.successors(static_cast<NodeId>(n))) fwd[t + 1][m] = true;
    }
  }
  for (NodeId f : graph.finals()) bwd[num_frames][f] = true;
  for (std::size_t t = num_frames - 1; t >= 1; --t) {
    for (std::size_t n = 0; n < num_nodes; ++n) {
      bool alive = bwd[t + 1][n];
      for (NodeId m : graph.successors(static_cast<NodeId>(n))) alive = alive || bwd[t + 1][m];
      bwd[t][n] = alive;
    }
  }

  const auto order = topo_order(graph);
  std::vector<TrellisState> states;
  std::vector<bool> final;
  // id[t][n] = state id or -1.
  std::vector<std::vector<StateId>> id(num_frames + 1, std::vector<StateId>(num_nodes, -1));
  for (std::size_t t = 1; t <= num_frames; ++t) {
    for (NodeId n : order) {
      if (fwd[t][n] && bwd[t][n]) {
        id[t][n] = static_cast<StateId>(states.size());
        states.push_back({static_cast<int32_t>(t), n});
        final.push_back(t == num_frames && graph.is_final(n));
      }
    }
  }
  if (states.empty())
    throw EmptyIntersection("no accepted alignment has " +
                            std::to_string(num_frames) + " frames");

  std::vector<TrellisArc> arcs;
  auto weight = [&](std::size_t t, NodeId n) {
    Symbol k = graph.symbol(n);
    return TrellisArc{0, 0, k, emissions(t - 1, static_cast<std::size_t>(k))};
  };
  for (NodeId n : order) {
    if (id[1][n] < 0) continue;
    auto a = weight(1, n);
    a.src = Trellis::kSource;
    a.dst = id[1][n];
    arcs.push_back(a);
  }
  for (std::size_t t = 1; t < num_frames; ++t) {
    for (NodeId n : order) {
      const StateId src = id[t][n];
      if (src < 0) continue;
      auto emit = [&](NodeId m) {
        if (id[t + 1][m] < 0) return;
        auto a = weight(t + 1, m);
        a.src = src;
        a.dst = id[t + 1][m];
        arcs.push_back(a);
      };
      emit(n);  // dwell
      for (NodeId m : graph.successors(n)) emit(m);
    }
  }
  return Trellis(num_frames, std::move(states), std::move(arcs), std::move(final));
}

ForwardBackwardResult forward_backward(const Trellis &trellis) {
  const auto arcs = trellis.arcs();
  ForwardBackwardResult r;
  r.alpha.assign(trellis.num_states(), kLogZero);
  r.beta.assign(trellis.num_states(), kLogZero);
  r.arc_posteriors.assign(arcs.size(), 0.0);

  for (const auto &a : arcs) {
    const double from = a.src == Trellis::kSource ? 0.0 : r.alpha[a.src];
    r.alpha[a.dst] = log_add(r.alpha[a.dst], from + a.weight);
  }
  r.total_logprob = kLogZero;
  for (std::size_t s = 0; s < trellis.num_states(); ++s) {
    if (trellis.is_final(static_cast<StateId>(s))) {
      r.beta[s] = 0.0;
      r.total_logprob = log_add(r.total_logprob, r.alpha[s]);
    }
  }

  r.backward_total = kLogZero;
  for (auto it = arcs.rbegin(); it != arcs.rend(); ++it) {
    const double to = it->weight + r.beta[it->dst];
    if (it->src == Trellis::kSource)
      r.backward_total = log_add(r.backward_total, to);
    else
      r.beta[it->src] = log_add(r.beta[it->src], to);
  }

  if (r.total_logprob == kLogZero) return r;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto &a = arcs[i];
    const double from = a.src == Trellis::kSource ? 0.0 : r.alpha[a.src];
    const double lp = from + a.weight + r.beta[a.dst] - r.total_logprob;
    r.arc_posteriors[i] = lp == kLogZero ? 0.0 : std::exp(lp);
  }
  return r;
}

std::vector<StateId> topo_order(const Trellis &trellis) {
  std::vector<GraphArc> arcs;
  for (const auto &a : trellis.arcs())
    if (a.src != Trellis::kSource) arcs.push_back({a.src, a.dst});
  return topo_order(trellis.num_states(), arcs);
}

void write_dot(std::ostream &os, const Trellis &trellis, const Vocabulary &vocab,
               const LabelGraph &graph) {
  os << "digraph Trellis {\n  rankdir=LR;\n  source [shape=point];\n";
  const auto states = trellis.states();
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto id = static_cast<StateId>(s);
    os << "  " << s << " [label=\"" << states[s].frame << ":"
       << vocab.symbol(graph.symbol(states[s].node)) << "\"";
    if (trellis.is_start(id)) os << ", peripheries=2";
    if (trellis.is_final(id)) os << ", style=bold";
    os << "];\n";
  }
  for (const auto &a : trellis.arcs()) {
    os << "  ";
    if (a.src == Trellis::kSource) os << "source";
    else os << a.src;
    os << " -> " << a.dst << " [label=\"" << a.weight << "\"];\n";
  }
  os << "}\n";
}

}  // namespace gtc
