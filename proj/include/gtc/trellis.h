// gtc/trellis.h

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

#ifndef GTC_TRELLIS_H_
#define GTC_TRELLIS_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gtc/emissions.h"
#include "gtc/label_graph.h"

namespace gtc {

using StateId = int32_t;

// (frame, node) pair. Frames are 1-based: the state at frame t means the
// alignment emits the node's symbol at frame t.
struct TrellisState {
  int32_t frame;
  NodeId node;
  bool operator==(const TrellisState &) const = default;
};

struct TrellisArc {
  StateId src;  // Trellis::kSource for frame-0 entry arcs
  StateId dst;
  Symbol symbol;
  double weight;  // log-posterior of `symbol` at the destination frame
  bool operator==(const TrellisArc &) const = default;
};

// Time-synchronous intersection of a label graph and an emission matrix.
// Every arc advances the frame by exactly one, so sorting arcs by
// destination frame gives a topological order.
class Trellis {
 public:
  static constexpr StateId kSource = -1;

  // Checks that arcs advance frames by one and that finals sit at the last
  // frame; arcs are stably reordered by destination frame.
  Trellis(std::size_t num_frames, std::vector<TrellisState> states,
          std::vector<TrellisArc> arcs, std::vector<bool> final);

  std::size_t num_frames() const { return num_frames_; }
  std::size_t num_states() const { return states_.size(); }
  std::span<const TrellisState> states() const { return states_; }
  std::span<const TrellisArc> arcs() const { return arcs_; }
  bool is_final(StateId s) const { return final_[s]; }
  bool is_start(StateId s) const;

  bool operator==(const Trellis &) const = default;

 private:
  std::size_t num_frames_;
  std::vector<TrellisState> states_;
  std::vector<TrellisArc> arcs_;
  std::vector<bool> final_;
};

// Builds the trimmed trellis. Throws EmptyIntersection when no accepted
// alignment has exactly emissions.num_frames() frames, InvalidGraph when
// the graph breaks its invariants or uses symbols outside the emissions.
Trellis intersect(const LabelGraph &graph, const EmissionMatrix &emissions);

struct ForwardBackwardResult {
  double total_logprob;   // from forward scores at the finals
  double backward_total;  // from backward scores at the source
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> arc_posteriors;  // parallel to Trellis::arcs()
};

// Log-semiring forward-backward. If the total is -inf every posterior is 0.
ForwardBackwardResult forward_backward(const Trellis &trellis);

std::vector<StateId> topo_order(const Trellis &trellis);

void write_dot(std::ostream &os, const Trellis &trellis, const Vocabulary &vocab,
               const LabelGraph &graph);

}  // namespace gtc

#endif  // GTC_TRELLIS_H_
