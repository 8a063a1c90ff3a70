// gtc/label_graph.h

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

#ifndef GTC_LABEL_GRAPH_H_
#define GTC_LABEL_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gtc/common.h"
#include "gtc/vocabulary.h"

namespace gtc {

using NodeId = int32_t;

struct GraphArc {
  NodeId src;
  NodeId dst;
  auto operator<=>(const GraphArc &) const = default;
};

/*
  Node-labeled acceptor. Each node carries a symbol; a path through the
  graph spends one or more frames on every node it visits (every node has an
  implicit self-loop, which is never stored). Explicit arcs must form a DAG.

  A default-constructed graph has no nodes and acts as the empty slot that
  parallel() and serial() start from.
*/
class LabelGraph {
 public:
  LabelGraph() = default;

  NodeId add_node(Symbol symbol, bool start = false, bool final = false);
  // Adding an arc that already exists is a no-op; self-loops are rejected.
  void add_arc(NodeId src, NodeId dst);
  void set_start(NodeId n, bool value = true) { start_.at(n) = value; }
  void set_final(NodeId n, bool value = true) { final_.at(n) = value; }

  std::size_t num_nodes() const { return symbols_.size(); }
  std::size_t num_arcs() const { return arcs_.size(); }
  bool empty() const { return symbols_.empty(); }

  Symbol symbol(NodeId n) const { return symbols_[n]; }
  bool is_start(NodeId n) const { return start_[n]; }
  bool is_final(NodeId n) const { return final_[n]; }
  std::span<const NodeId> successors(NodeId n) const { return out_[n]; }
  std::span<const GraphArc> arcs() const { return arcs_; }

  std::vector<NodeId> starts() const;
  std::vector<NodeId> finals() const;

  bool operator==(const LabelGraph &other) const;

 private:
  std::vector<Symbol> symbols_;
  std::vector<bool> start_;
  std::vector<bool> final_;
  std::vector<GraphArc> arcs_;
  std::vector<std::vector<NodeId>> out_;
};

// Kahn topological order over `num_nodes` nodes; ties go to the smallest
// id. Throws CycleDetected.
std::vector<NodeId> topo_order(std::size_t num_nodes,
                               std::span<const GraphArc> arcs);
std::vector<NodeId> topo_order(const LabelGraph &graph);

// Removes nodes that are not both reachable from a start and co-reachable
// to a final node, renumbering survivors densely in topological order.
// Throws EmptyGraph if nothing survives.
LabelGraph trim(const LabelGraph &graph);

// Subset construction over alignment strings: the result accepts exactly
// the same alignments, but each alignment follows a single path, so path
// sums equal sums over the accepted set. Requires that no explicit arc joins
// two nodes with the same symbol (blank included). Result is trimmed.
LabelGraph determinize(const LabelGraph &graph);

// Checks the LabelGraph invariants: DAG, trim, non-empty start and final
// sets, no arc between distinct nodes sharing a non-blank symbol, and
// symbols < vocab_size (when vocab_size > 0). Throws InvalidGraph.
void validate(const LabelGraph &graph, std::size_t vocab_size = 0);

// Fewest frames any accepted alignment needs (number of nodes on the
// shortest start-to-final path).
std::size_t min_alignment_length(const LabelGraph &graph);

// Graphviz export. Starts get a double border, finals a bold one.
void write_dot(std::ostream &os, const LabelGraph &graph,
               const Vocabulary &vocab);

// Text dump: one line `id symbol [start] [final]` per node, then one line
// `src dst` per arc.
void write_text(std::ostream &os, const LabelGraph &graph,
                const Vocabulary &vocab);
LabelGraph read_text(std::istream &is, const Vocabulary &vocab);

}  // namespace gtc

#endif  // GTC_LABEL_GRAPH_H_
