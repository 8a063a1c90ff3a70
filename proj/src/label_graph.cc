// gtc/label_graph.cc

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

#include "gtc/label_graph.h"

#include <algorithm>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

namespace gtc {

NodeId LabelGraph::add_node(Symbol symbol, bool start, bool final) {
  if (symbol < 0) throw InvalidGraph("negative node symbol");
  symbols_.push_back(symbol);
  start_.push_back(start);
  final_.push_back(final);
  out_.emplace_back();
  return static_cast<NodeId>(symbols_.size() - 1);
}

void LabelGraph::add_arc(NodeId src, NodeId dst) {
  const auto n = static_cast<NodeId>(num_nodes());
  if (src < 0 || src >= n || dst < 0 || dst >= n)
    throw InvalidGraph("arc endpoint out of range");
  if (src == dst) throw InvalidGraph("explicit self-loops are not allowed");
  auto &out = out_[src];
  if (std::find(out.begin(), out.end(), dst) != out.end()) return;
  out.push_back(dst);
  arcs_.push_back({src, dst});
}

std::vector<NodeId> LabelGraph::starts() const {
  std::vector<NodeId> r;
  for (std::size_t n = 0; n < num_nodes(); ++n)
    if (start_[n]) r.push_back(static_cast<NodeId>(n));
  return r;
}

std::vector<NodeId> LabelGraph::finals() const {
  std::vector<NodeId> r;
  for (std::size_t n = 0; n < num_nodes(); ++n)
    if (final_[n]) r.push_back(static_cast<NodeId>(n));
  return r;
}

bool LabelGraph::operator==(const LabelGraph &other) const {
  return symbols_ == other.symbols_ && start_ == other.start_ &&
         final_ == other.final_ && arcs_ == other.arcs_;
}

std::vector<NodeId> topo_order(std::size_t num_nodes,
                               std::span<const GraphArc> arcs) {
  std::vector<std::size_t> in_degree(num_nodes, 0);
  std::vector<std::vector<NodeId>> out(num_nodes);
  for (const auto &a : arcs) {
    out[a.src].push_back(a.dst);
    ++in_degree[a.dst];
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (std::size_t n = 0; n < num_nodes; ++n)
    if (in_degree[n] == 0) ready.push(static_cast<NodeId>(n));

  std::vector<NodeId> order;
  order.reserve(num_nodes);
  while (!ready.empty()) {
    NodeId n = ready.top();
    ready.pop();
    order.push_back(n);
    for (NodeId m : out[n])
      if (--in_degree[m] == 0) ready.push(m);
  }
  if (order.size() != num_nodes) throw CycleDetected("explicit arcs contain a cycle");
  return order;
}

std::vector<NodeId> topo_order(const LabelGraph &graph) {
  return topo_order(graph.num_nodes(), graph.arcs());
}

namespace {

// Forward and backward reachability marks.
std::vector<bool> reachable(const LabelGraph &graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack = graph.starts();
  for (NodeId s : stack) seen[s] = true;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : graph.successors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

std::vector<bool> coreachable(const LabelGraph &graph) {
  const std::size_t n = graph.num_nodes();
  std::vector<std::vector<NodeId>> in(n);
  for (const auto &a : graph.arcs()) in[a.dst].push_back(a.src);
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack = graph.finals();
  for (NodeId f : stack) seen[f] = true;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : in[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

LabelGraph trim(const LabelGraph &graph) {
  const auto fwd = reachable(graph);
  const auto bwd = coreachable(graph);
  const std::size_t n = graph.num_nodes();

  std::vector<NodeId> old_to_kept(n, -1);
  std::vector<NodeId> kept;
  for (std::size_t u = 0; u < n; ++u) {
    if (fwd[u] && bwd[u]) {
      old_to_kept[u] = static_cast<NodeId>(kept.size());
      kept.push_back(static_cast<NodeId>(u));
    }
  }
  if (kept.empty()) throw EmptyGraph("no node is both reachable and co-reachable");

  std::vector<GraphArc> kept_arcs;
  for (const auto &a : graph.arcs())
    if (old_to_kept[a.src] >= 0 && old_to_kept[a.dst] >= 0)
      kept_arcs.push_back({old_to_kept[a.src], old_to_kept[a.dst]});

  const auto order = topo_order(kept.size(), kept_arcs);
  std::vector<NodeId> new_id(kept.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    new_id[order[i]] = static_cast<NodeId>(i);

  LabelGraph out;
  for (NodeId k : order) {
    NodeId u = kept[k];
    out.add_node(graph.symbol(u), graph.is_start(u), graph.is_final(u));
  }
  std::sort(kept_arcs.begin(), kept_arcs.end(),
            [&](const GraphArc &a, const GraphArc &b) {
              return std::pair(new_id[a.src], new_id[a.dst]) <
                     std::pair(new_id[b.src], new_id[b.dst]);
            });
  for (const auto &a : kept_arcs) out.add_arc(new_id[a.src], new_id[a.dst]);
  return out;
}

LabelGraph determinize(const LabelGraph &graph) {
  for (const auto &a : graph.arcs()) {
    if (graph.symbol(a.src) == graph.symbol(a.dst))
      throw InvalidGraph("determinize: arc joins two nodes with the same symbol");
  }

  // Each state is a sorted set of input nodes sharing one symbol.
  using NodeSet = std::vector<NodeId>;
  std::map<NodeSet, NodeId> ids;
  std::vector<NodeSet> states;
  LabelGraph out;

  auto intern = [&](NodeSet set) -> NodeId {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    bool final = false;
    for (NodeId n : set) final = final || graph.is_final(n);
    NodeId id = out.add_node(graph.symbol(set.front()), false, final);
    ids.emplace(set, id);
    states.push_back(std::move(set));
    return id;
  };

  std::map<Symbol, NodeSet> by_symbol;
  for (NodeId s : graph.starts()) by_symbol[graph.symbol(s)].push_back(s);
  for (auto &[sym, set] : by_symbol) out.set_start(intern(set));

  for (std::size_t i = 0; i < states.size(); ++i) {
    std::map<Symbol, NodeSet> next;
    for (NodeId u : states[i])
      for (NodeId v : graph.successors(u)) next[graph.symbol(v)].push_back(v);
    for (auto &[sym, set] : next) {
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      NodeId dst = intern(std::move(set));
      out.add_arc(static_cast<NodeId>(i), dst);
    }
  }
  return trim(out);
}

void validate(const LabelGraph &graph, std::size_t vocab_size) {
  if (graph.empty()) throw InvalidGraph("graph has no nodes");
  if (graph.starts().empty()) throw InvalidGraph("graph has no start node");
  if (graph.finals().empty()) throw InvalidGraph("graph has no final node");
  try {
    topo_order(graph);
  } catch (const CycleDetected &) {
    throw InvalidGraph("explicit arcs contain a cycle");
  }
  for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
    if (vocab_size > 0 && static_cast<std::size_t>(graph.symbol(n)) >= vocab_size)
      throw InvalidGraph("node " + std::to_string(n) + " symbol out of vocabulary range");
  }
  for (const auto &a : graph.arcs()) {
    Symbol s = graph.symbol(a.src);
    if (s != kBlank && s == graph.symbol(a.dst))
      throw InvalidGraph("arc " + std::to_string(a.src) + "->" +
                         std::to_string(a.dst) +
                         " joins two nodes with the same phoneme");
  }
  const auto fwd = reachable(graph);
  const auto bwd = coreachable(graph);
  for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
    if (!fwd[n] || !bwd[n])
      throw InvalidGraph("node " + std::to_string(n) + " is not on a start-final path");
  }
}

std::size_t min_alignment_length(const LabelGraph &graph) {
  constexpr auto kUnreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(graph.num_nodes(), kUnreached);
  for (NodeId s : graph.starts()) dist[s] = 1;
  std::size_t best = kUnreached;
  for (NodeId u : topo_order(graph)) {
    if (dist[u] == kUnreached) continue;
    if (graph.is_final(u)) best = std::min(best, dist[u]);
    for (NodeId v : graph.successors(u)) dist[v] = std::min(dist[v], dist[u] + 1);
  }
  return best;
}

namespace {

std::string dot_escape(const std::string &s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r;
}

}  // namespace

void write_dot(std::ostream &os, const LabelGraph &graph,
               const Vocabulary &vocab) {
  os << "digraph LabelGraph {\n  rankdir=LR;\n";
  for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
    const auto id = static_cast<NodeId>(n);
    os << "  " << n << " [label=\"" << dot_escape(vocab.symbol(graph.symbol(id)))
       << "\"";
    if (graph.is_start(id)) os << ", peripheries=2";
    if (graph.is_final(id)) os << ", style=bold";
    os << "];\n";
  }
  for (const auto &a : graph.arcs()) os << "  " << a.src << " -> " << a.dst << ";\n";
  os << "}\n";
}

void write_text(std::ostream &os, const LabelGraph &graph,
                const Vocabulary &vocab) {
  for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
    const auto id = static_cast<NodeId>(n);
    os << n << ' ' << vocab.symbol(graph.symbol(id));
    if (graph.is_start(id)) os << " start";
    if (graph.is_final(id)) os << " final";
    os << '\n';
  }
  for (const auto &a : graph.arcs()) os << a.src << ' ' << a.dst << '\n';
}

LabelGraph read_text(std::istream &is, const Vocabulary &vocab) {
  LabelGraph graph;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    long first = 0;
    try {
      std::size_t used = 0;
      first = std::stol(tok[0], &used);
      if (used != tok[0].size()) throw std::invalid_argument("");
    } catch (const std::exception &) {
      throw ParseError(line_no, "expected a node id");
    }
    // A line whose first field is the next unused id declares a node;
    // anything else is an arc between existing nodes.
    if (first == static_cast<long>(graph.num_nodes())) {
      if (tok.size() < 2) throw ParseError(line_no, "node line needs a symbol");
      auto sym = vocab.find(tok[1]);
      if (!sym) throw ParseError(line_no, "unknown symbol '" + tok[1] + "'");
      bool start = false, final = false;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        if (tok[i] == "start") start = true;
        else if (tok[i] == "final") final = true;
        else throw ParseError(line_no, "unexpected node flag '" + tok[i] + "'");
      }
      graph.add_node(*sym, start, final);
    } else {
      if (tok.size() != 2) throw ParseError(line_no, "arc line needs `src dst`");
      try {
        graph.add_arc(static_cast<NodeId>(first),
                      static_cast<NodeId>(std::stol(tok[1])));
      } catch (const std::exception &e) {
        throw ParseError(line_no, std::string("bad arc: ") + e.what());
      }
    }
  }
  return graph;
}

}  // namespace gtc
