// gtc/graph_builder.cc

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

#include "gtc/graph_builder.h"

#include <algorithm>

namespace gtc {

Pronunciation::Pronunciation(Sequence phonemes) : phonemes_(std::move(phonemes)) {
  if (phonemes_.empty()) throw EmptyPronunciation("pronunciation has no phonemes");
  for (Symbol s : phonemes_)
    if (s <= kBlank) throw InvalidTarget("pronunciation contains a blank or negative symbol");
}

WordAlternatives::WordAlternatives(std::string word, std::vector<Pronunciation> variants)
    : word_(std::move(word)) {
  for (auto &v : variants) {
    if (std::find(variants_.begin(), variants_.end(), v) == variants_.end())
      variants_.push_back(std::move(v));
  }
  if (variants_.empty())
    throw EmptyPronunciation("word '" + word_ + "' has no pronunciations");
}

LabelGraph build_ctc_graph(const Pronunciation &p) {
  const auto &labels = p.phonemes();
  const std::size_t num_labels = labels.size();
  LabelGraph g;
  // Node 2k is blank b_k, node 2k+1 is the label n_{k+1}.
  for (std::size_t k = 0; k <= num_labels; ++k) {
    g.add_node(kBlank, k == 0, k == num_labels);
    if (k < num_labels) g.add_node(labels[k], k == 0, k + 1 == num_labels);
  }
  for (std::size_t k = 0; k < num_labels; ++k) {
    const auto label = static_cast<NodeId>(2 * k + 1);
    g.add_arc(label - 1, label);
    g.add_arc(label, label + 1);
    if (k + 1 < num_labels && labels[k] != labels[k + 1]) g.add_arc(label, label + 2);
  }
  return g;
}

LabelGraph parallel(const LabelGraph &a, const LabelGraph &b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  LabelGraph out = a;
  const auto offset = static_cast<NodeId>(a.num_nodes());
  for (std::size_t n = 0; n < b.num_nodes(); ++n) {
    const auto id = static_cast<NodeId>(n);
    out.add_node(b.symbol(id), b.is_start(id), b.is_final(id));
  }
  for (const auto &arc : b.arcs()) out.add_arc(arc.src + offset, arc.dst + offset);
  return out;
}

LabelGraph serial(const LabelGraph &a, const LabelGraph &b) {
  if (a.empty()) return b;
  if (b.empty()) return a;

  std::vector<std::size_t> a_in(a.num_nodes(), 0), b_in(b.num_nodes(), 0);
  for (const auto &arc : a.arcs()) ++a_in[arc.dst];
  for (const auto &arc : b.arcs()) ++b_in[arc.dst];

  auto merged_a = [&](NodeId n) { return a.is_final(n) && a.symbol(n) == kBlank; };
  auto merged_b = [&](NodeId n) { return b.is_start(n) && b.symbol(n) == kBlank; };

  bool a_accepts_empty = false, b_accepts_empty = false;
  bool boundary_start = false, boundary_final = false;
  for (std::size_t n = 0; n < a.num_nodes(); ++n) {
    const auto id = static_cast<NodeId>(n);
    if (!merged_a(id)) continue;
    if (!a.successors(id).empty())
      throw InvalidGraph("serial: blank final node has outgoing arcs");
    boundary_start = boundary_start || a.is_start(id);
    a_accepts_empty = a_accepts_empty || a.is_start(id);
  }
  for (std::size_t n = 0; n < b.num_nodes(); ++n) {
    const auto id = static_cast<NodeId>(n);
    if (!merged_b(id)) continue;
    if (b_in[n] != 0) throw InvalidGraph("serial: blank start node has incoming arcs");
    boundary_final = boundary_final || b.is_final(id);
    b_accepts_empty = b_accepts_empty || b.is_final(id);
  }

  LabelGraph out;
  std::vector<NodeId> a_map(a.num_nodes()), b_map(b.num_nodes());
  std::vector<NodeId> a_label_finals, b_label_starts;
  for (std::size_t n = 0; n < a.num_nodes(); ++n) {
    const auto id = static_cast<NodeId>(n);
    if (merged_a(id)) continue;
    const bool label_final = a.is_final(id);
    a_map[n] = out.add_node(a.symbol(id), a.is_start(id), label_final && b_accepts_empty);
    if (label_final) a_label_finals.push_back(a_map[n]);
  }
  const NodeId boundary = out.add_node(kBlank, boundary_start, boundary_final);
  for (std::size_t n = 0; n < a.num_nodes(); ++n)
    if (merged_a(static_cast<NodeId>(n))) a_map[n] = boundary;
  for (std::size_t n = 0; n < b.num_nodes(); ++n) {
    const auto id = static_cast<NodeId>(n);
    if (merged_b(id)) {
      b_map[n] = boundary;
      continue;
    }
    const bool label_start = b.is_start(id);
    b_map[n] = out.add_node(b.symbol(id), label_start && a_accepts_empty, b.is_final(id));
    if (label_start) b_label_starts.push_back(b_map[n]);
  }

  for (const auto &arc : a.arcs()) out.add_arc(a_map[arc.src], a_map[arc.dst]);
  for (const auto &arc : b.arcs()) out.add_arc(b_map[arc.src], b_map[arc.dst]);
  for (NodeId f : a_label_finals) out.add_arc(f, boundary);
  for (NodeId s : b_label_starts) out.add_arc(boundary, s);
  for (NodeId f : a_label_finals)
    for (NodeId s : b_label_starts)
      if (out.symbol(f) != out.symbol(s)) out.add_arc(f, s);
  return out;
}

LabelGraph build_gtc_graph(const std::vector<WordAlternatives> &words) {
  if (words.empty()) throw EmptyPronunciation("no words to build a graph from");
  LabelGraph label_graph;
  for (const auto &word : words) {
    LabelGraph word_graph;
    for (const auto &p : word.variants())
      word_graph = parallel(word_graph, build_ctc_graph(p));
    label_graph = serial(label_graph, word_graph);
  }
  return determinize(trim(label_graph));
}

std::set<Sequence> enumerate_collapsed(const LabelGraph &graph, std::size_t limit,
                                       std::size_t max_length) {
  const LabelGraph g = trim(graph);
  // prefixes[n]: distinct label sequences of paths from a start up to and
  // including n. Every node reaches a final, so an oversized prefix set
  // already implies an oversized result.
  std::vector<std::set<Sequence>> prefixes(g.num_nodes());
  std::set<Sequence> result;
  auto check = [&](const std::set<Sequence> &s) {
    if (s.size() > limit)
      throw LimitExceeded("graph accepts more than " + std::to_string(limit) + " sequences");
  };
  for (NodeId n : topo_order(g)) {
    auto &here = prefixes[n];
    if (g.is_start(n)) here.insert(Sequence{});
    if (g.symbol(n) != kBlank) {
      std::set<Sequence> extended;
      for (Sequence s : here) {
        s.push_back(g.symbol(n));
        extended.insert(std::move(s));
      }
      here = std::move(extended);
    }
    // Prefix lengths never shrink along a path, so long ones can go now.
    std::erase_if(here, [&](const Sequence &s) { return s.size() > max_length; });
    check(here);
    if (g.is_final(n)) {
      result.insert(here.begin(), here.end());
      check(result);
    }
    for (NodeId m : g.successors(n)) {
      if (g.symbol(m) == kBlank || g.symbol(m) != g.symbol(n)) {
        prefixes[m].insert(here.begin(), here.end());
      } else {
        // Entering the same symbol directly would merge under collapse.
        for (Sequence s : here) {
          s.pop_back();
          prefixes[m].insert(std::move(s));
        }
      }
    }
    std::set<Sequence>().swap(here);
  }
  return result;
}

}  // namespace gtc
