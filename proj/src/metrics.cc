// gtc/metrics.cc

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

#include "gtc/metrics.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "gtc/parallel.h"

namespace gtc {

EditCounts edit_distance(const Sequence &ref, const Sequence &hyp) {
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::vector<std::size_t>> d(m + 1, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }

  EditCounts c;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        d[i][j] == d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] != hyp[j - 1]) ++c.substitutions;
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

ErrorRate pooled_rate(std::span<const EditCounts> counts, std::size_t ref_len) {
  if (ref_len == 0) throw EmptyReference("no reference phonemes to score against");
  ErrorRate r;
  for (const auto &c : counts) r.counts += c;
  r.ref_len = ref_len;
  r.percent = 100.0 * static_cast<double>(r.counts.distance()) / static_cast<double>(ref_len);
  return r;
}

ErrorRate error_rate(std::span<const std::pair<Sequence, Sequence>> pairs) {
  std::vector<EditCounts> counts;
  std::size_t ref_len = 0;
  for (const auto &[ref, hyp] : pairs) {
    counts.push_back(edit_distance(ref, hyp));
    ref_len += ref.size();
  }
  return pooled_rate(counts, ref_len);
}

namespace {

struct Cell {
  std::size_t dist = std::numeric_limits<std::size_t>::max();
  EditCounts counts;

  bool reachable() const { return dist != std::numeric_limits<std::size_t>::max(); }
};

// Keeps the first candidate on ties, so callers offer candidates in
// preference order.
void offer(Cell &best, const Cell &from, std::size_t cost, std::size_t EditCounts::*op) {
  if (!from.reachable()) return;
  if (from.dist + cost >= best.dist) return;
  best.dist = from.dist + cost;
  best.counts = from.counts;
  if (op) ++(best.counts.*op);
}

}  // namespace

EditCounts graph_edit_distance(const LabelGraph &graph, const Sequence &ref) {
  const std::size_t len = ref.size();
  const std::size_t num_nodes = graph.num_nodes();
  // into[n][j]: best cost of a path strictly before n having consumed j
  // reference symbols. here[n][j]: same, including n.
  std::vector<std::vector<Cell>> into(num_nodes, std::vector<Cell>(len + 1));
  std::vector<std::vector<Cell>> here(num_nodes, std::vector<Cell>(len + 1));

  std::vector<Cell> entry(len + 1);
  for (std::size_t j = 0; j <= len; ++j) {
    entry[j].dist = j;
    entry[j].counts.deletions = j;
  }
  for (NodeId s : graph.starts())
    for (std::size_t j = 0; j <= len; ++j) offer(into[s][j], entry[j], 0, nullptr);

  Cell best;
  for (NodeId n : topo_order(graph)) {
    const Symbol sym = graph.symbol(n);
    auto &cur = here[n];
    for (std::size_t j = 0; j <= len; ++j) {
      Cell &c = cur[j];
      if (sym == kBlank) {
        offer(c, into[n][j], 0, nullptr);
        if (j > 0) offer(c, cur[j - 1], 1, &EditCounts::deletions);
      } else {
        if (j > 0) {
          const bool match = ref[j - 1] == sym;
          offer(c, into[n][j - 1], match ? 0 : 1,
                match ? nullptr : &EditCounts::substitutions);
          offer(c, cur[j - 1], 1, &EditCounts::deletions);
        }
        offer(c, into[n][j], 1, &EditCounts::insertions);
      }
    }
    for (NodeId m : graph.successors(n))
      for (std::size_t j = 0; j <= len; ++j) offer(into[m][j], cur[j], 0, nullptr);
    if (graph.is_final(n)) offer(best, cur[len], 0, nullptr);
  }
  if (!best.reachable()) throw InvalidGraph("graph has no start-to-final path");
  return best.counts;
}

ErrorRate oracle_ler(const Lexicon &lexicon, std::span<const Transcript> transcripts,
                     NBest n, std::size_t jobs) {
  std::vector<std::string> missing;
  for (const auto &tr : transcripts)
    for (const auto &w : tr.words)
      if (!lexicon.contains(w) && std::find(missing.begin(), missing.end(), w) == missing.end())
        missing.push_back(w);
  if (!missing.empty()) throw UnknownWord(std::move(missing));

  std::size_t ref_len = 0;
  for (const auto &tr : transcripts) ref_len += tr.ref.size();
  if (ref_len == 0) throw EmptyReference("no reference phonemes to score against");

  std::vector<EditCounts> counts(transcripts.size());
  parallel_for(transcripts.size(), jobs, [&](std::size_t i) {
    const auto &tr = transcripts[i];
    if (tr.words.empty()) {
      counts[i].deletions = tr.ref.size();
      return;
    }
    counts[i] = graph_edit_distance(words_to_graph(lexicon, tr.words, n), tr.ref);
  });
  return pooled_rate(counts, ref_len);
}

std::vector<Transcript> parse_transcripts(std::istream &is, const Vocabulary &vocab) {
  std::vector<Transcript> out;
  std::map<std::string, Symbol> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(line_no, "expected words<TAB>ref phonemes");
    Transcript tr;
    tr.words = split_whitespace(std::string_view(line).substr(0, tab));
    if (tr.words.empty()) throw ParseError(line_no, "transcript has no words");
    for (const auto &p : split_whitespace(std::string_view(line).substr(tab + 1))) {
      if (p == kBlankName) throw ParseError(line_no, "blank symbol in reference");
      if (auto id = vocab.find(p)) {
        tr.ref.push_back(*id);
      } else {
        auto [it, inserted] =
            extra.emplace(p, static_cast<Symbol>(vocab.size() + extra.size()));
        tr.ref.push_back(it->second);
      }
    }
    out.push_back(std::move(tr));
  }
  return out;
}

void write_transcripts(std::ostream &os, std::span<const Transcript> transcripts,
                       const Vocabulary &vocab) {
  for (const auto &tr : transcripts) {
    for (std::size_t i = 0; i < tr.words.size(); ++i) os << (i ? " " : "") << tr.words[i];
    os << '\t' << vocab.to_string(tr.ref) << '\n';
  }
}

std::string format_report(NBest n, const ErrorRate &rate) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "n=%s ler=%.1f%% S=%zu I=%zu D=%zu ref_len=%zu",
                n.to_string().c_str(), rate.percent, rate.counts.substitutions,
                rate.counts.insertions, rate.counts.deletions, rate.ref_len);
  return buf;
}

}  // namespace gtc
