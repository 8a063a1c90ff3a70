// gtc/graph_builder.h

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

#ifndef GTC_GRAPH_BUILDER_H_
#define GTC_GRAPH_BUILDER_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gtc/label_graph.h"

namespace gtc {

// Non-empty phoneme sequence without blanks.
class Pronunciation {
 public:
  // Throws EmptyPronunciation if empty, InvalidTarget if it has a blank.
  explicit Pronunciation(Sequence phonemes);

  const Sequence &phonemes() const { return phonemes_; }
  std::size_t size() const { return phonemes_.size(); }

  auto operator<=>(const Pronunciation &) const = default;

 private:
  Sequence phonemes_;
};

// All pronunciations allowed for one word, duplicates removed (first
// occurrence wins).
class WordAlternatives {
 public:
  // Throws EmptyPronunciation if `variants` is empty.
  WordAlternatives(std::string word, std::vector<Pronunciation> variants);

  const std::string &word() const { return word_; }
  const std::vector<Pronunciation> &variants() const { return variants_; }

 private:
  std::string word_;
  std::vector<Pronunciation> variants_;
};

// Blank-interleaved CTC topology: b0 n1 b1 ... nL bL, with a skip arc
// n_k -> n_{k+1} when the two labels differ. Starts {b0, n1}, finals
// {nL, bL}.
LabelGraph build_ctc_graph(const Pronunciation &p);

// Disjoint union. An empty graph is the identity.
LabelGraph parallel(const LabelGraph &a, const LabelGraph &b);

// Concatenation. A's blank finals and b's blank starts merge into one
// boundary blank; a's final labels reach b's start labels through the
// boundary blank, or directly when the symbols differ. An empty graph is
// the identity. Throws InvalidGraph if a blank final of `a` has outgoing
// arcs or a blank start of `b` has incoming arcs.
LabelGraph serial(const LabelGraph &a, const LabelGraph &b);

// Per word, the parallel union of its variants' CTC graphs; words are then
// joined left to right with serial(). The result is trimmed and
// determinized so that every accepted alignment has exactly one path, even
// when two variant combinations spell the same phoneme sequence.
LabelGraph build_gtc_graph(const std::vector<WordAlternatives> &words);

// Distinct phoneme sequences spelled by start-to-final paths (blanks
// dropped), up to `max_length` long. Throws LimitExceeded when more than
// `limit` exist.
std::set<Sequence> enumerate_collapsed(const LabelGraph &graph, std::size_t limit,
                                       std::size_t max_length = SIZE_MAX);

}  // namespace gtc

#endif  // GTC_GRAPH_BUILDER_H_
