// gtc/metrics.h

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

#ifndef GTC_METRICS_H_
#define GTC_METRICS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtc/label_graph.h"
#include "gtc/lexicon.h"

namespace gtc {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  std::size_t distance() const { return substitutions + insertions + deletions; }
  EditCounts &operator+=(const EditCounts &o) {
    substitutions += o.substitutions;
    insertions += o.insertions;
    deletions += o.deletions;
    return *this;
  }
  bool operator==(const EditCounts &) const = default;
};

// Unit-cost Levenshtein. Insertions are extra hypothesis symbols,
// deletions are missing reference symbols. Backtrace ties prefer
// substitution, then deletion, then insertion.
EditCounts edit_distance(const Sequence &ref, const Sequence &hyp);

struct ErrorRate {
  EditCounts counts;
  std::size_t ref_len = 0;
  double percent = 0.0;
};

// Corpus-pooled: 100 * sum(distance) / sum(len(ref)). Throws EmptyReference
// when there are no reference symbols at all.
ErrorRate error_rate(std::span<const std::pair<Sequence, Sequence>> pairs);
ErrorRate pooled_rate(std::span<const EditCounts> counts, std::size_t ref_len);

// Minimum edit distance between `ref` and any sequence accepted by the
// graph, by dynamic programming over (node, reference position).
EditCounts graph_edit_distance(const LabelGraph &graph, const Sequence &ref);

struct Transcript {
  std::vector<std::string> words;
  Sequence ref;
};

// Reads `word word ...<TAB>ref phonemes` lines; blank and '#' lines are
// skipped. Reference phonemes missing from `vocab` get fresh ids past the
// end of the vocabulary, so they can never match. Throws ParseError.
std::vector<Transcript> parse_transcripts(std::istream &is, const Vocabulary &vocab);
void write_transcripts(std::ostream &os, std::span<const Transcript> transcripts,
                       const Vocabulary &vocab);

// Oracle label error rate: per utterance, the best of the top-n variant
// combinations; pooled over the corpus. With n = 1 this is the plain LER
// of the first variants. Throws UnknownWord listing every missing word.
ErrorRate oracle_ler(const Lexicon &lexicon, std::span<const Transcript> transcripts,
                     NBest n, std::size_t jobs = 1);

// `n=<k> ler=<x.x>% S=<s> I=<i> D=<d> ref_len=<m>`
std::string format_report(NBest n, const ErrorRate &rate);

}  // namespace gtc

#endif  // GTC_METRICS_H_
