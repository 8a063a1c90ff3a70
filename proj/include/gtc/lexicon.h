// gtc/lexicon.h

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

#ifndef GTC_LEXICON_H_
#define GTC_LEXICON_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtc/graph_builder.h"
#include "gtc/vocabulary.h"

namespace gtc {

// How many ranked variants to keep per word: a positive count or "all".
class NBest {
 public:
  explicit NBest(std::size_t n);
  static NBest all() { return NBest(); }
  // Accepts "all" or a positive integer; throws std::invalid_argument.
  static NBest parse(std::string_view text);

  bool is_all() const { return all_; }
  std::size_t take(std::size_t available) const {
    return all_ ? available : std::min(available, n_);
  }
  std::string to_string() const;

  bool operator==(const NBest &) const = default;

 private:
  NBest() : all_(true) {}
  std::size_t n_ = 0;
  bool all_ = false;
};

struct LexiconVariant {
  Pronunciation pronunciation;
  std::optional<double> score;  // ranking metadata only
  bool operator==(const LexiconVariant &) const = default;
};

/*
  Pronunciation dictionary. Each word maps to its variants in rank order:
  descending score when the word's lines carry scores, file order
  otherwise. Duplicate variants are dropped, keeping the first.

  File format, one variant per line, UTF-8, LF or CRLF:

    word<TAB>[score<TAB>]phoneme phoneme ...

  Blank lines and lines starting with '#' are ignored. A word must use
  scores on all of its lines or on none. The blank "ε" is never a phoneme.
*/
class Lexicon {
 public:
  using Entries = std::map<std::string, std::vector<LexiconVariant>>;

  Lexicon(Vocabulary vocab, Entries entries);

  const Vocabulary &vocabulary() const { return vocab_; }
  const Entries &entries() const { return entries_; }
  bool contains(const std::string &word) const { return entries_.count(word) > 0; }
  // Throws UnknownWord.
  const std::vector<LexiconVariant> &variants(const std::string &word) const;

  bool operator==(const Lexicon &) const = default;

 private:
  Vocabulary vocab_;
  Entries entries_;
};

// Infers the vocabulary from the phonemes in first-seen order.
Lexicon parse_lexicon(std::istream &is);
// Uses a fixed vocabulary; phonemes outside it are parse errors.
Lexicon parse_lexicon(std::istream &is, const Vocabulary &vocab);

// Writes words in sorted order, variants in rank order.
void write_lexicon(std::ostream &os, const Lexicon &lexicon);

std::vector<Pronunciation> n_best(const Lexicon &lexicon, const std::string &word,
                                  NBest n);

// Throws UnknownWord naming every missing word.
std::vector<WordAlternatives> select_alternatives(const Lexicon &lexicon,
                                                  const std::vector<std::string> &words,
                                                  NBest n);

LabelGraph words_to_graph(const Lexicon &lexicon, const std::vector<std::string> &words,
                          NBest n);

// Splits on runs of spaces and tabs.
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace gtc

#endif  // GTC_LEXICON_H_
