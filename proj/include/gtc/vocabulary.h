// gtc/vocabulary.h

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

#ifndef GTC_VOCABULARY_H_
#define GTC_VOCABULARY_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gtc/common.h"

namespace gtc {

// Phoneme symbol table. Index 0 is the blank "ε"; all other entries are
// unique, non-empty phoneme strings. Immutable after construction.
class Vocabulary {
 public:
  // Builds a vocabulary from phonemes only; the blank is prepended.
  // Throws std::invalid_argument on duplicates, empty strings, the blank
  // name, or fewer than one phoneme.
  static Vocabulary from_phonemes(const std::vector<std::string> &phonemes);

  // Builds a vocabulary from a full symbol list whose first entry must be
  // the blank.
  static Vocabulary from_symbols(const std::vector<std::string> &symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string &symbol(Symbol id) const { return symbols_.at(id); }
  const std::vector<std::string> &symbols() const { return symbols_; }

  std::optional<Symbol> find(std::string_view symbol) const;

  // Space-separated rendering of a sequence; blanks print as "ε".
  std::string to_string(const Sequence &seq) const;

  bool operator==(const Vocabulary &other) const {
    return symbols_ == other.symbols_;
  }

 private:
  explicit Vocabulary(std::vector<std::string> symbols);

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Symbol> index_;
};

}  // namespace gtc

#endif  // GTC_VOCABULARY_H_
