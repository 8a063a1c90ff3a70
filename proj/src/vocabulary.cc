// gtc/vocabulary.cc

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

#include "gtc/vocabulary.h"

#include <stdexcept>

namespace gtc {

Vocabulary::Vocabulary(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2)
    throw std::invalid_argument("vocabulary needs the blank and at least one phoneme");
  if (symbols_[0] != kBlankName)
    throw std::invalid_argument("vocabulary index 0 must be the blank");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto &s = symbols_[i];
    if (s.empty()) throw std::invalid_argument("empty phoneme symbol");
    if (i > 0 && s == kBlankName)
      throw std::invalid_argument("blank symbol used as a phoneme");
    if (!index_.emplace(s, static_cast<Symbol>(i)).second)
      throw std::invalid_argument("duplicate phoneme symbol '" + s + "'");
  }
}

Vocabulary Vocabulary::from_phonemes(const std::vector<std::string> &phonemes) {
  std::vector<std::string> symbols;
  symbols.reserve(phonemes.size() + 1);
  symbols.emplace_back(kBlankName);
  symbols.insert(symbols.end(), phonemes.begin(), phonemes.end());
  return Vocabulary(std::move(symbols));
}

Vocabulary Vocabulary::from_symbols(const std::vector<std::string> &symbols) {
  return Vocabulary(symbols);
}

std::optional<Symbol> Vocabulary::find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::to_string(const Sequence &seq) const {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) out += ' ';
    out += symbol(seq[i]);
  }
  return out;
}

}  // namespace gtc
