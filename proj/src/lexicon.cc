// gtc/lexicon.cc

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

#include "gtc/lexicon.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace gtc {

NBest::NBest(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("n-best count must be positive");
}

NBest NBest::parse(std::string_view text) {
  if (text == "all") return all();
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || n == 0)
    throw std::invalid_argument("expected a positive count or 'all', got '" +
                                std::string(text) + "'");
  return NBest(n);
}

std::string NBest::to_string() const { return all_ ? "all" : std::to_string(n_); }

Lexicon::Lexicon(Vocabulary vocab, Entries entries)
    : vocab_(std::move(vocab)), entries_(std::move(entries)) {}

const std::vector<LexiconVariant> &Lexicon::variants(const std::string &word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) throw UnknownWord({word});
  return it->second;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool is_blank_line(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

struct RawVariant {
  std::vector<std::string> phonemes;
  std::optional<double> score;
};

struct RawEntry {
  std::vector<RawVariant> variants;
  std::size_t first_line = 0;
};

Lexicon parse_impl(std::istream &is, const Vocabulary *fixed) {
  std::map<std::string, RawEntry> raw;
  std::vector<std::string> phoneme_order;
  std::set<std::string> seen_phoneme;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank_line(line) || line.front() == '#') continue;

    auto fields = split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(line_no, "expected word<TAB>[score<TAB>]phonemes");
    const std::string word(fields[0]);
    if (split_whitespace(word).size() != 1 || word.find(' ') != std::string::npos)
      throw ParseError(line_no, "empty or malformed word");

    RawVariant variant;
    if (fields.size() == 3) {
      std::string text(fields[1]);
      char *end = nullptr;
      double score = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(score))
        throw ParseError(line_no, "malformed score '" + text + "'");
      variant.score = score;
    }
    variant.phonemes = split_whitespace(fields.back());
    if (variant.phonemes.empty()) throw ParseError(line_no, "missing phonemes");
    for (const auto &p : variant.phonemes) {
      if (p == kBlankName) throw ParseError(line_no, "blank symbol used as a phoneme");
      if (fixed) {
        if (!fixed->find(p)) throw ParseError(line_no, "phoneme '" + p + "' not in vocabulary");
      } else if (!seen_phoneme.count(p)) {
        seen_phoneme.insert(p);
        phoneme_order.push_back(p);
      }
    }

    auto &entry = raw[word];
    if (entry.variants.empty()) {
      entry.first_line = line_no;
    } else if (entry.variants.front().score.has_value() != variant.score.has_value()) {
      throw ParseError(line_no, "word '" + word + "' mixes scored and unscored lines");
    }
    entry.variants.push_back(std::move(variant));
  }

  Vocabulary vocab = fixed ? *fixed : [&] {
    if (phoneme_order.empty()) throw ParseError(line_no, "lexicon has no entries");
    return Vocabulary::from_phonemes(phoneme_order);
  }();

  Lexicon::Entries entries;
  for (auto &[word, entry] : raw) {
    std::vector<LexiconVariant> variants;
    for (auto &rv : entry.variants) {
      Sequence ids;
      for (const auto &p : rv.phonemes) ids.push_back(*vocab.find(p));
      LexiconVariant v{Pronunciation(std::move(ids)), rv.score};
      auto same = [&](const LexiconVariant &o) { return o.pronunciation == v.pronunciation; };
      if (std::none_of(variants.begin(), variants.end(), same)) variants.push_back(std::move(v));
    }
    if (variants.front().score) {
      std::stable_sort(variants.begin(), variants.end(),
                       [](const LexiconVariant &a, const LexiconVariant &b) {
                         return *a.score > *b.score;
                       });
    }
    entries.emplace(word, std::move(variants));
  }
  return Lexicon(std::move(vocab), std::move(entries));
}

}  // namespace

Lexicon parse_lexicon(std::istream &is) { return parse_impl(is, nullptr); }

Lexicon parse_lexicon(std::istream &is, const Vocabulary &vocab) {
  return parse_impl(is, &vocab);
}

void write_lexicon(std::ostream &os, const Lexicon &lexicon) {
  const auto &vocab = lexicon.vocabulary();
  for (const auto &[word, variants] : lexicon.entries()) {
    for (const auto &v : variants) {
      os << word << '\t';
      if (v.score) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", *v.score);
        os << buf << '\t';
      }
      os << vocab.to_string(v.pronunciation.phonemes()) << '\n';
    }
  }
}

std::vector<Pronunciation> n_best(const Lexicon &lexicon, const std::string &word, NBest n) {
  const auto &variants = lexicon.variants(word);
  std::vector<Pronunciation> out;
  const std::size_t k = n.take(variants.size());
  for (std::size_t i = 0; i < k; ++i) out.push_back(variants[i].pronunciation);
  return out;
}

std::vector<WordAlternatives> select_alternatives(const Lexicon &lexicon,
                                                  const std::vector<std::string> &words,
                                                  NBest n) {
  std::vector<std::string> missing;
  for (const auto &w : words)
    if (!lexicon.contains(w) && std::find(missing.begin(), missing.end(), w) == missing.end())
      missing.push_back(w);
  if (!missing.empty()) throw UnknownWord(std::move(missing));

  std::vector<WordAlternatives> out;
  out.reserve(words.size());
  for (const auto &w : words) out.emplace_back(w, n_best(lexicon, w, n));
  return out;
}

LabelGraph words_to_graph(const Lexicon &lexicon, const std::vector<std::string> &words,
                          NBest n) {
  return build_gtc_graph(select_alternatives(lexicon, words, n));
}

}  // namespace gtc
