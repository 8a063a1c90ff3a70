// tests/metrics_test.cc

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

#include <random>
#include <sstream>

#include "doctest.h"
#include "gtc/lexicon.h"
#include "gtc/metrics.h"
#include "test_util.h"

using namespace gtc;
using namespace gtc::testing;

namespace {

// Plain Levenshtein distance, no backtrace.
std::size_t levenshtein(const Sequence &a, const Sequence &b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Lexicon parse(const std::string &text) {
  std::istringstream is(text);
  return parse_lexicon(is);
}

std::vector<Transcript> transcripts(const Lexicon &lex, const std::string &text) {
  std::istringstream is(text);
  return parse_transcripts(is, lex.vocabulary());
}

}  // namespace

TEST_CASE("edit distance") {
  // a=1 b=2 c=3 x=4
  CHECK(edit_distance({1, 2}, {1, 2}).distance() == 0);
  CHECK(edit_distance({1, 2, 3}, {1, 4, 3}) == EditCounts{1, 0, 0});
  CHECK(edit_distance({1, 2}, {}) == EditCounts{0, 0, 2});
  CHECK(edit_distance({}, {1}) == EditCounts{0, 1, 0});
  // ties prefer substitution
  CHECK(edit_distance({1, 2}, {2, 1}) == EditCounts{2, 0, 0});

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(0, 6), sym(1, 3);
  for (int rep = 0; rep < 500; ++rep) {
    Sequence a(len(rng)), b(len(rng));
    for (auto &x : a) x = sym(rng);
    for (auto &x : b) x = sym(rng);
    auto c = edit_distance(a, b);
    CHECK(c.distance() == levenshtein(a, b));
    CHECK(a.size() - c.deletions + c.insertions == b.size());
  }
}

TEST_CASE("error rate pools over the corpus") {
  std::vector<std::pair<Sequence, Sequence>> perfect{{{1, 2}, {1, 2}}};
  CHECK(error_rate(perfect).percent == 0.0);

  Sequence ten(10, 1), one_sub = ten;
  one_sub[3] = 2;
  std::vector<std::pair<Sequence, Sequence>> one{{ten, one_sub}};
  CHECK(error_rate(one).percent == doctest::Approx(10.0));

  std::vector<std::pair<Sequence, Sequence>> pooled{{{1, 2}, {1, 3}}, {Sequence(8, 1), Sequence(8, 1)}};
  auto r = error_rate(pooled);
  CHECK(r.percent == doctest::Approx(10.0));
  CHECK(r.ref_len == 10);

  std::vector<std::pair<Sequence, Sequence>> empty{{{}, {1}}};
  CHECK_THROWS_AS(error_rate(empty), EmptyReference);
}

TEST_CASE("graph edit distance examples") {
  // a=1 b=2 c=3 d=4 e=5 f=6
  auto both = build_gtc_graph({word({{1, 2}, {1, 3}})});
  CHECK(graph_edit_distance(both, {1, 3}).distance() == 0);
  CHECK(graph_edit_distance(build_gtc_graph({word({{1, 2}})}), {1, 2}).distance() == 0);
  CHECK(graph_edit_distance(build_gtc_graph({word({{1, 3}})}), {1, 2}).distance() == 1);
  auto two = build_gtc_graph({word({{1, 2}, {1, 3}}), word({{4, 5}, {6, 5}})});
  CHECK(graph_edit_distance(two, {1, 3, 6, 5}).distance() == 0);
  CHECK(graph_edit_distance(two, {}).deletions == 0);
  CHECK(graph_edit_distance(two, {}).insertions == 4);
}

TEST_CASE("graph edit distance matches enumeration") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> len(0, 6), sym(1, 4);
  for (int rep = 0; rep < 500; ++rep) {
    auto words = random_words(rng, 4, 3, 3, 3);
    auto g = build_gtc_graph(words);
    Sequence ref(len(rng));
    for (auto &x : ref) x = sym(rng);
    std::size_t best = SIZE_MAX;
    for (const auto &s : enumerate_collapsed(g, 100000)) best = std::min(best, levenshtein(ref, s));
    CHECK(graph_edit_distance(g, ref).distance() == best);
  }
}

TEST_CASE("oracle LER") {
  auto lex = parse("w\ta b\nw\ta c\nw\tb b\nv\td\n");
  SUBCASE("refs matching the second variant") {
    auto tr = transcripts(lex, "w v\ta c d\nw\ta c\n");
    CHECK(oracle_ler(lex, tr, NBest(1)).percent > 0.0);
    CHECK(oracle_ler(lex, tr, NBest(2)).percent == 0.0);
  }
  SUBCASE("non-increasing in n") {
    auto tr = transcripts(lex, "w v\tb b d\nw w\ta c a b\nv w\td b c\nw\tx y\n");
    double prev = 1e9;
    for (NBest n : {NBest(1), NBest(2), NBest(3), NBest::all()}) {
      const double ler = oracle_ler(lex, tr, n, 2).percent;
      CHECK(ler <= prev);
      prev = ler;
    }
  }
  SUBCASE("single variant, matching ref") {
    auto tr = transcripts(lex, "v\td\n");
    CHECK(oracle_ler(lex, tr, NBest(1)).percent == 0.0);
  }
  SUBCASE("errors") {
    auto tr = transcripts(lex, "v zz\td\n");
    CHECK_THROWS_AS(oracle_ler(lex, tr, NBest(1)), UnknownWord);
    CHECK_THROWS_AS(oracle_ler(lex, {}, NBest(1)), EmptyReference);
  }
  SUBCASE("report") {
    auto tr = transcripts(lex, "w v\ta c d\n");
    CHECK(format_report(NBest(1), oracle_ler(lex, tr, NBest(1))) ==
          "n=1 ler=33.3% S=1 I=0 D=0 ref_len=3");
  }
}

TEST_CASE("transcript parsing") {
  auto lex = parse("w\ta b\n");
  auto tr = transcripts(lex, "# c\nw w\ta q b q\n\n");
  REQUIRE(tr.size() == 1);
  CHECK(tr[0].words == std::vector<std::string>{"w", "w"});
  CHECK(tr[0].ref == Sequence{1, 3, 2, 3});
  CHECK_THROWS_AS(transcripts(lex, "w a b\n"), ParseError);
  CHECK_THROWS_AS(transcripts(lex, " \ta b\n"), ParseError);
  CHECK_THROWS_AS(transcripts(lex, "w\ta ε\n"), ParseError);
  std::ostringstream os;
  auto ok = transcripts(lex, "w w\ta b\n");
  write_transcripts(os, ok, lex.vocabulary());
  CHECK(os.str() == "w w\ta b\n");
}
