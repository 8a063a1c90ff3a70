// tests/loss_test.cc

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

#include <cmath>
#include <random>

#include "doctest.h"
#include "gtc/loss.h"
#include "test_util.h"

using namespace gtc;
using namespace gtc::testing;

TEST_CASE("collapse merges repeats then drops blanks") {
  CHECK(collapse({1, 1, 0, 1, 2, 2}) == Sequence{1, 1, 2});
  CHECK(collapse({0, 0}) == Sequence{});
  CHECK(collapse({}) == Sequence{});
  CHECK(collapse({1, 0, 0, 1}) == Sequence{1, 1});
}

TEST_CASE("greedy decode") {
  Matrix m(4, 3, std::log(0.25));
  auto set = [&](std::size_t t, std::size_t k) { m(t, k) = std::log(0.5); };
  set(0, 1); set(1, 1); set(2, 0); set(3, 2);
  CHECK(greedy_decode(EmissionMatrix::unnormalized(m)) == Sequence{1, 2});
  // ties resolve to the lowest index
  CHECK(greedy_decode(uniform_emissions(3, 3)) == Sequence{});
}

TEST_CASE("alignment_logprob") {
  auto em = uniform_emissions(2, 3);
  CHECK(alignment_logprob({1, 2}, em) == doctest::Approx(std::log(1.0 / 9.0)));
  CHECK_THROWS_AS(alignment_logprob({1}, em), std::invalid_argument);
}

TEST_CASE("reference CTC loss") {
  auto em = uniform_emissions(2, 3);
  CHECK(ctc_loss_reference({1}, em).loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(ctc_loss_reference({1, 2}, em).loss == doctest::Approx(std::log(9.0)).epsilon(1e-12));
  auto bad = ctc_loss_reference({1, 1}, em);
  CHECK(std::isinf(bad.loss));
  CHECK(bad.loss > 0);
  for (double g : bad.grad.data()) CHECK(g == 0.0);
  CHECK(ctc_loss_reference({}, em).loss == doctest::Approx(std::log(9.0)));
  CHECK_THROWS_AS(ctc_loss_reference({0}, em), InvalidTarget);
  CHECK_THROWS_AS(ctc_loss_reference({3}, em), InvalidTarget);
}

TEST_CASE("gtc loss spot values") {
  auto em = uniform_emissions(2, 3);
  CHECK(gtc_loss(build_ctc_graph(pron({1})), em).loss ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  // {a} or {b} over one uniform frame of {ε,a,b}: 2/3
  auto g = build_gtc_graph({word({{1}, {2}})});
  CHECK(gtc_loss(g, uniform_emissions(1, 3)).loss ==
        doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(brute_force_loss(g, uniform_emissions(1, 3)) ==
        doctest::Approx(std::log(1.5)).epsilon(1e-12));
  auto inf = gtc_loss(build_ctc_graph(pron({1, 1})), em);
  CHECK(std::isinf(inf.loss));
}

TEST_CASE("gtc equals brute force") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    auto words = random_words(rng, 2, 2, 2, 2);
    auto g = build_gtc_graph(words);
    const std::size_t frames = min_alignment_length(g) + rep % 3;
    if (frames > 7) continue;
    auto em = random_emissions(rng, frames, 3);
    const double fast = gtc_loss(g, em).loss;
    const double slow = brute_force_loss(g, em);
    CHECK(close_rel(fast, slow, 1e-10));
  }
}

TEST_CASE("brute force refuses large inputs") {
  auto g = build_ctc_graph(pron({1}));
  CHECK_THROWS_AS(brute_force_loss(g, uniform_emissions(13, 3)), TooLarge);
}

TEST_CASE("gtc on a single pronunciation equals reference CTC") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    std::uniform_int_distribution<int> len(1, 4), sym(1, 4);
    Sequence target(len(rng));
    for (auto &s : target) s = sym(rng);
    const std::size_t frames = target.size() * 2 + rep % 3;
    auto em = random_emissions(rng, frames, 5);
    auto ref = ctc_loss_reference(target, em);
    auto got = gtc_loss(build_ctc_graph(Pronunciation(target)), em);
    CHECK(close_rel(got.loss, ref.loss, 1e-12));
    for (std::size_t i = 0; i < ref.grad.data().size(); ++i)
      CHECK(std::abs(got.grad.data()[i] - ref.grad.data()[i]) <= 1e-10);
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(8);
  const double h = 1e-5;
  for (int rep = 0; rep < 20; ++rep) {
    auto words = random_words(rng, 3, 2, 2, 2);
    auto g = build_gtc_graph(words);
    const std::size_t frames = min_alignment_length(g) + 1;
    auto em = random_emissions(rng, frames, 4);
    auto res = gtc_loss(g, em);
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t k = 0; k < 4; ++k) {
        Matrix plus = em.values(), minus = em.values();
        plus(t, k) += h;
        minus(t, k) -= h;
        const double fd = (gtc_loss(g, EmissionMatrix::unnormalized(plus)).loss -
                           gtc_loss(g, EmissionMatrix::unnormalized(minus)).loss) /
                          (2 * h);
        const double an = res.grad(t, k);
        if (std::abs(an) > 1e-8) CHECK(std::abs(fd - an) <= 1e-6 * std::abs(an) + 1e-9);
      }
    }
    for (std::size_t t = 0; t < frames; ++t) {
      double sum = 0.0;
      for (std::size_t k = 0; k < 4; ++k) sum += res.occupancy(t, k);
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("adding alternatives never increases the loss") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 200; ++rep) {
    auto words = random_words(rng, 3, 3, 3, 3);
    std::vector<WordAlternatives> first;
    for (const auto &w : words) first.emplace_back(w.word(), std::vector{w.variants()[0]});
    auto g_all = build_gtc_graph(words);
    auto g_one = build_gtc_graph(first);
    const std::size_t frames = min_alignment_length(g_one) + rep % 3;
    auto em = random_emissions(rng, frames, 4);
    CHECK(gtc_loss(g_all, em).loss <= gtc_loss(g_one, em).loss * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("one-hot and impossible alignments") {
  auto em = one_hot({1, 0, 2}, 3);
  CHECK(alignment_logprob({1, 0, 2}, em) == 0.0);
  CHECK(alignment_logprob({1, 1, 2}, em) == kLogZero);
  auto g = build_ctc_graph(pron({1, 2}));
  CHECK(brute_force_loss(g, em) == 0.0);
  CHECK(gtc_loss(g, em).loss == doctest::Approx(0.0));
  CHECK(std::isinf(brute_force_loss(build_ctc_graph(pron({1, 1})), uniform_emissions(2, 3))));
}
