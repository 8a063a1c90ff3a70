// tests/acceptance_test.cc

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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <quadmath.h>

#include "gtc/cli.h"
#include "gtc/lexicon.h"
#include "gtc/loss.h"
#include "gtc/metrics.h"
#include "gtc/synthlab.h"
#include "test_util.h"

using namespace gtc;
using namespace gtc::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char *name, double budget_s, const std::function<Outcome()> &fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char *f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// 1 --------------------------------------------------------------------------
Outcome brute_force_equivalence() {
  std::mt19937_64 rng(1001);
  std::size_t cases = 0, feasible = 0, bad = 0;
  double worst = 0.0;
  while (feasible < 1000) {
    const std::size_t vocab = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    auto words = random_words(rng, vocab - 1, 3, 3, 3);
    auto g = build_gtc_graph(words);
    const std::size_t shortest = min_alignment_length(g);
    // Mostly feasible lengths; every fifth case is drawn from the full range.
    const std::size_t lo = (cases % 5 == 0 || shortest > 6) ? 1 : shortest;
    const std::size_t frames = std::uniform_int_distribution<std::size_t>(lo, 6)(rng);
    auto em = random_emissions(rng, frames, vocab);
    const double fast = gtc_loss(g, em).loss;
    const double slow = brute_force_loss(g, em);
    ++cases;
    if (std::isfinite(slow)) {
      ++feasible;
      worst = std::max(worst, std::abs(fast - slow) / std::max(std::abs(slow), 1e-300));
    }
    if (!close_rel(fast, slow, 1e-10)) ++bad;
  }
  return {bad == 0 && feasible >= 1000,
          fmt("%zu cases (%zu feasible), %zu mismatches, worst rel err %.2e", cases, feasible,
              bad, worst)};
}

// 2 --------------------------------------------------------------------------
Outcome ctc_degeneracy() {
  std::mt19937_64 rng(2002);
  std::size_t cases = 0, bad = 0;
  double worst = 0.0;
  while (cases < 600) {
    const std::size_t vocab = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    Sequence target(std::uniform_int_distribution<std::size_t>(1, 5)(rng));
    for (auto &s : target) s = std::uniform_int_distribution<Symbol>(1, vocab - 1)(rng);
    const std::size_t frames = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    auto em = random_emissions(rng, frames, vocab);
    auto ref = ctc_loss_reference(target, em);
    auto got = gtc_loss(build_ctc_graph(Pronunciation(target)), em);
    ++cases;
    if (std::isfinite(ref.loss)) worst = std::max(worst, std::abs(got.loss - ref.loss));
    if (!close_rel(got.loss, ref.loss, 1e-12)) ++bad;
  }
  return {bad == 0, fmt("%zu cases, %zu mismatches, worst abs diff %.2e", cases, bad, worst)};
}

// 3 --------------------------------------------------------------------------
using Quad = __float128;

// Loss re-evaluated in quad precision with a plain forward pass over graph
// nodes, one entry of the log-posteriors shifted by `delta`. Double
// precision cancels too much in (L(x+h) - L(x-h)) / 2h for small gradients.
Quad quad_loss(const LabelGraph &g, const EmissionMatrix &em, std::size_t t0, std::size_t k0,
               Quad delta) {
  const std::size_t nodes = g.num_nodes();
  std::vector<std::vector<NodeId>> preds(nodes);
  for (const auto &a : g.arcs()) preds[a.dst].push_back(a.src);
  auto prob = [&](std::size_t t, Symbol k) {
    Quad x = em(t, k);
    if (t == t0 && static_cast<std::size_t>(k) == k0) x += delta;
    return expq(x);
  };
  std::vector<Quad> alpha(nodes, 0), next(nodes);
  for (std::size_t n = 0; n < nodes; ++n)
    if (g.is_start(static_cast<NodeId>(n))) alpha[n] = prob(0, g.symbol(static_cast<NodeId>(n)));
  for (std::size_t t = 1; t < em.num_frames(); ++t) {
    for (std::size_t n = 0; n < nodes; ++n) {
      Quad in = alpha[n];
      for (NodeId m : preds[n]) in += alpha[m];
      next[n] = in * prob(t, g.symbol(static_cast<NodeId>(n)));
    }
    std::swap(alpha, next);
  }
  Quad z = 0;
  for (NodeId f : g.finals()) z += alpha[f];
  return -logq(z);
}

Outcome gradient_check() {
  std::mt19937_64 rng(3003);
  const double h = 1e-5;
  std::size_t cases = 0, entries = 0, bad = 0, bad_occ = 0;
  double worst = 0.0;
  while (cases < 120) {
    const std::size_t vocab = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    auto words = random_words(rng, vocab - 1, 3, 3, 3);
    auto g = build_gtc_graph(words);
    const std::size_t frames =
        min_alignment_length(g) + std::uniform_int_distribution<std::size_t>(0, 4)(rng);
    auto em = random_emissions(rng, frames, vocab);
    auto res = gtc_loss(g, em);
    ++cases;
    for (std::size_t t = 0; t < frames; ++t) {
      double occ = 0.0;
      for (std::size_t k = 0; k < vocab; ++k) {
        occ += res.occupancy(t, k);
        const double an = res.grad(t, k);
        if (std::abs(an) <= 1e-8) continue;
        const Quad qh = h;
        const auto fd =
            static_cast<double>((quad_loss(g, em, t, k, qh) - quad_loss(g, em, t, k, -qh)) / (2 * qh));
        const double rel = std::abs(fd - an) / std::abs(an);
        worst = std::max(worst, rel);
        ++entries;
        if (rel > 1e-6) ++bad;
      }
      if (std::abs(occ - 1.0) > 1e-9) ++bad_occ;
    }
  }
  return {bad == 0 && bad_occ == 0,
          fmt("%zu cases, %zu checked entries, %zu gradient mismatches (worst rel %.2e), "
              "%zu frames with occupancy off 1",
              cases, entries, bad, worst, bad_occ)};
}

// 4 --------------------------------------------------------------------------
Outcome monotonicity() {
  std::mt19937_64 rng(4004);
  std::size_t cases = 0, bad = 0;
  while (cases < 600) {
    const std::size_t vocab = std::uniform_int_distribution<std::size_t>(3, 5)(rng);
    auto words = random_words(rng, vocab - 1, 3, 3, 3);
    // Drop one variant from one word that has more than one.
    std::vector<std::size_t> multi;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (words[i].variants().size() > 1) multi.push_back(i);
    if (multi.empty()) continue;
    const std::size_t w = multi[rng() % multi.size()];
    auto fewer = words;
    auto v = words[w].variants();
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(rng() % v.size()));
    fewer[w] = WordAlternatives(words[w].word(), v);

    auto g_more = build_gtc_graph(words), g_less = build_gtc_graph(fewer);
    const std::size_t frames =
        min_alignment_length(g_less) + std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    auto em = random_emissions(rng, frames, vocab);
    const double more = gtc_loss(g_more, em).loss, less = gtc_loss(g_less, em).loss;
    ++cases;
    if (more > less + 1e-12 * std::max(1.0, std::abs(less))) ++bad;
  }

  // Oracle LER over n on fixture corpora: one hand-written, several generated.
  std::size_t fixtures = 0, bad_fixtures = 0;
  std::string trend;
  auto check_fixture = [&](const Lexicon &lex, const std::vector<Transcript> &tr) {
    double prev = 1e300;
    bool ok = true;
    std::string row;
    for (NBest n : {NBest(1), NBest(2), NBest(3), NBest::all()}) {
      const double ler = oracle_ler(lex, tr, n).percent;
      ok = ok && ler <= prev;
      prev = ler;
      row += fmt("%s%.1f", row.empty() ? "" : "/", ler);
    }
    ++fixtures;
    if (!ok) ++bad_fixtures;
    if (trend.size() < 40) trend += (trend.empty() ? "" : ", ") + row;
  };

  {
    std::istringstream lex_text("w\ta b\nw\ta c\nw\tb b\nv\td\nv\tt d\nu\ta\nu\te\nu\ta e\n");
    auto lex = parse_lexicon(lex_text);
    std::istringstream tr_text("w v\tb b d\nw w\ta c a b\nv w\td b c\nw u\tb b e\nu v u\ta e t d e\n");
    check_fixture(lex, parse_transcripts(tr_text, lex.vocabulary()));
  }
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    synth::SynthConfig c;
    c.seed = seed;
    c.variants_per_word = 4;
    c.test_utterances = 50;
    auto corpus = synth::generate_corpus(c);
    std::vector<Transcript> tr;
    for (const auto &u : corpus.test) tr.push_back({u.words, u.phonemes});
    check_fixture(corpus.lexicon, tr);
  }
  return {bad == 0 && bad_fixtures == 0,
          fmt("%zu loss cases, %zu increases; %zu oracle-LER fixtures, %zu non-monotone "
              "(n=1/2/3/all: %s, ...)",
              cases, bad, fixtures, bad_fixtures, trend.c_str())};
}

// 5 --------------------------------------------------------------------------
Outcome spot_values() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gtc_acceptance_spot";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto write = [&](const std::string &name, const std::string &text) {
    std::ofstream((dir / name).string()) << text;
    return (dir / name).string();
  };
  const std::string row = "-1.0986122886681098 -1.0986122886681098 -1.0986122886681098\n";
  const auto lex = write("lex.tsv", "x\ta\nab\ta\nab\tb\n");
  const auto t1 = write("t1.txt", "1 3\n" + row);
  const auto t2 = write("t2.txt", "2 3\n" + row + row);
  const auto t3 = write("t3.txt", "3 3\n" + row + row + row);

  struct Spot {
    const char *name;
    LabelGraph graph;
    std::size_t frames;
    double expect;
    std::vector<std::string> args;
  };
  std::vector<Spot> spots{
      {"ln 3", build_gtc_graph({word({{1}})}), 2, std::log(3.0), {"loss", lex, t2, "x"}},
      {"ln 1.5", build_gtc_graph({word({{1}, {2}})}), 1, std::log(1.5), {"loss", lex, t1, "ab"}},
      {"ln 27", build_gtc_graph({word({{1}}), word({{1}})}), 3, std::log(27.0),
       {"loss", lex, t3, "x", "x"}},
  };

  bool ok = true;
  std::string detail;
  for (const auto &s : spots) {
    const auto em = uniform_emissions(s.frames, 3);
    const double brute = brute_force_loss(s.graph, em);
    const double fast = gtc_loss(s.graph, em).loss;
    const std::string want = fmt("loss=%.6f\n", brute);
    std::ostringstream out, err;
    const int code = cli::run(s.args, out, err);
    std::ostringstream brute_out;
    auto brute_args = s.args;
    brute_args.insert(brute_args.end(), {"--mode", "brute"});
    cli::run(brute_args, brute_out, err);
    const bool good = std::abs(brute - s.expect) < 5e-7 && close_rel(fast, brute, 1e-12) &&
                      code == 0 && out.str() == want && brute_out.str() == want;
    ok = ok && good;
    detail += fmt("%s%s=%.6f%s", detail.empty() ? "" : ", ", s.name, brute, good ? "" : " (bad)");
  }
  fs::remove_all(dir);
  return {ok, detail + "; cli output matches to 6 decimals"};
}

// 6 --------------------------------------------------------------------------
double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome synthetic_experiment() {
  synth::ExperimentSettings settings;  // seeds 1..5, n=all
  synth::SynthConfig varied;
  varied.variant_prob = 0.5;
  std::vector<double> ctc, gtc_all;
  for (const auto &r : synth::run_experiment(varied, settings))
    (r.mode == "ctc" ? ctc : gtc_all).push_back(r.per);
  const double m_ctc = median(ctc), m_gtc = median(gtc_all);

  // No variation: GTC restricted to the same single pronunciation must train
  // the exact same model as CTC 1-best.
  synth::SynthConfig plain;
  plain.variant_prob = 0.0;
  std::size_t identical = 0;
  std::vector<double> gap;
  for (uint64_t seed : settings.seeds) {
    plain.seed = seed;
    const auto corpus = synth::generate_corpus(plain);
    const synth::FrameModel init(plain.vocab_size, plain.feature_dim, seed * 7919 + 17);
    synth::TrainOptions o;
    o.epochs = settings.epochs;
    o.learning_rate = settings.learning_rate;
    o.batch_size = settings.batch_size;
    o.shuffle_seed = seed;
    o.mode = synth::LossMode::kCtcOneBest;
    const auto ctc_model = synth::train(init, corpus, o);
    o.mode = synth::LossMode::kGtcNBest;
    o.n = NBest(1);
    const auto gtc_model = synth::train(init, corpus, o);
    identical += ctc_model == gtc_model;
    o.n = NBest::all();
    const auto all_model = synth::train(init, corpus, o);
    gap.push_back(synth::evaluate(ctc_model, corpus.test).percent -
                  synth::evaluate(all_model, corpus.test).percent);
  }
  const double gap_varied = m_ctc - m_gtc;
  return {m_gtc < m_ctc && identical == settings.seeds.size(),
          fmt("variant_prob=0.5 median PER ctc=%.1f%% gtc(all)=%.1f%%; variant_prob=0: "
              "%zu/%zu seeds identical models (gtc n=1 vs ctc), median gap ctc-gtc(all) "
              "%.1f pts vs %.1f pts at 0.5",
              m_ctc, m_gtc, identical, settings.seeds.size(), median(gap), gap_varied)};
}

// 7 --------------------------------------------------------------------------
Outcome set_semantics() {
  // a=1 b=2 c=3 d=4 e=5 f=6
  std::vector<WordAlternatives> fig{word({{1, 2}, {1, 3}}), word({{4, 5}, {6, 5}})};
  const auto fig_set = enumerate_collapsed(build_gtc_graph(fig), 100);
  const bool fig_ok = fig_set == cross_product(fig) && fig_set.size() == 4;

  std::mt19937_64 rng(7007);
  std::size_t cases = 0, bad = 0;
  while (cases < 600) {
    const std::size_t phonemes = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    auto words = random_words(rng, phonemes, 3, 3, 3);
    if (enumerate_collapsed(build_gtc_graph(words), 100000) != cross_product(words)) ++bad;
    ++cases;
  }
  return {fig_ok && bad == 0,
          fmt("two-word example gives %zu sequences%s; %zu random cases, %zu mismatches",
              fig_set.size(), fig_ok ? "" : " (wrong)", cases, bad)};
}

}  // namespace

int main() {
  criterion(1, "brute-force equivalence", 30, brute_force_equivalence);
  criterion(2, "ctc degeneracy", 10, ctc_degeneracy);
  criterion(3, "gradient check", 60, gradient_check);
  criterion(4, "monotonicity", 60, monotonicity);
  criterion(5, "closed-form spot values", 10, spot_values);
  criterion(6, "synthetic gtc vs ctc", 600, synthetic_experiment);
  criterion(7, "graph set semantics", 30, set_semantics);
  std::printf("%s: %d failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
