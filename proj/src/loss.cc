// gtc/loss.cc

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

#include "gtc/loss.h"

#include <cmath>
#include <optional>
#include <set>

#include "gtc/graph_builder.h"
#include "gtc/trellis.h"

namespace gtc {

Sequence collapse(const Sequence &alignment) {
  Sequence out;
  Symbol prev = -1;
  for (Symbol s : alignment) {
    if (s != prev && s != kBlank) out.push_back(s);
    prev = s;
  }
  return out;
}

Sequence greedy_decode(const EmissionMatrix &emissions) {
  Sequence best(emissions.num_frames(), kBlank);
  for (std::size_t t = 0; t < emissions.num_frames(); ++t) {
    const auto row = emissions.frame(t);
    std::size_t arg = 0;
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k] > row[arg]) arg = k;
    best[t] = static_cast<Symbol>(arg);
  }
  return collapse(best);
}

double alignment_logprob(const Sequence &alignment, const EmissionMatrix &emissions) {
  if (alignment.size() != emissions.num_frames())
    throw std::invalid_argument("alignment length does not match the number of frames");
  double sum = 0.0;
  for (std::size_t t = 0; t < alignment.size(); ++t)
    sum += emissions(t, static_cast<std::size_t>(alignment[t]));
  return sum;
}

namespace {

LossResult infeasible(std::size_t frames, std::size_t symbols) {
  LossResult r;
  r.loss = kInf;
  r.grad = Matrix(frames, symbols, 0.0);
  r.occupancy = Matrix(frames, symbols, 0.0);
  return r;
}

}  // namespace

LossResult ctc_loss_reference(const Sequence &target, const EmissionMatrix &emissions) {
  for (Symbol s : target) {
    if (s == kBlank) throw InvalidTarget("target contains the blank symbol");
    if (s < 0 || static_cast<std::size_t>(s) >= emissions.num_symbols())
      throw InvalidTarget("target symbol outside the vocabulary");
  }
  const std::size_t frames = emissions.num_frames();
  const std::size_t symbols = emissions.num_symbols();
  const std::size_t num_labels = target.size();
  const std::size_t num_pos = 2 * num_labels + 1;

  // Extended label at position s: blank for even s.
  auto label = [&](std::size_t s) -> std::size_t {
    return s % 2 == 0 ? kBlank : static_cast<std::size_t>(target[s / 2]);
  };
  auto can_skip = [&](std::size_t s) {
    return s >= 2 && s % 2 == 1 && target[s / 2] != target[s / 2 - 1];
  };

  // alpha[t][s] and beta[t][s] both include the emission at frame t.
  std::vector<std::vector<double>> alpha(frames, std::vector<double>(num_pos, kLogZero));
  std::vector<std::vector<double>> beta(frames, std::vector<double>(num_pos, kLogZero));

  alpha[0][0] = emissions(0, label(0));
  if (num_pos > 1) alpha[0][1] = emissions(0, label(1));
  for (std::size_t t = 1; t < frames; ++t) {
    for (std::size_t s = 0; s < num_pos; ++s) {
      double a = alpha[t - 1][s];
      if (s >= 1) a = log_add(a, alpha[t - 1][s - 1]);
      if (can_skip(s)) a = log_add(a, alpha[t - 1][s - 2]);
      alpha[t][s] = a == kLogZero ? kLogZero : a + emissions(t, label(s));
    }
  }
  double log_likelihood = alpha[frames - 1][num_pos - 1];
  if (num_pos > 1) log_likelihood = log_add(log_likelihood, alpha[frames - 1][num_pos - 2]);
  if (log_likelihood == kLogZero) return infeasible(frames, symbols);

  beta[frames - 1][num_pos - 1] = emissions(frames - 1, label(num_pos - 1));
  if (num_pos > 1) beta[frames - 1][num_pos - 2] = emissions(frames - 1, label(num_pos - 2));
  for (std::size_t t = frames - 1; t-- > 0;) {
    for (std::size_t s = 0; s < num_pos; ++s) {
      double b = beta[t + 1][s];
      if (s + 1 < num_pos) b = log_add(b, beta[t + 1][s + 1]);
      if (s + 2 < num_pos && can_skip(s + 2)) b = log_add(b, beta[t + 1][s + 2]);
      beta[t][s] = b == kLogZero ? kLogZero : b + emissions(t, label(s));
    }
  }

  LossResult r;
  r.loss = -log_likelihood;
  r.occupancy = Matrix(frames, symbols, 0.0);
  r.grad = Matrix(frames, symbols, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t s = 0; s < num_pos; ++s) {
      const double emit = emissions(t, label(s));
      if (alpha[t][s] == kLogZero || beta[t][s] == kLogZero) continue;
      r.occupancy(t, label(s)) += std::exp(alpha[t][s] + beta[t][s] - emit - log_likelihood);
    }
    for (std::size_t k = 0; k < symbols; ++k) r.grad(t, k) = -r.occupancy(t, k);
  }
  return r;
}

LossResult gtc_loss(const LabelGraph &graph, const EmissionMatrix &emissions) {
  const std::size_t frames = emissions.num_frames();
  const std::size_t symbols = emissions.num_symbols();
  std::optional<Trellis> trellis;
  try {
    trellis.emplace(intersect(graph, emissions));
  } catch (const EmptyIntersection &) {
    return infeasible(frames, symbols);
  }

  const auto fb = forward_backward(*trellis);
  if (fb.total_logprob == kLogZero) return infeasible(frames, symbols);

  LossResult r;
  r.loss = -fb.total_logprob;
  r.occupancy = Matrix(frames, symbols, 0.0);
  r.grad = Matrix(frames, symbols, 0.0);
  const auto arcs = trellis->arcs();
  const auto states = trellis->states();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::size_t t = static_cast<std::size_t>(states[arcs[i].dst].frame) - 1;
    r.occupancy(t, static_cast<std::size_t>(arcs[i].symbol)) += fb.arc_posteriors[i];
  }
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t k = 0; k < symbols; ++k) r.grad(t, k) = -r.occupancy(t, k);
  return r;
}

double brute_force_loss(const LabelGraph &graph, const EmissionMatrix &emissions) {
  const std::size_t frames = emissions.num_frames();
  const std::size_t symbols = emissions.num_symbols();
  std::size_t total = 1;
  for (std::size_t t = 0; t < frames; ++t) {
    total *= symbols;
    if (total > kBruteForceLimit)
      throw TooLarge("brute force needs more than " + std::to_string(kBruteForceLimit) +
                     " alignments");
  }
  // Collapsed sequences longer than T' can never be reached; at most
  // `total` distinct ones fit.
  std::set<Sequence> accepted;
  try {
    accepted = enumerate_collapsed(graph, total, frames);
  } catch (const EmptyGraph &) {
    return kInf;
  }

  Sequence alignment(frames, 0);
  double log_total = kLogZero;
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t code = i;
    for (std::size_t t = frames; t-- > 0;) {
      alignment[t] = static_cast<Symbol>(code % symbols);
      code /= symbols;
    }
    if (accepted.count(collapse(alignment)))
      log_total = log_add(log_total, alignment_logprob(alignment, emissions));
  }
  return -log_total;
}

}  // namespace gtc
