// gtc/loss.h

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

#ifndef GTC_LOSS_H_
#define GTC_LOSS_H_

#include "gtc/emissions.h"
#include "gtc/label_graph.h"
#include "gtc/matrix.h"

namespace gtc {

struct LossResult {
  double loss = 0.0;  // nats; +inf when the target set is infeasible
  Matrix grad;        // d loss / d log_posteriors[t][k] = -occupancy
  Matrix occupancy;   // posterior that an accepted alignment emits k at t
};

// Merges consecutive repeats, then drops blanks.
Sequence collapse(const Sequence &alignment);

// Best-path decoding: argmax per frame (ties go to the lowest index, so
// the blank wins ties), then collapse.
Sequence greedy_decode(const EmissionMatrix &emissions);

// Sum of log_posteriors[t][alignment[t]]; -inf propagates.
double alignment_logprob(const Sequence &alignment, const EmissionMatrix &emissions);

// CTC loss by the classical alpha/beta recursion over the 2L+1
// blank-interleaved positions. Shares no code with the trellis path.
// Throws InvalidTarget if the target holds a blank.
LossResult ctc_loss_reference(const Sequence &target, const EmissionMatrix &emissions);

// -log of the total probability of all alignments accepted by `graph`.
// Infeasible targets give +inf with a zero gradient.
LossResult gtc_loss(const LabelGraph &graph, const EmissionMatrix &emissions);

// Exhaustive oracle: sums every V^T' alignment whose collapse is accepted
// by `graph`. Throws TooLarge when V^T' exceeds kBruteForceLimit.
inline constexpr std::size_t kBruteForceLimit = 1000000;
double brute_force_loss(const LabelGraph &graph, const EmissionMatrix &emissions);

}  // namespace gtc

#endif  // GTC_LOSS_H_
