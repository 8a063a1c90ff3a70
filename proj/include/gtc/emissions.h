// gtc/emissions.h

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

#ifndef GTC_EMISSIONS_H_
#define GTC_EMISSIONS_H_

#include <cstddef>
#include <span>

#include "gtc/matrix.h"

namespace gtc {

// T' x V matrix of per-frame natural-log posteriors.
//
// The checked constructor requires every row to log-sum-exp to 0 within
// 1e-6 and every entry to be <= 1e-6 (-inf allowed). `unnormalized` skips
// the normalization checks and only rejects NaN and +inf; losses then treat
// the entries as free log-scores, which is what gradient checks perturb.
class EmissionMatrix {
 public:
  static constexpr double kTolerance = 1e-6;

  explicit EmissionMatrix(Matrix log_posteriors);
  static EmissionMatrix unnormalized(Matrix log_scores);

  // Row-wise log-softmax of arbitrary finite scores.
  static EmissionMatrix log_softmax(const Matrix &scores);

  std::size_t num_frames() const { return values_.rows(); }
  std::size_t num_symbols() const { return values_.cols(); }

  double operator()(std::size_t t, std::size_t k) const { return values_(t, k); }
  std::span<const double> frame(std::size_t t) const { return values_.row(t); }
  const Matrix &values() const { return values_; }

 private:
  struct Unchecked {};
  EmissionMatrix(Matrix values, Unchecked);

  Matrix values_;
};

// log(sum(exp(row))) with -inf handled.
double log_sum_exp(std::span<const double> row);

}  // namespace gtc

#endif  // GTC_EMISSIONS_H_
