// gtc/emissions.cc

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

#include "gtc/emissions.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtc/common.h"

namespace gtc {

namespace {

void check_shape_and_values(const Matrix &m) {
  if (m.rows() == 0) throw FormatError("emission matrix has no frames");
  if (m.cols() < 2) throw FormatError("emission matrix needs at least 2 symbols");
  for (double v : m.data()) {
    if (std::isnan(v) || v == kInf)
      throw FormatError("emission matrix contains NaN or +inf");
  }
}

}  // namespace

double log_sum_exp(std::span<const double> row) {
  double max = kLogZero;
  for (double v : row) max = std::max(max, v);
  if (max == kLogZero) return kLogZero;
  double sum = 0.0;
  for (double v : row) sum += std::exp(v - max);
  return max + std::log(sum);
}

EmissionMatrix::EmissionMatrix(Matrix values, Unchecked)
    : values_(std::move(values)) {
  check_shape_and_values(values_);
}

EmissionMatrix::EmissionMatrix(Matrix log_posteriors)
    : values_(std::move(log_posteriors)) {
  check_shape_and_values(values_);
  for (std::size_t t = 0; t < values_.rows(); ++t) {
    for (double v : values_.row(t)) {
      if (v > kTolerance) {
        std::ostringstream os;
        os << "frame " << t << ": entry " << v << " is not a log-probability";
        throw FormatError(os.str());
      }
    }
    double norm = log_sum_exp(values_.row(t));
    if (!(std::abs(norm) <= kTolerance)) {
      std::ostringstream os;
      os << "frame " << t << " is not normalized (log-sum-exp " << norm << ")";
      throw FormatError(os.str());
    }
  }
}

EmissionMatrix EmissionMatrix::unnormalized(Matrix log_scores) {
  return EmissionMatrix(std::move(log_scores), Unchecked{});
}

EmissionMatrix EmissionMatrix::log_softmax(const Matrix &scores) {
  Matrix out(scores.rows(), scores.cols());
  for (std::size_t t = 0; t < scores.rows(); ++t) {
    double norm = log_sum_exp(scores.row(t));
    for (std::size_t k = 0; k < scores.cols(); ++k)
      out(t, k) = scores(t, k) - norm;
  }
  return EmissionMatrix(std::move(out), Unchecked{});
}

}  // namespace gtc
