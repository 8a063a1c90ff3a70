// gtc/common.h

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

#ifndef GTC_COMMON_H_
#define GTC_COMMON_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtc {

// Index into a Vocabulary. Index 0 is always the blank.
using Symbol = int32_t;
// A sequence of symbols: an alignment (blanks allowed) or a target
// phoneme sequence (no blanks).
using Sequence = std::vector<Symbol>;

inline constexpr Symbol kBlank = 0;
inline constexpr const char *kBlankName = "ε";

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) with -inf handled explicitly.
inline double log_add(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GTC_DEFINE_ERROR(Name)         \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

GTC_DEFINE_ERROR(InvalidGraph);
GTC_DEFINE_ERROR(CycleDetected);
GTC_DEFINE_ERROR(EmptyGraph);
GTC_DEFINE_ERROR(EmptyIntersection);
GTC_DEFINE_ERROR(EmptyPronunciation);
GTC_DEFINE_ERROR(LimitExceeded);
GTC_DEFINE_ERROR(InvalidTarget);
GTC_DEFINE_ERROR(TooLarge);
GTC_DEFINE_ERROR(EmptyReference);
GTC_DEFINE_ERROR(ConfigError);
GTC_DEFINE_ERROR(DivergenceError);
GTC_DEFINE_ERROR(FormatError);

#undef GTC_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnknownWord : public Error {
 public:
  explicit UnknownWord(std::vector<std::string> words)
      : Error(make_message(words)), words_(std::move(words)) {}
  const std::vector<std::string> &words() const { return words_; }

 private:
  static std::string make_message(const std::vector<std::string> &words) {
    std::string msg = "unknown word(s):";
    for (const auto &w : words) msg += " " + w;
    return msg;
  }
  std::vector<std::string> words_;
};

}  // namespace gtc

#endif  // GTC_COMMON_H_
