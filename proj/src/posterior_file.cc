// gtc/posterior_file.cc

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

#include "gtc/posterior_file.h"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <iterator>
#include <sstream>
#include <ostream>
#include <string>

#include "gtc/common.h"

namespace gtc {

namespace {

constexpr std::array<char, 4> kMagic = {'G', 'T', 'C', 'P'};
constexpr std::size_t kMaxCells = std::size_t{1} << 31;

uint32_t read_u32_le(std::istream &is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char *>(b), 4)) throw FormatError("truncated binary header");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_u32_le(std::ostream &os, uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

Matrix alloc(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw FormatError("posterior file has zero frames or symbols");
  if (rows > kMaxCells / cols) throw FormatError("posterior file dimensions too large");
  return Matrix(rows, cols);
}

Matrix read_binary(std::istream &is) {
  const std::size_t rows = read_u32_le(is);
  const std::size_t cols = read_u32_le(is);
  Matrix m = alloc(rows, cols);
  for (double &v : m.data()) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char *>(b), 8)) throw FormatError("truncated binary data");
    uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | b[i];
    v = std::bit_cast<double>(bits);
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw FormatError("trailing bytes after binary posterior data");
  return m;
}

bool next_token(std::istream &is, std::string &tok) { return static_cast<bool>(is >> tok); }

std::size_t parse_dim(const std::string &tok) {
  char *end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (tok.empty() || *end != '\0' || tok[0] == '-') throw FormatError("malformed header '" + tok + "'");
  return static_cast<std::size_t>(v);
}

Matrix read_text(std::istream &is) {
  std::string tok;
  if (!next_token(is, tok)) throw FormatError("empty posterior file");
  const std::size_t rows = parse_dim(tok);
  if (!next_token(is, tok)) throw FormatError("missing V in header");
  const std::size_t cols = parse_dim(tok);
  Matrix m = alloc(rows, cols);
  std::size_t idx = 0;
  for (double &v : m.data()) {
    if (!next_token(is, tok))
      throw FormatError("expected " + std::to_string(rows * cols) + " values, got " +
                        std::to_string(idx));
    char *end = nullptr;
    v = std::strtod(tok.c_str(), &end);
    if (*end != '\0') throw FormatError("malformed value '" + tok + "'");
    ++idx;
  }
  if (next_token(is, tok)) throw FormatError("trailing data after posterior rows");
  return m;
}

}  // namespace

Matrix read_posterior_matrix(std::istream &is) {
  std::array<char, 4> head{};
  is.read(head.data(), 4);
  if (is.gcount() == 4 && head == kMagic) return read_binary(is);
  // Not binary: rewind what we consumed and parse as text.
  std::string text(head.data(), static_cast<std::size_t>(is.gcount()));
  is.clear();
  text.append(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  std::istringstream ts(text);
  return read_text(ts);
}

EmissionMatrix load_posteriors(std::istream &is, bool normalize) {
  Matrix m = read_posterior_matrix(is);
  if (normalize) {
    for (double v : m.data())
      if (std::isnan(v) || v == kInf) throw FormatError("posterior file contains NaN or +inf");
    return EmissionMatrix::log_softmax(m);
  }
  return EmissionMatrix(std::move(m));
}

void write_posteriors_text(std::ostream &os, const Matrix &m, int precision) {
  os << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.*g", precision, m(t, k));
      if (k > 0) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

void write_posteriors_binary(std::ostream &os, const Matrix &m) {
  os.write(kMagic.data(), kMagic.size());
  write_u32_le(os, static_cast<uint32_t>(m.rows()));
  write_u32_le(os, static_cast<uint32_t>(m.cols()));
  for (double v : m.data()) {
    uint64_t bits = std::bit_cast<uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    os.write(b, 8);
  }
}

}  // namespace gtc
