// gtc/posterior_file.h

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

#ifndef GTC_POSTERIOR_FILE_H_
#define GTC_POSTERIOR_FILE_H_

#include <iosfwd>

#include "gtc/emissions.h"
#include "gtc/matrix.h"

namespace gtc {

// Posterior files come in two encodings:
//
//   text:   "T V" header, then T rows of V whitespace-separated values
//           ("-inf" allowed).
//   binary: magic "GTCP", uint32 LE T, uint32 LE V, then T*V float64 LE
//           values, row-major.
//
// The reader sniffs the magic to pick the encoding. Throws FormatError.
Matrix read_posterior_matrix(std::istream &is);

// Reads and checks row normalization; with `normalize` the rows are
// passed through log-softmax instead.
EmissionMatrix load_posteriors(std::istream &is, bool normalize);

// `precision` is in significant digits; 17 round-trips a double exactly.
void write_posteriors_text(std::ostream &os, const Matrix &m, int precision = 17);
void write_posteriors_binary(std::ostream &os, const Matrix &m);

}  // namespace gtc

#endif  // GTC_POSTERIOR_FILE_H_
