// gtc/synthlab.h

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

#ifndef GTC_SYNTHLAB_H_
#define GTC_SYNTHLAB_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gtc/emissions.h"
#include "gtc/lexicon.h"
#include "gtc/matrix.h"
#include "gtc/metrics.h"

namespace gtc::synth {

// Synthetic corpus with pronunciation variation. Each word has a canonical
// pronunciation (listed first in the lexicon) and variants that differ by
// one substituted phoneme. Utterances pick a non-first variant per word
// with probability `variant_prob`.
struct SynthConfig {
  std::size_t vocab_size = 9;  // blank included
  std::size_t num_words = 24;
  std::size_t variants_per_word = 3;
  std::size_t min_word_length = 2;
  std::size_t max_word_length = 4;
  std::size_t min_words_per_utterance = 2;
  std::size_t max_words_per_utterance = 4;
  std::size_t feature_dim = 8;
  std::size_t min_frames_per_phoneme = 2;
  std::size_t max_frames_per_phoneme = 4;
  std::size_t max_silence_frames = 2;  // between words and at the edges
  double noise = 0.7;
  double variant_prob = 0.5;
  std::size_t train_utterances = 200;
  std::size_t test_utterances = 100;
  uint64_t seed = 1;

  // Throws ConfigError.
  void validate() const;
};

struct Utterance {
  std::string id;
  std::vector<std::string> words;
  Sequence phonemes;  // what was actually "spoken"
  Matrix frames;      // T x D features
};

struct Corpus {
  Lexicon lexicon;
  std::vector<Utterance> train;
  std::vector<Utterance> test;
};

Corpus generate_corpus(const SynthConfig &config);

// Linear frame classifier: log-softmax(W x + b).
class FrameModel {
 public:
  FrameModel(std::size_t num_symbols, std::size_t feature_dim, uint64_t seed,
             double init_scale = 0.1);

  EmissionMatrix emissions(const Matrix &frames) const;

  std::size_t num_symbols() const { return weights_.rows(); }
  std::size_t feature_dim() const { return weights_.cols(); }
  const Matrix &weights() const { return weights_; }
  const std::vector<double> &bias() const { return bias_; }
  std::size_t steps() const { return steps_; }

  // Gradient step: params -= learning_rate * grad.
  void apply(const Matrix &grad_weights, const std::vector<double> &grad_bias,
             double learning_rate);

  bool operator==(const FrameModel &) const = default;

 private:
  Matrix weights_;
  std::vector<double> bias_;
  std::size_t steps_ = 0;
};

enum class LossMode { kCtcOneBest, kGtcNBest };

struct TrainOptions {
  LossMode mode = LossMode::kGtcNBest;
  NBest n = NBest::all();  // ignored for kCtcOneBest
  std::size_t epochs = 30;
  double learning_rate = 0.5;
  std::size_t batch_size = 8;
  uint64_t shuffle_seed = 1;
  std::size_t jobs = 1;
};

struct TrainReport {
  std::vector<double> step_losses;  // mean utterance loss per step
  std::size_t skipped = 0;          // infeasible utterance visits
};

// Mini-batch gradient descent. Throws DivergenceError if a feasible
// utterance yields a non-finite loss or parameters stop being finite.
FrameModel train(FrameModel model, const Corpus &corpus, const TrainOptions &options,
                 TrainReport *report = nullptr);

// Greedy decoding against the true phonemes, pooled PER.
ErrorRate evaluate(const FrameModel &model, const std::vector<Utterance> &utterances);

struct ExperimentSettings {
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<NBest> gtc_n = {NBest::all()};
  std::size_t epochs = 30;
  double learning_rate = 0.5;
  std::size_t batch_size = 8;
  std::size_t jobs = 1;
};

struct ExperimentResult {
  std::string mode;  // "ctc" or "gtc"
  NBest n;
  uint64_t seed;
  double per;
};

// For each seed: generate a corpus (config.seed replaced by the seed),
// train CTC on 1-best and GTC for each n from the same initial model,
// and score the test set.
std::vector<ExperimentResult> run_experiment(const SynthConfig &config,
                                             const ExperimentSettings &settings);

// `mode=<m> n=<k> seed=<s> per=<x.x>`
std::string format_result(const ExperimentResult &r);

// Frames file: per utterance a line `id T D`, then T rows of D values.
void write_frames(std::ostream &os, const std::vector<Utterance> &utterances);
// Fills frames for utterances matched by id. Throws FormatError.
void read_frames(std::istream &is, std::vector<Utterance> &utterances);

// Writes lexicon.tsv, {train,test}.trans and {train,test}.frames.
void write_corpus(const std::string &dir, const Corpus &corpus);
Corpus read_corpus(const std::string &dir);

}  // namespace gtc::synth

#endif  // GTC_SYNTHLAB_H_
