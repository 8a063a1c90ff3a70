// gtc/synthlab.cc

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

#include "gtc/synthlab.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "gtc/graph_builder.h"
#include "gtc/loss.h"
#include "gtc/parallel.h"

namespace gtc::synth {

void SynthConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw ConfigError(what);
  };
  require(vocab_size >= 3, "vocab_size must be at least 3");
  require(num_words >= 1, "num_words must be at least 1");
  require(variants_per_word >= 1, "variants_per_word must be at least 1");
  require(min_word_length >= 1 && min_word_length <= max_word_length,
          "word length range is invalid");
  require(min_words_per_utterance >= 1 && min_words_per_utterance <= max_words_per_utterance,
          "words per utterance range is invalid");
  require(feature_dim >= 1, "feature_dim must be at least 1");
  require(min_frames_per_phoneme >= 1 && min_frames_per_phoneme <= max_frames_per_phoneme,
          "frames per phoneme range is invalid");
  require(std::isfinite(noise) && noise >= 0.0, "noise must be finite and non-negative");
  require(variant_prob >= 0.0 && variant_prob <= 1.0, "variant_prob must be in [0, 1]");
  require(train_utterances >= 1 && test_utterances >= 1, "corpus sizes must be at least 1");
}

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng &rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Phoneme in 1..num_phonemes that differs from every symbol in `avoid`,
// or the blank if none is left.
Symbol draw_phoneme(Rng &rng, std::size_t num_phonemes, std::vector<Symbol> avoid) {
  std::vector<Symbol> allowed;
  for (std::size_t p = 1; p <= num_phonemes; ++p)
    if (std::find(avoid.begin(), avoid.end(), static_cast<Symbol>(p)) == avoid.end())
      allowed.push_back(static_cast<Symbol>(p));
  if (allowed.empty()) return kBlank;
  return allowed[uniform(rng, 0, allowed.size() - 1)];
}

std::vector<LexiconVariant> make_word(Rng &rng, const SynthConfig &c) {
  const std::size_t num_phonemes = c.vocab_size - 1;
  Sequence canonical;
  const std::size_t len = uniform(rng, c.min_word_length, c.max_word_length);
  for (std::size_t i = 0; i < len; ++i)
    canonical.push_back(draw_phoneme(rng, num_phonemes, {i ? canonical.back() : kBlank}));

  std::vector<Sequence> variants{canonical};
  for (int attempt = 0; variants.size() < c.variants_per_word && attempt < 50; ++attempt) {
    Sequence v = canonical;
    const std::size_t pos = uniform(rng, 0, len - 1);
    const Symbol left = pos > 0 ? v[pos - 1] : kBlank;
    const Symbol right = pos + 1 < len ? v[pos + 1] : kBlank;
    const Symbol sub = draw_phoneme(rng, num_phonemes, {v[pos], left, right});
    if (sub == kBlank) continue;
    v[pos] = sub;
    if (std::find(variants.begin(), variants.end(), v) == variants.end())
      variants.push_back(std::move(v));
  }
  std::vector<LexiconVariant> out;
  for (auto &v : variants) out.push_back({Pronunciation(std::move(v)), std::nullopt});
  return out;
}

void emit_frames(Rng &rng, const Matrix &templates, std::size_t row, std::size_t count,
                 double noise, std::vector<std::vector<double>> &frames) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> f(templates.cols());
    for (std::size_t d = 0; d < f.size(); ++d) f[d] = templates(row, d) + noise * gauss(rng);
    frames.push_back(std::move(f));
  }
}

Utterance make_utterance(Rng &rng, const SynthConfig &c, const Lexicon &lexicon,
                         const std::vector<std::string> &words, const Matrix &templates,
                         std::string id) {
  Utterance u;
  u.id = std::move(id);
  std::bernoulli_distribution use_variant(c.variant_prob);
  std::vector<std::vector<double>> frames;
  const std::size_t n = uniform(rng, c.min_words_per_utterance, c.max_words_per_utterance);
  emit_frames(rng, templates, 0, uniform(rng, 0, c.max_silence_frames), c.noise, frames);
  for (std::size_t w = 0; w < n; ++w) {
    const auto &word = words[uniform(rng, 0, words.size() - 1)];
    const auto &variants = lexicon.variants(word);
    std::size_t pick = 0;
    if (variants.size() > 1 && use_variant(rng)) pick = uniform(rng, 1, variants.size() - 1);
    const auto &phonemes = variants[pick].pronunciation.phonemes();

    if (w > 0) {
      // A repeated phoneme across the boundary needs a pause to be
      // recoverable after collapse.
      const std::size_t min_pause = u.phonemes.back() == phonemes.front() ? 1 : 0;
      emit_frames(rng, templates, 0,
                  uniform(rng, min_pause, std::max(min_pause, c.max_silence_frames)), c.noise,
                  frames);
    }
    for (Symbol p : phonemes) {
      emit_frames(rng, templates, static_cast<std::size_t>(p),
                  uniform(rng, c.min_frames_per_phoneme, c.max_frames_per_phoneme), c.noise,
                  frames);
      u.phonemes.push_back(p);
    }
    u.words.push_back(word);
  }
  emit_frames(rng, templates, 0, uniform(rng, 0, c.max_silence_frames), c.noise, frames);

  u.frames = Matrix(frames.size(), c.feature_dim);
  for (std::size_t t = 0; t < frames.size(); ++t)
    std::copy(frames[t].begin(), frames[t].end(), u.frames.row(t).begin());
  return u;
}

}  // namespace

Corpus generate_corpus(const SynthConfig &config) {
  config.validate();
  Rng rng(config.seed);

  std::vector<std::string> phonemes;
  for (std::size_t k = 1; k < config.vocab_size; ++k) phonemes.push_back("p" + std::to_string(k));
  Vocabulary vocab = Vocabulary::from_phonemes(phonemes);

  // Row 0 is the silence template, row k the template of phoneme k.
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix templates(config.vocab_size, config.feature_dim);
  for (double &v : templates.data()) v = gauss(rng);

  Lexicon::Entries entries;
  std::vector<std::string> words;
  for (std::size_t w = 0; w < config.num_words; ++w) {
    char name[16];
    std::snprintf(name, sizeof(name), "w%03zu", w);
    words.emplace_back(name);
    entries.emplace(name, make_word(rng, config));
  }
  Corpus corpus{Lexicon(std::move(vocab), std::move(entries)), {}, {}};

  for (std::size_t i = 0; i < config.train_utterances; ++i)
    corpus.train.push_back(make_utterance(rng, config, corpus.lexicon, words, templates,
                                          "train" + std::to_string(i)));
  for (std::size_t i = 0; i < config.test_utterances; ++i)
    corpus.test.push_back(make_utterance(rng, config, corpus.lexicon, words, templates,
                                         "test" + std::to_string(i)));
  return corpus;
}

FrameModel::FrameModel(std::size_t num_symbols, std::size_t feature_dim, uint64_t seed,
                       double init_scale)
    : weights_(num_symbols, feature_dim), bias_(num_symbols, 0.0) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, init_scale);
  for (double &w : weights_.data()) w = gauss(rng);
}

EmissionMatrix FrameModel::emissions(const Matrix &frames) const {
  if (frames.cols() != feature_dim())
    throw std::invalid_argument("frame dimension does not match the model");
  Matrix logits(frames.rows(), num_symbols());
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    const auto x = frames.row(t);
    for (std::size_t k = 0; k < num_symbols(); ++k) {
      const auto w = weights_.row(k);
      logits(t, k) = std::inner_product(w.begin(), w.end(), x.begin(), bias_[k]);
    }
  }
  return EmissionMatrix::log_softmax(logits);
}

void FrameModel::apply(const Matrix &grad_weights, const std::vector<double> &grad_bias,
                       double learning_rate) {
  auto w = weights_.data();
  const auto gw = grad_weights.data();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gw[i];
  for (std::size_t k = 0; k < bias_.size(); ++k) bias_[k] -= learning_rate * grad_bias[k];
  ++steps_;
}

namespace {

struct UtteranceGrad {
  Matrix weights;
  std::vector<double> bias;
  double loss = 0.0;
};

LabelGraph training_graph(const Lexicon &lexicon, const Utterance &u, const TrainOptions &o) {
  if (o.mode == LossMode::kCtcOneBest) {
    Sequence target;
    for (const auto &w : u.words) {
      const auto &first = lexicon.variants(w).front().pronunciation.phonemes();
      target.insert(target.end(), first.begin(), first.end());
    }
    return build_ctc_graph(Pronunciation(std::move(target)));
  }
  return words_to_graph(lexicon, u.words, o.n);
}

}  // namespace

FrameModel train(FrameModel model, const Corpus &corpus, const TrainOptions &options,
                 TrainReport *report) {
  if (corpus.train.empty()) throw ConfigError("training corpus is empty");
  if (options.batch_size == 0) throw ConfigError("batch_size must be positive");
  const auto &utts = corpus.train;

  std::vector<LabelGraph> graphs;
  std::vector<bool> feasible;
  for (const auto &u : utts) {
    graphs.push_back(training_graph(corpus.lexicon, u, options));
    feasible.push_back(min_alignment_length(graphs.back()) <= u.frames.rows());
  }

  TrainReport local;
  TrainReport &rep = report ? *report : local;
  const std::size_t vocab = model.num_symbols(), dim = model.feature_dim();

  std::vector<std::size_t> order(utts.size());
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(options.shuffle_seed + epoch);
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t begin = 0; begin < order.size(); begin += options.batch_size) {
      const std::size_t end = std::min(order.size(), begin + options.batch_size);
      std::vector<UtteranceGrad> grads(end - begin);
      parallel_for(end - begin, options.jobs, [&](std::size_t i) {
        const std::size_t idx = order[begin + i];
        if (!feasible[idx]) return;
        const auto &x = utts[idx].frames;
        const EmissionMatrix em = model.emissions(x);
        const LossResult res = gtc_loss(graphs[idx], em);
        if (!std::isfinite(res.loss))
          throw DivergenceError("non-finite loss on feasible utterance " + utts[idx].id);
        auto &g = grads[i];
        g.loss = res.loss;
        g.weights = Matrix(vocab, dim);
        g.bias.assign(vocab, 0.0);
        for (std::size_t t = 0; t < x.rows(); ++t) {
          double grad_sum = 0.0;
          for (std::size_t k = 0; k < vocab; ++k) grad_sum += res.grad(t, k);
          for (std::size_t k = 0; k < vocab; ++k) {
            // Chain rule through log-softmax.
            const double gz = res.grad(t, k) - std::exp(em(t, k)) * grad_sum;
            g.bias[k] += gz;
            auto row = g.weights.row(k);
            const auto xt = x.row(t);
            for (std::size_t d = 0; d < dim; ++d) row[d] += gz * xt[d];
          }
        }
      });

      Matrix gw(vocab, dim);
      std::vector<double> gb(vocab, 0.0);
      double loss_sum = 0.0;
      std::size_t used = 0;
      for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!feasible[order[begin + i]]) {
          ++rep.skipped;
          continue;
        }
        ++used;
        loss_sum += grads[i].loss;
        auto dst = gw.data();
        const auto src = grads[i].weights.data();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
        for (std::size_t k = 0; k < vocab; ++k) gb[k] += grads[i].bias[k];
      }
      if (used == 0) continue;
      const double scale = 1.0 / static_cast<double>(used);
      for (double &v : gw.data()) v *= scale;
      for (double &v : gb) v *= scale;
      model.apply(gw, gb, options.learning_rate);
      rep.step_losses.push_back(loss_sum * scale);

      for (double v : model.weights().data())
        if (!std::isfinite(v)) throw DivergenceError("model weights became non-finite");
    }
  }
  return model;
}

ErrorRate evaluate(const FrameModel &model, const std::vector<Utterance> &utterances) {
  std::vector<std::pair<Sequence, Sequence>> pairs;
  for (const auto &u : utterances)
    pairs.emplace_back(u.phonemes, greedy_decode(model.emissions(u.frames)));
  return error_rate(pairs);
}

std::vector<ExperimentResult> run_experiment(const SynthConfig &config,
                                             const ExperimentSettings &settings) {
  // One slot per (seed, mode); runs are independent, so they can go in parallel.
  std::vector<ExperimentResult> results;
  for (uint64_t seed : settings.seeds) {
    results.push_back({"ctc", NBest(1), seed, 0.0});
    for (const auto &n : settings.gtc_n) results.push_back({"gtc", n, seed, 0.0});
  }
  std::vector<Corpus> corpora;
  for (uint64_t seed : settings.seeds) {
    SynthConfig c = config;
    c.seed = seed;
    corpora.push_back(generate_corpus(c));
  }

  const std::size_t per_seed = 1 + settings.gtc_n.size();
  parallel_for(results.size(), settings.jobs, [&](std::size_t i) {
    auto &r = results[i];
    const Corpus &corpus = corpora[i / per_seed];
    const FrameModel init(config.vocab_size, config.feature_dim, r.seed * 7919 + 17);
    TrainOptions o;
    o.mode = r.mode == "ctc" ? LossMode::kCtcOneBest : LossMode::kGtcNBest;
    o.n = r.n;
    o.epochs = settings.epochs;
    o.learning_rate = settings.learning_rate;
    o.batch_size = settings.batch_size;
    o.shuffle_seed = r.seed;
    r.per = evaluate(train(init, corpus, o), corpus.test).percent;
  });
  return results;
}

std::string format_result(const ExperimentResult &r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "mode=%s n=%s seed=%llu per=%.1f", r.mode.c_str(),
                r.n.to_string().c_str(), static_cast<unsigned long long>(r.seed), r.per);
  return buf;
}

void write_frames(std::ostream &os, const std::vector<Utterance> &utterances) {
  char buf[64];
  for (const auto &u : utterances) {
    os << u.id << ' ' << u.frames.rows() << ' ' << u.frames.cols() << '\n';
    for (std::size_t t = 0; t < u.frames.rows(); ++t) {
      for (std::size_t d = 0; d < u.frames.cols(); ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g", u.frames(t, d));
        os << (d ? " " : "") << buf;
      }
      os << '\n';
    }
  }
}

void read_frames(std::istream &is, std::vector<Utterance> &utterances) {
  std::map<std::string, Utterance *> by_id;
  for (auto &u : utterances) by_id[u.id] = &u;
  std::string id;
  while (is >> id) {
    std::size_t rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows == 0 || cols == 0)
      throw FormatError("bad frames header for '" + id + "'");
    auto it = by_id.find(id);
    if (it == by_id.end()) throw FormatError("frames for unknown utterance '" + id + "'");
    Matrix m(rows, cols);
    for (double &v : m.data()) {
      std::string tok;
      if (!(is >> tok)) throw FormatError("truncated frames for '" + id + "'");
      char *end = nullptr;
      v = std::strtod(tok.c_str(), &end);
      if (*end != '\0') throw FormatError("malformed frame value '" + tok + "'");
    }
    it->second->frames = std::move(m);
  }
  for (const auto &u : utterances)
    if (u.frames.empty()) throw FormatError("no frames for utterance '" + u.id + "'");
}

namespace {

std::ofstream open_out(const std::filesystem::path &p) {
  std::ofstream os(p);
  if (!os) throw FormatError("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path &p) {
  std::ifstream is(p);
  if (!is) throw FormatError("cannot read " + p.string());
  return is;
}

std::vector<Transcript> to_transcripts(const std::vector<Utterance> &utts) {
  std::vector<Transcript> out;
  for (const auto &u : utts) out.push_back({u.words, u.phonemes});
  return out;
}

std::vector<Utterance> from_transcripts(std::vector<Transcript> trs, const std::string &prefix) {
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < trs.size(); ++i)
    out.push_back({prefix + std::to_string(i), std::move(trs[i].words), std::move(trs[i].ref), {}});
  return out;
}

}  // namespace

void write_corpus(const std::string &dir, const Corpus &corpus) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  {
    auto os = open_out(root / "symbols.txt");
    for (const auto &s : corpus.lexicon.vocabulary().symbols()) os << s << '\n';
  }
  auto lex = open_out(root / "lexicon.tsv");
  write_lexicon(lex, corpus.lexicon);
  const auto &vocab = corpus.lexicon.vocabulary();
  for (const auto &[name, utts] : {std::pair{"train", &corpus.train}, std::pair{"test", &corpus.test}}) {
    auto tr = open_out(root / (std::string(name) + ".trans"));
    write_transcripts(tr, to_transcripts(*utts), vocab);
    auto fr = open_out(root / (std::string(name) + ".frames"));
    write_frames(fr, *utts);
  }
}

Corpus read_corpus(const std::string &dir) {
  const std::filesystem::path root(dir);
  std::vector<std::string> symbols;
  {
    auto is = open_in(root / "symbols.txt");
    for (std::string s; std::getline(is, s);)
      if (!s.empty()) symbols.push_back(s);
  }
  const Vocabulary vocab = Vocabulary::from_symbols(symbols);
  auto lex_in = open_in(root / "lexicon.tsv");
  Corpus corpus{parse_lexicon(lex_in, vocab), {}, {}};
  for (const auto &[name, utts] : {std::pair{"train", &corpus.train}, std::pair{"test", &corpus.test}}) {
    auto tr = open_in(root / (std::string(name) + ".trans"));
    *utts = from_transcripts(parse_transcripts(tr, vocab), name);
    auto fr = open_in(root / (std::string(name) + ".frames"));
    read_frames(fr, *utts);
  }
  return corpus;
}

}  // namespace gtc::synth
