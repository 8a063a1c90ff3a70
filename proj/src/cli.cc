// gtc/cli.cc

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

#include "gtc/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gtc/graph_builder.h"
#include "gtc/lexicon.h"
#include "gtc/loss.h"
#include "gtc/metrics.h"
#include "gtc/posterior_file.h"
#include "gtc/synthlab.h"
#include "json.hpp"

namespace gtc::cli {

namespace {

// Input problems that map to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

std::ifstream open_input(const std::string &path, const char *what) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError(std::string("cannot open ") + what + " file '" + path + "'");
  return is;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write '" + path + "'");
  return os;
}

Vocabulary read_symbols(const std::string &path) {
  auto is = open_input(path, "symbols");
  std::vector<std::string> symbols;
  for (std::string line; std::getline(is, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) symbols.push_back(line);
  }
  try {
    return Vocabulary::from_symbols(symbols);
  } catch (const std::invalid_argument &e) {
    throw InputError(path + ": " + e.what());
  }
}

Lexicon read_lexicon(const std::string &path, const std::string &symbols_path) {
  auto is = open_input(path, "lexicon");
  try {
    if (!symbols_path.empty()) return parse_lexicon(is, read_symbols(symbols_path));
    return parse_lexicon(is);
  } catch (const ParseError &e) {
    throw InputError(path + ": " + e.what());
  }
}

NBest parse_n(const std::string &text) {
  try {
    return NBest::parse(text);
  } catch (const std::invalid_argument &e) {
    throw InputError(e.what());
  }
}

std::string format_loss(double loss, int precision) {
  if (std::isinf(loss)) return "loss=inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "loss=%.*f", precision, loss);
  return buf;
}

struct GraphArgs {
  std::string lexicon, symbols, n = "all", dot, dump;
  std::vector<std::string> words;
};

int cmd_graph(const GraphArgs &a, std::ostream &out) {
  const Lexicon lex = read_lexicon(a.lexicon, a.symbols);
  const LabelGraph graph = words_to_graph(lex, a.words, parse_n(a.n));
  if (!a.dot.empty()) {
    auto os = open_output(a.dot);
    write_dot(os, graph, lex.vocabulary());
  }
  if (!a.dump.empty()) {
    auto os = open_output(a.dump);
    write_text(os, graph, lex.vocabulary());
  }
  out << "nodes=" << graph.num_nodes() << " arcs=" << graph.num_arcs() << '\n';
  constexpr std::size_t kCountLimit = 1000;
  try {
    out << "sequences=" << enumerate_collapsed(graph, kCountLimit).size() << '\n';
  } catch (const LimitExceeded &) {
    out << "sequences>" << kCountLimit << '\n';
  }
  return kOk;
}

struct LossArgs {
  std::string lexicon, symbols, posteriors, n = "all", grad, mode = "gtc";
  std::vector<std::string> words;
  int precision = 6;
  bool normalize = false;
};

int cmd_loss(const LossArgs &a, std::ostream &out) {
  const Lexicon lex = read_lexicon(a.lexicon, a.symbols);
  auto pin = open_input(a.posteriors, "posterior");
  const EmissionMatrix em = [&] {
    try {
      return load_posteriors(pin, a.normalize);
    } catch (const FormatError &e) {
      throw InputError(a.posteriors + ": " + e.what());
    }
  }();
  if (em.num_symbols() != lex.vocabulary().size())
    throw InputError("posterior file has " + std::to_string(em.num_symbols()) +
                     " symbols but the vocabulary has " +
                     std::to_string(lex.vocabulary().size()));

  const auto alternatives = select_alternatives(lex, a.words, parse_n(a.n));
  std::optional<LossResult> result;
  double loss = 0.0;
  if (a.mode == "gtc") {
    result = gtc_loss(build_gtc_graph(alternatives), em);
    loss = result->loss;
  } else if (a.mode == "ctc-ref") {
    Sequence target;
    for (const auto &w : alternatives) {
      if (w.variants().size() != 1)
        throw InputError("ctc-ref needs exactly one pronunciation per word (try --n 1)");
      const auto &p = w.variants().front().phonemes();
      target.insert(target.end(), p.begin(), p.end());
    }
    result = ctc_loss_reference(target, em);
    loss = result->loss;
  } else {
    if (!a.grad.empty()) throw InputError("brute mode does not produce gradients");
    try {
      loss = brute_force_loss(build_gtc_graph(alternatives), em);
    } catch (const TooLarge &e) {
      throw InputError(e.what());
    }
  }
  if (result && !a.grad.empty()) {
    auto os = open_output(a.grad);
    write_posteriors_text(os, result->grad);
  }
  out << format_loss(loss, a.precision) << '\n';
  return std::isinf(loss) ? kInfeasible : kOk;
}

struct OracleArgs {
  std::string lexicon, symbols, transcripts;
  std::vector<std::string> n{"1", "2", "3", "all"};
  std::size_t jobs = 1;
};

int cmd_oracle_ler(const OracleArgs &a, std::ostream &out) {
  const Lexicon lex = read_lexicon(a.lexicon, a.symbols);
  auto is = open_input(a.transcripts, "transcripts");
  std::vector<Transcript> transcripts;
  try {
    transcripts = parse_transcripts(is, lex.vocabulary());
  } catch (const ParseError &e) {
    throw InputError(a.transcripts + ": " + e.what());
  }
  std::vector<NBest> ns;
  for (const auto &n : a.n) ns.push_back(parse_n(n));
  for (const auto &n : ns) out << format_report(n, oracle_ler(lex, transcripts, n, a.jobs)) << '\n';
  return kOk;
}

struct DecodeArgs {
  std::string posteriors, symbols, lexicon;
  bool normalize = false;
};

int cmd_decode(const DecodeArgs &a, std::ostream &out) {
  std::optional<Vocabulary> vocab;
  if (!a.symbols.empty()) vocab = read_symbols(a.symbols);
  else if (!a.lexicon.empty()) vocab = read_lexicon(a.lexicon, "").vocabulary();

  auto is = open_input(a.posteriors, "posterior");
  const EmissionMatrix em = [&] {
    try {
      return load_posteriors(is, a.normalize);
    } catch (const FormatError &e) {
      throw InputError(a.posteriors + ": " + e.what());
    }
  }();
  if (vocab && em.num_symbols() != vocab->size())
    throw InputError("posterior file has " + std::to_string(em.num_symbols()) +
                     " symbols but the vocabulary has " + std::to_string(vocab->size()));

  const Sequence best = greedy_decode(em);
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (i) out << ' ';
    if (vocab) out << vocab->symbol(best[i]);
    else out << best[i];
  }
  out << '\n';
  return kOk;
}

struct TrainArgs {
  std::string config, out;
  std::optional<double> variant_prob, lr, noise;
  std::optional<std::size_t> epochs, batch_size;
  std::vector<uint64_t> seeds;
  std::vector<std::string> n;
  std::size_t jobs = 1;
};

void apply_json(const nlohmann::json &j, synth::SynthConfig &c, synth::ExperimentSettings &s) {
  static const std::vector<std::string> kKnown = {
      "vocab_size", "num_words", "variants_per_word", "min_word_length", "max_word_length",
      "min_words_per_utterance", "max_words_per_utterance", "feature_dim",
      "min_frames_per_phoneme", "max_frames_per_phoneme", "max_silence_frames", "noise",
      "variant_prob", "train_utterances", "test_utterances", "seeds", "n", "epochs",
      "learning_rate", "batch_size"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto &[key, value] : j.items())
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end())
      throw ConfigError("unknown config key '" + key + "'");
  auto get = [&](const char *key, auto &field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("vocab_size", c.vocab_size);
  get("num_words", c.num_words);
  get("variants_per_word", c.variants_per_word);
  get("min_word_length", c.min_word_length);
  get("max_word_length", c.max_word_length);
  get("min_words_per_utterance", c.min_words_per_utterance);
  get("max_words_per_utterance", c.max_words_per_utterance);
  get("feature_dim", c.feature_dim);
  get("min_frames_per_phoneme", c.min_frames_per_phoneme);
  get("max_frames_per_phoneme", c.max_frames_per_phoneme);
  get("max_silence_frames", c.max_silence_frames);
  get("noise", c.noise);
  get("variant_prob", c.variant_prob);
  get("train_utterances", c.train_utterances);
  get("test_utterances", c.test_utterances);
  get("seeds", s.seeds);
  get("epochs", s.epochs);
  get("learning_rate", s.learning_rate);
  get("batch_size", s.batch_size);
  if (j.contains("n")) {
    s.gtc_n.clear();
    for (const auto &v : j.at("n"))
      s.gtc_n.push_back(v.is_string() ? NBest::parse(v.get<std::string>())
                                      : NBest(v.get<std::size_t>()));
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_train_toy(const TrainArgs &a, std::ostream &out) {
  synth::SynthConfig config;
  synth::ExperimentSettings settings;
  try {
    if (!a.config.empty()) {
      auto is = open_input(a.config, "config");
      apply_json(nlohmann::json::parse(is), config, settings);
    }
    if (a.variant_prob) config.variant_prob = *a.variant_prob;
    if (a.noise) config.noise = *a.noise;
    if (a.lr) settings.learning_rate = *a.lr;
    if (a.epochs) settings.epochs = *a.epochs;
    if (a.batch_size) settings.batch_size = *a.batch_size;
    if (!a.seeds.empty()) settings.seeds = a.seeds;
    if (!a.n.empty()) {
      settings.gtc_n.clear();
      for (const auto &n : a.n) settings.gtc_n.push_back(NBest::parse(n));
    }
    settings.jobs = a.jobs;
    config.validate();
    if (settings.seeds.empty()) throw ConfigError("at least one seed is required");
    if (settings.batch_size == 0) throw ConfigError("batch_size must be positive");
    if (!(settings.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }

  const auto results = synth::run_experiment(config, settings);
  std::ostringstream lines;
  for (const auto &r : results) lines << synth::format_result(r) << '\n';
  if (a.out.empty()) {
    out << lines.str();
  } else {
    auto os = open_output(a.out);
    os << lines.str();
  }

  // Median PER per configuration, in first-seen order.
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (const auto &r : results) {
    const std::string key = r.mode + " " + r.n.to_string();
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto &p) { return p.first == key; });
    if (it == rows.end()) rows.emplace_back(key, std::vector<double>{r.per});
    else it->second.push_back(r.per);
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%-6s %-5s %10s  (variant_prob=%.2f, %zu seeds)\n", "mode", "n",
                "median_per", config.variant_prob, settings.seeds.size());
  out << buf;
  for (const auto &[key, pers] : rows) {
    const auto space = key.find(' ');
    std::snprintf(buf, sizeof(buf), "%-6s %-5s %9.1f%%\n", key.substr(0, space).c_str(),
                  key.substr(space + 1).c_str(), median(pers));
    out << buf;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Graph temporal classification toolkit", "gtc"};
  app.require_subcommand(1);

  GraphArgs graph;
  auto *g = app.add_subcommand("graph", "Build the label graph for a word sequence");
  g->add_option("lexicon", graph.lexicon, "Lexicon TSV")->required();
  g->add_option("words", graph.words, "Word sequence")->required();
  g->add_option("--n", graph.n, "Variants per word: a count or 'all'");
  g->add_option("--dot", graph.dot, "Write Graphviz DOT here");
  g->add_option("--dump", graph.dump, "Write the text dump here");
  g->add_option("--symbols", graph.symbols, "Symbol table, one per line, blank first");

  LossArgs loss;
  auto *l = app.add_subcommand("loss", "Compute the loss of a word sequence");
  l->add_option("lexicon", loss.lexicon, "Lexicon TSV")->required();
  l->add_option("posteriors", loss.posteriors, "Posterior file (text or binary)")->required();
  l->add_option("words", loss.words, "Word sequence")->required();
  l->add_option("--n", loss.n, "Variants per word: a count or 'all'");
  l->add_option("--grad", loss.grad, "Write the gradient here (text posterior format)");
  l->add_option("--mode", loss.mode, "gtc, ctc-ref or brute")
      ->check(CLI::IsMember({"gtc", "ctc-ref", "brute"}));
  l->add_option("--precision", loss.precision, "Decimals printed")->check(CLI::Range(0, 17));
  l->add_flag("--normalize", loss.normalize, "Log-softmax rows instead of rejecting them");
  l->add_option("--symbols", loss.symbols, "Symbol table, one per line, blank first");

  OracleArgs oracle;
  auto *o = app.add_subcommand("oracle-ler", "Oracle label error rate per n");
  o->add_option("lexicon", oracle.lexicon, "Lexicon TSV")->required();
  o->add_option("transcripts", oracle.transcripts, "words<TAB>ref phonemes per line")->required();
  o->add_option("--n", oracle.n, "Comma-separated n values")->delimiter(',');
  o->add_option("--jobs", oracle.jobs, "Worker threads")->check(CLI::PositiveNumber);
  o->add_option("--symbols", oracle.symbols, "Symbol table, one per line, blank first");

  DecodeArgs decode;
  auto *d = app.add_subcommand("decode", "Greedy best-path decoding");
  d->add_option("posteriors", decode.posteriors, "Posterior file (text or binary)")->required();
  d->add_option("--symbols", decode.symbols, "Symbol table, one per line, blank first");
  d->add_option("--lexicon", decode.lexicon, "Take the symbol table from a lexicon");
  d->add_flag("--normalize", decode.normalize, "Log-softmax rows instead of rejecting them");

  TrainArgs train;
  auto *t = app.add_subcommand("train-toy", "Synthetic CTC vs GTC experiment");
  t->add_option("--config", train.config, "JSON config");
  t->add_option("--out", train.out, "Results file");
  t->add_option("--variant-prob", train.variant_prob, "Probability of a non-first variant");
  t->add_option("--noise", train.noise, "Feature noise scale");
  t->add_option("--epochs", train.epochs, "Training epochs");
  t->add_option("--lr", train.lr, "Learning rate");
  t->add_option("--batch-size", train.batch_size, "Utterances per step");
  t->add_option("--seeds", train.seeds, "Comma-separated seeds")->delimiter(',');
  t->add_option("--n", train.n, "Comma-separated GTC n values")->delimiter(',');
  t->add_option("--jobs", train.jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "gtc: " << e.what() << '\n';
    return kInputError;
  }
  try {
    if (g->parsed()) return cmd_graph(graph, out);
    if (l->parsed()) return cmd_loss(loss, out);
    if (o->parsed()) return cmd_oracle_ler(oracle, out);
    if (d->parsed()) return cmd_decode(decode, out);
    if (t->parsed()) return cmd_train_toy(train, out);
  } catch (const Error &e) {
    err << "gtc: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception &e) {
    err << "gtc: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace gtc::cli
