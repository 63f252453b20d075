// Copyright 2026 The mgram Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver for the mgram pipeline. Every stage goes through the
// C API.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mgram/c_api.h"

namespace fs = std::filesystem;

namespace {

struct StageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(mg_status status) {
  if (status != MG_OK) throw StageError(mg_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Corpus = Handle<mg_corpus, mg_corpus_free>;
using Charset = Handle<mg_charset, mg_charset_free>;
using Multigram = Handle<mg_multigram, mg_multigram_free>;
using Tokens = Handle<mg_tokens, mg_tokens_free>;
using Lm = Handle<mg_lm, mg_lm_free>;
using Graph = Handle<mg_graph, mg_graph_free>;
using Lattice = Handle<mg_lattice, mg_lattice_free>;
using EvalSet = Handle<mg_eval_set, mg_eval_set_free>;
using Report = Handle<mg_report, mg_report_free>;
using Hypotheses = Handle<mg_hypotheses, mg_hypotheses_free>;

std::string TakeString(char* s) {
  std::string out = s ? s : "";
  mg_string_free(s);
  return out;
}

// "fr=path" or plain "path" (tag from the first dot-separated part of the
// file name).
std::pair<std::string, std::string> SplitTagged(const std::string& spec) {
  const size_t eq = spec.find('=');
  if (eq != std::string::npos) return {spec.substr(0, eq), spec.substr(eq + 1)};
  std::string stem = fs::path(spec).filename().string();
  return {stem.substr(0, stem.find('.')), spec};
}

void EnsureFile(const std::string& path) {
  if (!fs::is_regular_file(path)) throw StageError("no such file: " + path);
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StageError("cannot create directory " + dir.string());
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StageError("cannot write " + path);
  out << text;
}

std::vector<double> ParseGrid(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw StageError("bad grid value '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw StageError("empty grid");
  return values;
}

template <typename Fn>
void ParallelFor(size_t n, int jobs, Fn fn) {
  const size_t workers = std::max<size_t>(
      1, std::min<size_t>(static_cast<size_t>(std::max(jobs, 1)), n));
  std::vector<std::string> errors(workers);
  std::vector<std::thread> threads;
  for (size_t k = 0; k < workers; ++k) {
    threads.emplace_back([&, k] {
      try {
        for (size_t i = k; i < n; i += workers) fn(i);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw StageError(e);
  }
}

Charset LoadCharset(const std::string& path) {
  EnsureFile(path);
  mg_charset* cs = nullptr;
  Check(mg_charset_read(path.c_str(), &cs));
  return Charset(cs);
}

Graph LoadGraph(const std::string& dir) {
  mg_graph* g = nullptr;
  Check(mg_graph_read(dir.c_str(), &g));
  return Graph(g);
}

EvalSet LoadEvalSet(const std::string& manifest, const mg_graph* graph) {
  EnsureFile(manifest);
  mg_eval_set* set = nullptr;
  Check(mg_eval_set_load(manifest.c_str(), graph, &set));
  return EvalSet(set);
}

struct DecodeFlags {
  double gamma = 1.0;
  double beta = 1.0;
  double beam = 12.0;
  size_t n_best = 1;

  void Register(CLI::App* cmd) {
    cmd->add_option("--gamma", gamma, "LM scale")->capture_default_str();
    cmd->add_option("--beta", beta, "word insertion factor")
        ->capture_default_str();
    cmd->add_option("--beam", beam, "pruning margin in -ln units")
        ->capture_default_str();
  }

  mg_decode_config Config() const {
    mg_decode_config c;
    mg_decode_config_default(&c);
    c.gamma = gamma;
    c.beta = beta;
    c.beam = beam;
    c.n_best = n_best;
    return c;
  }
};

// ---- commands ----

struct PrepareArgs {
  std::vector<std::string> inputs;
  std::string out;
};

void RunPrepare(const PrepareArgs& a) {
  EnsureDir(a.out);
  Corpus all;
  for (const std::string& spec : a.inputs) {
    const auto [tag, path] = SplitTagged(spec);
    EnsureFile(path);
    mg_corpus* c = nullptr;
    Check(mg_corpus_load(path.c_str(), tag.c_str(), &c));
    Corpus corpus(c);
    const std::string dst = (fs::path(a.out) / (tag + ".txt")).string();
    Check(mg_corpus_write(corpus.get(), dst.c_str()));
    fmt::print("{}: {} lines -> {}\n", tag, mg_corpus_size(corpus.get()), dst);
    if (!all) {
      all = std::move(corpus);
    } else {
      Check(mg_corpus_append(all.get(), corpus.get()));
    }
  }
  mg_charset* cs = nullptr;
  Check(mg_charset_from_corpus(all.get(), &cs));
  Charset charset(cs);
  const std::string chars = (fs::path(a.out) / "chars.tsv").string();
  Check(mg_charset_write(charset.get(), chars.c_str()));
  Check(mg_charset_write_labels(charset.get(),
                                (fs::path(a.out) / "labels.tsv").string().c_str()));
  fmt::print("{} characters -> {}\n", mg_charset_size(charset.get()), chars);
}

struct TrainMultigramArgs {
  std::string corpus;
  std::string lang;
  std::string out;
  int dmax = 2;
  int max_iters = 50;
  double tol = 1e-6;
  double prune = 0.0;
  int jobs = 1;
};

void RunTrainMultigrams(const TrainMultigramArgs& a) {
  EnsureFile(a.corpus);
  const std::string lang = a.lang.empty() ? SplitTagged(a.corpus).first : a.lang;
  mg_corpus* c = nullptr;
  Check(mg_corpus_load(a.corpus.c_str(), lang.c_str(), &c));
  Corpus corpus(c);
  mg_em_options opts;
  mg_em_options_default(&opts);
  opts.max_iters = a.max_iters;
  opts.rel_tol = a.tol;
  opts.jobs = a.jobs;
  mg_multigram* m = nullptr;
  Check(mg_multigram_train(corpus.get(), a.dmax, lang.c_str(), &opts, &m));
  Multigram model(m);
  if (a.prune > 0.0) Check(mg_multigram_prune(model.get(), a.prune));
  Check(mg_multigram_write(model.get(), a.out.c_str()));
  const size_t n = mg_multigram_history_size(model.get());
  fmt::print("{} units, {} EM iterations, log-likelihood {:.4f} -> {:.4f}\n",
             mg_multigram_size(model.get()), n > 0 ? n - 1 : 0,
             n > 0 ? mg_multigram_history(model.get(), 0) : 0.0,
             n > 0 ? mg_multigram_history(model.get(), n - 1) : 0.0);
}

struct TokenizeArgs {
  std::vector<std::string> corpora;
  std::vector<std::string> models;
  std::string type = "multigram";
  std::string out;
  std::string lexicon_out;
};

void RunTokenize(const TokenizeArgs& a) {
  Corpus all;
  for (const std::string& spec : a.corpora) {
    const auto [tag, path] = SplitTagged(spec);
    EnsureFile(path);
    mg_corpus* c = nullptr;
    Check(mg_corpus_load(path.c_str(), tag.c_str(), &c));
    Corpus corpus(c);
    if (!all) {
      all = std::move(corpus);
    } else {
      Check(mg_corpus_append(all.get(), corpus.get()));
    }
  }
  mg_lexicon_type type;
  if (a.type == "word") {
    type = MG_LEXICON_WORD;
  } else if (a.type == "char") {
    type = MG_LEXICON_CHARACTER;
  } else if (a.type == "multigram") {
    type = MG_LEXICON_MULTIGRAM;
  } else {
    throw StageError("unknown lexicon type '" + a.type + "'");
  }
  std::vector<Multigram> models;
  std::vector<const mg_multigram*> raw;
  for (const std::string& path : a.models) {
    EnsureFile(path);
    mg_multigram* m = nullptr;
    Check(mg_multigram_read(path.c_str(), &m));
    models.emplace_back(m);
    raw.push_back(m);
  }
  mg_tokens* t = nullptr;
  Check(mg_tokenize(all.get(), type, raw.data(), raw.size(), &t));
  Tokens tokens(t);
  Check(mg_tokens_write(tokens.get(), a.out.c_str()));
  if (!a.lexicon_out.empty()) {
    Check(mg_tokens_write_lexicon(tokens.get(), a.lexicon_out.c_str()));
  }
  fmt::print("{} lines, lexicon of {} units\n", mg_tokens_size(tokens.get()),
             mg_tokens_lexicon_size(tokens.get()));
}

struct TrainLmArgs {
  std::string tokens;
  std::string lexicon;
  std::string out;
  int order = 3;
};

void RunTrainLm(const TrainLmArgs& a) {
  EnsureFile(a.tokens);
  if (!a.lexicon.empty()) EnsureFile(a.lexicon);
  mg_tokens* t = nullptr;
  Check(mg_tokens_read(a.tokens.c_str(), &t));
  Tokens tokens(t);
  mg_lm* l = nullptr;
  Check(mg_lm_train(tokens.get(), a.order,
                    a.lexicon.empty() ? nullptr : a.lexicon.c_str(), &l));
  Lm lm(l);
  Check(mg_lm_write_arpa(lm.get(), a.out.c_str()));
  double ppl = 0.0;
  Check(mg_lm_perplexity(lm.get(), tokens.get(), &ppl));
  fmt::print("order {} model, training perplexity {:.3f}\n", a.order, ppl);
}

struct BuildGraphArgs {
  std::string lm;
  std::string lexicon;
  std::string charset;
  std::string out;
  std::string type;
  int64_t timestamp = 0;
};

void RunBuildGraph(const BuildGraphArgs& a) {
  EnsureFile(a.lm);
  if (!a.lexicon.empty()) EnsureFile(a.lexicon);
  Charset charset = LoadCharset(a.charset);
  mg_lm* l = nullptr;
  Check(mg_lm_read_arpa(a.lm.c_str(), &l));
  Lm lm(l);
  const std::string type =
      a.type.empty() ? fs::path(a.out).filename().string() : a.type;
  mg_graph* g = nullptr;
  Check(mg_graph_build(lm.get(), a.lexicon.empty() ? nullptr : a.lexicon.c_str(),
                       charset.get(), type.c_str(), a.timestamp, &g));
  Graph graph(g);
  Check(mg_graph_write(graph.get(), a.out.c_str()));
  mg_graph_stats stats;
  Check(mg_graph_stats_of(graph.get(), &stats));
  fmt::print("{}: {} states, {} arcs, {} bytes\n", a.out, stats.states,
             stats.arcs, stats.bytes);
}

struct SynthArgs {
  std::string text;
  std::string charset;
  std::string out;
  double confusion = 0.0;
  int frames_per_char = 2;
  double blank_bias = 0.0;
  uint64_t seed = 1;
  int jobs = 1;
};

void RunSynth(const SynthArgs& a) {
  EnsureFile(a.text);
  Charset charset = LoadCharset(a.charset);
  mg_corpus* c = nullptr;
  Check(mg_corpus_load(a.text.c_str(), "", &c));
  Corpus corpus(c);
  const fs::path out(a.out);
  EnsureDir(out / "lat");
  Check(mg_charset_write_labels(charset.get(), (out / "labels.tsv").string().c_str()));
  const size_t n = mg_corpus_size(corpus.get());
  std::vector<std::string> ids(n), paths(n), refs(n);
  ParallelFor(n, a.jobs, [&](size_t i) {
    const char* text = nullptr;
    Check(mg_corpus_line(corpus.get(), i, &text, nullptr));
    mg_noise_spec noise;
    mg_noise_spec_default(&noise);
    noise.confusion = a.confusion;
    noise.frames_per_char = a.frames_per_char;
    noise.blank_bias = a.blank_bias;
    noise.seed = a.seed + i;
    mg_lattice* lat = nullptr;
    Check(mg_lattice_synthesize(text, charset.get(), &noise, &lat));
    Lattice lattice(lat);
    ids[i] = fmt::format("line{:05}", i + 1);
    paths[i] = (out / "lat" / (ids[i] + ".lat")).string();
    refs[i] = text;
    Check(mg_lattice_write(lattice.get(), paths[i].c_str()));
  });
  std::vector<const char*> pid, ppath, pref;
  for (size_t i = 0; i < n; ++i) {
    pid.push_back(ids[i].c_str());
    ppath.push_back(paths[i].c_str());
    pref.push_back(refs[i].c_str());
  }
  Check(mg_manifest_write(pid.data(), ppath.data(), pref.data(), n,
                          (out / "manifest.tsv").string().c_str()));
  fmt::print("{} lattices -> {}\n", n, (out / "manifest.tsv").string());
}

struct DecodeArgs {
  std::string graph;
  std::string manifest;
  std::string out;
  DecodeFlags flags;
  int jobs = 1;
};

void RunDecode(const DecodeArgs& a) {
  Graph graph = LoadGraph(a.graph);
  EvalSet set = LoadEvalSet(a.manifest, graph.get());
  const mg_decode_config config = a.flags.Config();
  const size_t n = mg_eval_set_size(set.get());
  std::vector<std::string> rows(n);
  ParallelFor(n, a.jobs, [&](size_t i) {
    const char* id = nullptr;
    const mg_lattice* lattice = nullptr;
    Check(mg_eval_set_entry(set.get(), i, &id, &lattice));
    mg_hypotheses* h = nullptr;
    Check(mg_decode(graph.get(), lattice, &config, &h));
    Hypotheses hyps(h);
    for (size_t r = 0; r < mg_hypotheses_size(hyps.get()); ++r) {
      const char* text = nullptr;
      double total = 0, acoustic = 0, lm = 0;
      Check(mg_hypothesis_get(hyps.get(), r, &text, nullptr, &total, &acoustic,
                              &lm));
      rows[i] += fmt::format("{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{}\n", id, r + 1,
                             total, acoustic, lm, text);
    }
  });
  std::string out;
  for (const auto& r : rows) out += r;
  WriteText(a.out, out);
}

struct TuneArgs {
  std::string graph;
  std::string manifest;
  std::string gammas = "0,0.5,1,1.5,2";
  std::string betas = "0.5,1,2,4";
  std::string grid_out;
  DecodeFlags flags;
  int jobs = 1;
};

void RunTune(const TuneArgs& a) {
  Graph graph = LoadGraph(a.graph);
  EvalSet set = LoadEvalSet(a.manifest, graph.get());
  const auto gammas = ParseGrid(a.gammas);
  const auto betas = ParseGrid(a.betas);
  const mg_decode_config base = a.flags.Config();
  mg_decode_config best;
  double best_wer = 0.0;
  char* grid = nullptr;
  Check(mg_tune(graph.get(), set.get(), gammas.data(), gammas.size(),
                betas.data(), betas.size(), &base, a.jobs, &best, &best_wer,
                &grid));
  const std::string tsv = TakeString(grid);
  if (!a.grid_out.empty()) WriteText(a.grid_out, tsv);
  fmt::print("gamma={} beta={} wer={:.2f}\n", best.gamma, best.beta, best_wer);
}

struct EvaluateArgs {
  std::string graph;
  std::string manifest;
  std::string tsv;
  bool greedy = false;
  DecodeFlags flags;
  int jobs = 1;
};

int RunEvaluate(const EvaluateArgs& a) {
  Graph graph = LoadGraph(a.graph);
  EvalSet set = LoadEvalSet(a.manifest, graph.get());
  mg_report* r = nullptr;
  if (a.greedy) {
    Check(mg_evaluate_greedy(set.get(), &r));
  } else {
    const mg_decode_config config = a.flags.Config();
    Check(mg_evaluate(graph.get(), set.get(), &config, a.jobs, &r));
  }
  Report report(r);
  char* text = nullptr;
  Check(mg_report_text(report.get(), &text));
  fmt::print("{}", TakeString(text));
  if (!a.tsv.empty()) {
    char* tsv = nullptr;
    Check(mg_report_tsv(report.get(), &tsv));
    WriteText(a.tsv, TakeString(tsv));
  }
  mg_report_summary summary;
  Check(mg_report_summary_of(report.get(), &summary));
  if (summary.failed_lines > 0) {
    std::fprintf(stderr, "mgram evaluate: %zu lines failed to decode\n",
                 summary.failed_lines);
    return 1;
  }
  return 0;
}

struct StatsArgs {
  std::vector<std::string> graphs;
  bool tsv = false;
};

void RunStats(const StatsArgs& a) {
  std::vector<std::string> names;
  std::vector<mg_graph_stats> stats;
  for (const std::string& dir : a.graphs) {
    mg_graph_stats s;
    char* type = nullptr;
    Check(mg_graph_read_stats(dir.c_str(), &s, &type));
    std::string name = TakeString(type);
    if (name.empty()) name = fs::path(dir).filename().string();
    names.push_back(name);
    stats.push_back(s);
  }
  std::vector<const char*> raw;
  for (const auto& n : names) raw.push_back(n.c_str());
  char* table = nullptr;
  Check(mg_complexity_report(raw.data(), stats.data(), stats.size(),
                             a.tsv ? 1 : 0, &table));
  fmt::print("{}", TakeString(table));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mgram: multigram language models and WFST decoding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mg_version());
  app.failure_message(CLI::FailureMessage::help);

  PrepareArgs prepare;
  auto* c_prepare =
      app.add_subcommand("prepare", "normalize corpora and extract the character set");
  c_prepare->add_option("--input", prepare.inputs, "corpus as TAG=PATH (repeatable)")
      ->required();
  c_prepare->add_option("--out", prepare.out, "output directory")->required();

  TrainMultigramArgs tm;
  auto* c_tm = app.add_subcommand("train-multigrams", "train a multigram model with EM");
  c_tm->add_option("--corpus", tm.corpus, "training corpus")->required();
  c_tm->add_option("--dmax", tm.dmax, "maximum unit length")
      ->capture_default_str()->check(CLI::Range(1, 32));
  c_tm->add_option("--out", tm.out, "model file")->required();
  c_tm->add_option("--lang", tm.lang, "language tag (default: file name prefix)");
  c_tm->add_option("--max-iters", tm.max_iters, "EM iteration cap")->capture_default_str();
  c_tm->add_option("--tol", tm.tol, "relative log-likelihood tolerance")
      ->capture_default_str();
  c_tm->add_option("--prune", tm.prune, "drop units below this probability")
      ->capture_default_str();
  c_tm->add_option("--jobs", tm.jobs, "E-step threads")->capture_default_str();

  TokenizeArgs tk;
  auto* c_tk = app.add_subcommand("tokenize", "tokenize corpora into lexicon units");
  c_tk->add_option("--corpus", tk.corpora, "corpus as TAG=PATH (repeatable)")->required();
  c_tk->add_option("--model", tk.models, "multigram model (repeatable)");
  c_tk->add_option("--type", tk.type, "word, char or multigram")
      ->capture_default_str()
      ->check(CLI::IsMember({"word", "char", "multigram"}));
  c_tk->add_option("--out", tk.out, "tokenized corpus")->required();
  c_tk->add_option("--lexicon-out", tk.lexicon_out, "unit lexicon TSV");

  TrainLmArgs lm;
  auto* c_lm = app.add_subcommand("train-lm", "estimate a Kneser-Ney n-gram model");
  c_lm->add_option("--tokens", lm.tokens, "tokenized corpus")->required();
  c_lm->add_option("--order", lm.order, "n-gram order")
      ->capture_default_str()->check(CLI::Range(1, 16));
  c_lm->add_option("--lexicon", lm.lexicon, "extra vocabulary (unit lexicon TSV)");
  c_lm->add_option("--out", lm.out, "ARPA file")->required();

  BuildGraphArgs bg;
  auto* c_bg = app.add_subcommand("build-graph", "compose the decoding graph");
  c_bg->add_option("--lm", bg.lm, "ARPA language model")->required();
  c_bg->add_option("--lexicon", bg.lexicon, "unit lexicon TSV (default: LM vocabulary)");
  c_bg->add_option("--charset", bg.charset, "character set TSV")->required();
  c_bg->add_option("--out", bg.out, "graph directory")->required();
  c_bg->add_option("--type", bg.type, "lexicon type label (default: directory name)");
  c_bg->add_option("--timestamp", bg.timestamp, "build timestamp for the metadata")
      ->capture_default_str();

  SynthArgs sy;
  auto* c_sy = app.add_subcommand("synth", "synthesize posterior lattices");
  c_sy->add_option("--text", sy.text, "one transcription per line")->required();
  c_sy->add_option("--charset", sy.charset, "character set TSV")->required();
  c_sy->add_option("--out", sy.out, "output directory")->required();
  c_sy->add_option("--confusion", sy.confusion, "confusion mass epsilon")
      ->capture_default_str()->check(CLI::Range(0.0, 0.999999));
  c_sy->add_option("--frames-per-char", sy.frames_per_char, "frames per character")
      ->capture_default_str()->check(CLI::Range(2, 64));
  c_sy->add_option("--blank-bias", sy.blank_bias, "true-label share on blank frames")
      ->capture_default_str()->check(CLI::Range(0.0, 0.999999));
  c_sy->add_option("--seed", sy.seed, "base seed; line i uses seed + i")
      ->capture_default_str();
  c_sy->add_option("--jobs", sy.jobs, "worker threads")->capture_default_str();

  DecodeArgs de;
  auto* c_de = app.add_subcommand("decode", "decode lattices with a search graph");
  c_de->add_option("--graph", de.graph, "graph directory")->required();
  c_de->add_option("--manifest", de.manifest, "lattice manifest")->required();
  c_de->add_option("--out", de.out, "output TSV (default: stdout)");
  c_de->add_option("--nbest", de.flags.n_best, "hypotheses per lattice")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c_de->add_option("--jobs", de.jobs, "worker threads")->capture_default_str();
  de.flags.Register(c_de);

  TuneArgs tu;
  auto* c_tu = app.add_subcommand("tune", "grid-search gamma and beta on a dev set");
  c_tu->add_option("--graph", tu.graph, "graph directory")->required();
  c_tu->add_option("--manifest", tu.manifest, "dev manifest")->required();
  c_tu->add_option("--gammas", tu.gammas, "comma-separated gamma grid")
      ->capture_default_str();
  c_tu->add_option("--betas", tu.betas, "comma-separated beta grid")
      ->capture_default_str();
  c_tu->add_option("--grid-out", tu.grid_out, "write every grid cell as TSV");
  c_tu->add_option("--jobs", tu.jobs, "worker threads")->capture_default_str();
  c_tu->add_option("--beam", tu.flags.beam, "pruning margin")->capture_default_str();

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "decode a manifest and score it");
  c_ev->add_option("--graph", ev.graph, "graph directory")->required();
  c_ev->add_option("--manifest", ev.manifest, "lattice manifest")->required();
  c_ev->add_option("--tsv", ev.tsv, "per-line TSV report");
  c_ev->add_flag("--greedy", ev.greedy, "score the LM-free greedy collapse instead");
  c_ev->add_option("--jobs", ev.jobs, "worker threads")->capture_default_str();
  ev.flags.Register(c_ev);

  StatsArgs st;
  auto* c_st = app.add_subcommand("stats", "graph size table");
  c_st->add_option("graphs", st.graphs, "graph directories")->required();
  c_st->add_flag("--tsv", st.tsv, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    if (cmd == c_prepare) RunPrepare(prepare);
    if (cmd == c_tm) RunTrainMultigrams(tm);
    if (cmd == c_tk) RunTokenize(tk);
    if (cmd == c_lm) RunTrainLm(lm);
    if (cmd == c_bg) RunBuildGraph(bg);
    if (cmd == c_sy) RunSynth(sy);
    if (cmd == c_de) RunDecode(de);
    if (cmd == c_tu) RunTune(tu);
    if (cmd == c_ev) return RunEvaluate(ev);
    if (cmd == c_st) RunStats(st);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mgram %s: error: %s\n", cmd->get_name().c_str(),
                 e.what());
    return 1;
  }
  return 0;
}
