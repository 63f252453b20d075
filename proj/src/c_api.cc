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

#include "mgram/c_api.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <new>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mgram/base/error.h"
#include "mgram/base/log.h"
#include "mgram/base/utf8.h"
#include "mgram/decoder/decoder.h"
#include "mgram/emulator/lattice.h"
#include "mgram/eval/evaluate.h"
#include "mgram/graph/builder.h"
#include "mgram/lm/ngram.h"
#include "mgram/lm/tokenize.h"
#include "mgram/multigram/model.h"
#include "mgram/multigram/trainer.h"
#include "mgram/text/corpus.h"

struct mg_corpus {
  std::vector<mgram::CorpusLine> lines;
  std::vector<std::string> utf8;

  void Refresh() {
    utf8.clear();
    for (const auto& line : lines) utf8.push_back(mgram::U32ToUtf8(line.text));
  }
};

struct mg_charset {
  mgram::CharacterInventory inventory;
};

struct mg_multigram {
  mgram::MultigramModel model;
  std::vector<double> history;
};

struct mg_tokens {
  std::vector<std::vector<std::string>> sequences;
  std::vector<std::string> tags;
  // Units that belong to the lexicon without occurring in `sequences`.
  mgram::MultigramLexicon extra;
};

struct mg_lm {
  mgram::NgramModel model;
};

struct mg_graph {
  mgram::SearchGraph graph;
};

struct mg_lattice {
  mgram::PosteriorLattice lattice;
};

struct mg_eval_set {
  std::vector<mgram::EvalItem> items;
  std::vector<mg_lattice> lattices;
};

struct mg_report {
  mgram::EvalReport report;
};

struct mg_hypotheses {
  std::vector<mgram::Hypothesis> hyps;
  std::vector<std::string> joined;
};

namespace {

thread_local std::string last_error;

class NullArgument : public std::exception {};

template <typename T>
void Require(const T* p) {
  if (p == nullptr) throw NullArgument();
}

template <typename Fn>
mg_status Guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return MG_OK;
  } catch (const mgram::Error& e) {
    last_error = e.what();
    return static_cast<mg_status>(e.code());
  } catch (const NullArgument&) {
    last_error = "null argument";
    return MG_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MG_ERR_INTERNAL;
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string Join(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> SplitSpaces(const std::string& s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

mgram::DecodeConfig ToConfig(const mg_decode_config& c) {
  return {c.gamma, c.beta, c.beam, c.n_best};
}

mg_decode_config FromConfig(const mgram::DecodeConfig& c) {
  return {c.gamma, c.beta, c.beam, c.n_best};
}

mg_graph_stats FromStats(const mgram::GraphStats& s) {
  return {s.states, s.arcs, s.bytes};
}

template <typename T>
T* Take(T&& value) {
  return new T(std::move(value));
}

}  // namespace

extern "C" {

const char* mg_version(void) { return "1.0.0"; }

const char* mg_last_error(void) { return last_error.c_str(); }

void mg_string_free(char* s) { std::free(s); }

void mg_set_log_callback(mg_log_fn fn, void* user) {
  if (fn == nullptr) {
    mgram::SetLogSink(nullptr);
    return;
  }
  mgram::SetLogSink([fn, user](mgram::LogLevel level, std::string_view msg) {
    const std::string text(msg);
    fn(static_cast<int>(level), text.c_str(), user);
  });
}

mg_status mg_normalize_utf8(const char* text, char** out) {
  return Guard([&] {
    Require(text);
    Require(out);
    *out = Dup(mgram::NormalizeUtf8(text));
  });
}

// ---- corpora ----

mg_status mg_corpus_load(const char* path, const char* language_tag,
                         mg_corpus** out) {
  return Guard([&] {
    Require(path);
    Require(out);
    mg_corpus c;
    c.lines = mgram::LoadCorpus(path, language_tag ? language_tag : "");
    c.Refresh();
    *out = Take(std::move(c));
  });
}

mg_status mg_corpus_load_tagged(const char* path, mg_corpus** out) {
  return Guard([&] {
    Require(path);
    Require(out);
    mg_corpus c;
    c.lines = mgram::LoadTaggedCorpus(path);
    c.Refresh();
    *out = Take(std::move(c));
  });
}

mg_status mg_corpus_append(mg_corpus* dst, const mg_corpus* src) {
  return Guard([&] {
    Require(dst);
    Require(src);
    dst->lines.insert(dst->lines.end(), src->lines.begin(), src->lines.end());
    dst->utf8.insert(dst->utf8.end(), src->utf8.begin(), src->utf8.end());
  });
}

size_t mg_corpus_size(const mg_corpus* corpus) {
  return corpus ? corpus->lines.size() : 0;
}

mg_status mg_corpus_line(const mg_corpus* corpus, size_t index,
                         const char** text, const char** tag) {
  return Guard([&] {
    Require(corpus);
    if (index >= corpus->lines.size()) {
      mgram::Fail(mgram::ErrorCode::kInvalidArgument, "line index out of range");
    }
    if (text) *text = corpus->utf8[index].c_str();
    if (tag) *tag = corpus->lines[index].language_tag.c_str();
  });
}

mg_status mg_corpus_write(const mg_corpus* corpus, const char* path) {
  return Guard([&] {
    Require(corpus);
    Require(path);
    mgram::WriteCorpus(path, corpus->lines);
  });
}

void mg_corpus_free(mg_corpus* corpus) { delete corpus; }

// ---- character sets ----

mg_status mg_charset_from_corpus(const mg_corpus* corpus, mg_charset** out) {
  return Guard([&] {
    Require(corpus);
    Require(out);
    *out = Take(mg_charset{mgram::BuildCharacterInventory(corpus->lines)});
  });
}

mg_status mg_charset_read(const char* path, mg_charset** out) {
  return Guard([&] {
    Require(path);
    Require(out);
    *out = Take(mg_charset{mgram::ReadCharacterInventory(path)});
  });
}

mg_status mg_charset_write(const mg_charset* charset, const char* path) {
  return Guard([&] {
    Require(charset);
    Require(path);
    mgram::WriteCharacterInventory(charset->inventory, path);
  });
}

mg_status mg_charset_write_labels(const mg_charset* charset, const char* path) {
  return Guard([&] {
    Require(charset);
    Require(path);
    mgram::WriteLabelTable(mgram::LatticeLabels(charset->inventory), path);
  });
}

size_t mg_charset_size(const mg_charset* charset) {
  return charset ? charset->inventory.size() : 0;
}

void mg_charset_free(mg_charset* charset) { delete charset; }

// ---- multigram models ----

void mg_em_options_default(mg_em_options* options) {
  if (options == nullptr) return;
  const mgram::EmOptions d;
  *options = {d.max_iters, d.rel_tol, d.jobs};
}

mg_status mg_multigram_train(const mg_corpus* corpus, int d_max,
                             const char* language_tag,
                             const mg_em_options* options, mg_multigram** out) {
  return Guard([&] {
    Require(corpus);
    Require(out);
    mgram::EmOptions opts;
    if (options) {
      opts.max_iters = options->max_iters;
      opts.rel_tol = options->rel_tol;
      opts.jobs = options->jobs;
    }
    const auto words = mgram::CorpusWords(corpus->lines);
    mgram::EmResult result =
        mgram::EmTrain(words, d_max, opts, language_tag ? language_tag : "");
    if (result.skipped_words > 0) {
      mgram::LogWarning(fmt::format("{} words could not be segmented",
                                    result.skipped_words));
    }
    *out = Take(mg_multigram{std::move(result.model),
                             std::move(result.log_likelihoods)});
  });
}

size_t mg_multigram_history_size(const mg_multigram* model) {
  return model ? model->history.size() : 0;
}

double mg_multigram_history(const mg_multigram* model, size_t index) {
  if (model == nullptr || index >= model->history.size()) return 0.0;
  return model->history[index];
}

mg_status mg_multigram_prune(mg_multigram* model, double min_prob) {
  return Guard([&] {
    Require(model);
    model->model = mgram::PruneModel(model->model, min_prob);
  });
}

size_t mg_multigram_size(const mg_multigram* model) {
  return model ? model->model.size() : 0;
}

mg_status mg_multigram_segment(const mg_multigram* model, const char* word,
                               char** out) {
  return Guard([&] {
    Require(model);
    Require(word);
    Require(out);
    const auto seg = mgram::ViterbiSegment(mgram::Utf8ToU32(word), model->model);
    std::vector<std::string> units;
    for (const auto& u : seg.units) units.push_back(mgram::U32ToUtf8(u));
    *out = Dup(Join(units));
  });
}

mg_status mg_multigram_read(const char* path, mg_multigram** out) {
  return Guard([&] {
    Require(path);
    Require(out);
    *out = Take(mg_multigram{mgram::ReadModel(path), {}});
  });
}

mg_status mg_multigram_write(const mg_multigram* model, const char* path) {
  return Guard([&] {
    Require(model);
    Require(path);
    mgram::WriteModel(model->model, path);
  });
}

void mg_multigram_free(mg_multigram* model) { delete model; }

// ---- tokenized corpora ----

mg_status mg_tokenize(const mg_corpus* corpus, mg_lexicon_type type,
                      const mg_multigram* const* models, size_t num_models,
                      mg_tokens** out) {
  return Guard([&] {
    Require(corpus);
    Require(out);
    mg_tokens tokens;
    switch (type) {
      case MG_LEXICON_WORD:
        tokens.sequences = mgram::TokenizeWords(corpus->lines);
        break;
      case MG_LEXICON_CHARACTER:
        tokens.sequences = mgram::TokenizeCharacters(corpus->lines);
        break;
      case MG_LEXICON_MULTIGRAM: {
        if (num_models == 0) {
          mgram::Fail(mgram::ErrorCode::kInvalidArgument,
                      "multigram tokenization needs at least one model");
        }
        Require(models);
        std::vector<mgram::MultigramModel> list;
        for (size_t i = 0; i < num_models; ++i) {
          Require(models[i]);
          list.push_back(models[i]->model);
        }
        tokens.sequences = mgram::TokenizeCorpus(corpus->lines, list);
        for (const auto& model : list) {
          for (const auto& [unit, p] : model.emissions()) {
            if (unit.size() == 1) {
              tokens.extra.Add(unit, model.language_tag().empty()
                                         ? std::string("any")
                                         : model.language_tag());
            }
          }
        }
        break;
      }
      default:
        mgram::Fail(mgram::ErrorCode::kInvalidArgument, "unknown lexicon type");
    }
    for (const auto& line : corpus->lines) tokens.tags.push_back(line.language_tag);
    *out = Take(std::move(tokens));
  });
}

size_t mg_tokens_size(const mg_tokens* tokens) {
  return tokens ? tokens->sequences.size() : 0;
}

mg_status mg_tokens_line(const mg_tokens* tokens, size_t index, char** out) {
  return Guard([&] {
    Require(tokens);
    Require(out);
    if (index >= tokens->sequences.size()) {
      mgram::Fail(mgram::ErrorCode::kInvalidArgument, "line index out of range");
    }
    *out = Dup(Join(tokens->sequences[index]));
  });
}

mg_status mg_tokens_read(const char* path, mg_tokens** out) {
  return Guard([&] {
    Require(path);
    Require(out);
    mg_tokens tokens;
    tokens.sequences = mgram::ReadTokenized(path);
    tokens.tags.assign(tokens.sequences.size(), "");
    *out = Take(std::move(tokens));
  });
}

mg_status mg_tokens_write(const mg_tokens* tokens, const char* path) {
  return Guard([&] {
    Require(tokens);
    Require(path);
    mgram::WriteTokenized(path, tokens->sequences);
  });
}

namespace {

mgram::MultigramLexicon TokensLexicon(const mg_tokens& tokens) {
  std::map<std::string, std::vector<std::vector<std::string>>> by_tag;
  for (size_t i = 0; i < tokens.sequences.size(); ++i) {
    std::string tag = i < tokens.tags.size() ? tokens.tags[i] : "";
    if (tag.empty()) tag = "any";
    by_tag[tag].push_back(tokens.sequences[i]);
  }
  std::vector<mgram::MultigramLexicon> parts = {tokens.extra};
  for (const auto& [tag, seqs] : by_tag) {
    parts.push_back(mgram::LexiconFromTokens(seqs, tag));
  }
  return mgram::MergeLexicons(parts);
}

}  // namespace

mg_status mg_tokens_write_lexicon(const mg_tokens* tokens, const char* path) {
  return Guard([&] {
    Require(tokens);
    Require(path);
    mgram::WriteLexicon(TokensLexicon(*tokens), path);
  });
}

size_t mg_tokens_lexicon_size(const mg_tokens* tokens) {
  if (tokens == nullptr) return 0;
  try {
    return TokensLexicon(*tokens).size();
  } catch (const std::exception&) {
    return 0;
  }
}

void mg_tokens_free(mg_tokens* tokens) { delete tokens; }

mg_status mg_lexicon_merge(const char* const* paths, size_t count,
                           const char* out_path, size_t* size) {
  return Guard([&] {
    Require(paths);
    Require(out_path);
    std::vector<mgram::MultigramLexicon> parts;
    for (size_t i = 0; i < count; ++i) {
      Require(paths[i]);
      parts.push_back(mgram::ReadLexicon(paths[i]));
    }
    const auto merged = mgram::MergeLexicons(parts);
    mgram::WriteLexicon(merged, out_path);
    if (size) *size = merged.size();
  });
}

// ---- language models ----

mg_status mg_lm_train(const mg_tokens* tokens, int order,
                      const char* lexicon_path, mg_lm** out) {
  return Guard([&] {
    Require(tokens);
    Require(out);
    std::vector<std::string> vocabulary;
    const mgram::MultigramLexicon own = TokensLexicon(*tokens);
    for (const auto& [unit, tags] : own.units()) {
      vocabulary.push_back(mgram::U32ToUtf8(unit));
    }
    if (lexicon_path != nullptr) {
      const mgram::MultigramLexicon file = mgram::ReadLexicon(lexicon_path);
      for (const auto& [unit, tags] : file.units()) {
        vocabulary.push_back(mgram::U32ToUtf8(unit));
      }
    }
    const auto counts =
        mgram::CountNgrams(tokens->sequences, order, false, vocabulary);
    *out = Take(mg_lm{mgram::EstimateKneserNey(counts)});
  });
}

mg_status mg_lm_read_arpa(const char* path, mg_lm** out) {
  return Guard([&] {
    Require(path);
    Require(out);
    *out = Take(mg_lm{mgram::ReadArpa(path)});
  });
}

mg_status mg_lm_write_arpa(const mg_lm* lm, const char* path) {
  return Guard([&] {
    Require(lm);
    Require(path);
    mgram::WriteArpa(lm->model, path);
  });
}

int mg_lm_order(const mg_lm* lm) { return lm ? lm->model.order() : 0; }

mg_status mg_lm_score(const mg_lm* lm, const char* tokens, double* log10_prob) {
  return Guard([&] {
    Require(lm);
    Require(tokens);
    Require(log10_prob);
    *log10_prob = lm->model.ScoreSequence(SplitSpaces(tokens));
  });
}

mg_status mg_lm_perplexity(const mg_lm* lm, const mg_tokens* tokens,
                           double* perplexity) {
  return Guard([&] {
    Require(lm);
    Require(tokens);
    Require(perplexity);
    *perplexity = mgram::Perplexity(lm->model, tokens->sequences);
  });
}

void mg_lm_free(mg_lm* lm) { delete lm; }

// ---- search graphs ----

mg_status mg_graph_build(const mg_lm* lm, const char* lexicon_path,
                         const mg_charset* charset, const char* type_name,
                         int64_t timestamp, mg_graph** out) {
  return Guard([&] {
    Require(lm);
    Require(charset);
    Require(out);
    std::vector<std::string> lexicon;
    if (lexicon_path != nullptr) {
      const mgram::MultigramLexicon file = mgram::ReadLexicon(lexicon_path);
      for (const auto& [unit, tags] : file.units()) {
        lexicon.push_back(mgram::U32ToUtf8(unit));
      }
      if (lexicon.empty()) {
        mgram::Fail(mgram::ErrorCode::kInvalidArgument,
                    std::string("lexicon is empty: ") + lexicon_path);
      }
    }
    mgram::GraphMetadata meta;
    meta.lexicon_type = type_name ? type_name : "";
    meta.timestamp = timestamp;
    *out = Take(mg_graph{mgram::BuildSearchGraph(lm->model, lexicon,
                                                 charset->inventory, meta)});
  });
}

mg_status mg_graph_write(const mg_graph* graph, const char* dir) {
  return Guard([&] {
    Require(graph);
    Require(dir);
    mgram::WriteSearchGraph(graph->graph, dir);
  });
}

mg_status mg_graph_read(const char* dir, mg_graph** out) {
  return Guard([&] {
    Require(dir);
    Require(out);
    *out = Take(mg_graph{mgram::ReadSearchGraph(dir)});
  });
}

mg_status mg_graph_stats_of(const mg_graph* graph, mg_graph_stats* out) {
  return Guard([&] {
    Require(graph);
    Require(out);
    *out = FromStats(mgram::ComputeGraphStats(graph->graph.graph));
  });
}

mg_status mg_graph_read_stats(const char* dir, mg_graph_stats* out,
                              char** type_name) {
  return Guard([&] {
    Require(dir);
    Require(out);
    *out = FromStats(mgram::ReadGraphStats(dir));
    if (type_name) {
      std::string name;
      const auto meta_path = std::filesystem::path(dir) / "meta.txt";
      std::ifstream in(meta_path);
      std::string line;
      while (std::getline(in, line)) {
        if (line.rfind("lexicon_type=", 0) == 0) name = line.substr(13);
      }
      *type_name = Dup(name);
    }
  });
}

void mg_graph_free(mg_graph* graph) { delete graph; }

mg_status mg_complexity_report(const char* const* names,
                               const mg_graph_stats* stats, size_t count,
                               int tsv, char** out) {
  return Guard([&] {
    Require(out);
    if (count > 0) {
      Require(names);
      Require(stats);
    }
    std::vector<mgram::ComplexityRow> rows;
    for (size_t i = 0; i < count; ++i) {
      Require(names[i]);
      rows.push_back({names[i],
                      {static_cast<size_t>(stats[i].states),
                       static_cast<size_t>(stats[i].arcs),
                       static_cast<size_t>(stats[i].bytes)}});
    }
    *out = Dup(tsv ? mgram::ComplexityReportTsv(rows)
                   : mgram::FormatComplexityReport(rows));
  });
}

// ---- lattices ----

void mg_noise_spec_default(mg_noise_spec* noise) {
  if (noise == nullptr) return;
  const mgram::NoiseSpec d;
  *noise = {d.confusion, d.frames_per_char, d.blank_bias, d.seed};
}

mg_status mg_lattice_synthesize(const char* text, const mg_charset* charset,
                                const mg_noise_spec* noise, mg_lattice** out) {
  return Guard([&] {
    Require(text);
    Require(charset);
    Require(noise);
    Require(out);
    const mgram::NoiseSpec spec{noise->confusion, noise->frames_per_char,
                                noise->blank_bias, noise->seed};
    *out = Take(mg_lattice{mgram::SynthesizeLattice(
        mgram::NormalizeText(mgram::Utf8ToU32(text)), charset->inventory,
        spec)});
  });
}

size_t mg_lattice_frames(const mg_lattice* lattice) {
  return lattice ? lattice->lattice.num_frames() : 0;
}

mg_status mg_lattice_greedy(const mg_lattice* lattice, char** out) {
  return Guard([&] {
    Require(lattice);
    Require(out);
    *out = Dup(mgram::U32ToUtf8(mgram::GreedyCollapse(lattice->lattice)));
  });
}

mg_status mg_lattice_write(const mg_lattice* lattice, const char* path) {
  return Guard([&] {
    Require(lattice);
    Require(path);
    mgram::WriteLattice(lattice->lattice, path);
  });
}

mg_status mg_lattice_read(const char* path, const char* labels_path,
                          mg_lattice** out) {
  return Guard([&] {
    Require(path);
    Require(labels_path);
    Require(out);
    *out = Take(mg_lattice{
        mgram::ReadLattice(path, mgram::ReadLabelTable(labels_path))});
  });
}

void mg_lattice_free(mg_lattice* lattice) { delete lattice; }

mg_status mg_manifest_write(const char* const* ids,
                            const char* const* lattice_paths,
                            const char* const* references, size_t count,
                            const char* path) {
  return Guard([&] {
    Require(path);
    std::vector<mgram::ManifestEntry> entries;
    for (size_t i = 0; i < count; ++i) {
      Require(ids);
      Require(lattice_paths);
      Require(references);
      Require(ids[i]);
      Require(lattice_paths[i]);
      Require(references[i]);
      entries.push_back({ids[i], lattice_paths[i], references[i]});
    }
    mgram::WriteManifest(entries, path);
  });
}

// ---- decoding and evaluation ----

void mg_decode_config_default(mg_decode_config* config) {
  if (config != nullptr) *config = FromConfig(mgram::DecodeConfig{});
}

mg_status mg_decode(const mg_graph* graph, const mg_lattice* lattice,
                    const mg_decode_config* config, mg_hypotheses** out) {
  return Guard([&] {
    Require(graph);
    Require(lattice);
    Require(config);
    Require(out);
    mg_hypotheses hyps;
    hyps.hyps = mgram::DecodeLattice(lattice->lattice, graph->graph.graph,
                                     ToConfig(*config));
    for (const auto& h : hyps.hyps) hyps.joined.push_back(Join(h.tokens));
    *out = Take(std::move(hyps));
  });
}

size_t mg_hypotheses_size(const mg_hypotheses* hyps) {
  return hyps ? hyps->hyps.size() : 0;
}

mg_status mg_hypothesis_get(const mg_hypotheses* hyps, size_t index,
                            const char** text, const char** tokens,
                            double* total, double* acoustic, double* lm) {
  return Guard([&] {
    Require(hyps);
    if (index >= hyps->hyps.size()) {
      mgram::Fail(mgram::ErrorCode::kInvalidArgument,
                  "hypothesis index out of range");
    }
    const mgram::Hypothesis& h = hyps->hyps[index];
    if (text) *text = h.text.c_str();
    if (tokens) *tokens = hyps->joined[index].c_str();
    if (total) *total = h.total;
    if (acoustic) *acoustic = h.acoustic;
    if (lm) *lm = h.lm;
  });
}

void mg_hypotheses_free(mg_hypotheses* hyps) { delete hyps; }

mg_status mg_eval_set_load(const char* manifest_path, const mg_graph* graph,
                           mg_eval_set** out) {
  return Guard([&] {
    Require(manifest_path);
    Require(graph);
    Require(out);
    mg_eval_set set;
    set.items = mgram::LoadEvalItems(mgram::ReadManifest(manifest_path),
                                     graph->graph);
    for (const auto& item : set.items) set.lattices.push_back({item.lattice});
    *out = Take(std::move(set));
  });
}

size_t mg_eval_set_size(const mg_eval_set* set) {
  return set ? set->items.size() : 0;
}

mg_status mg_eval_set_entry(const mg_eval_set* set, size_t index,
                            const char** id, const mg_lattice** lattice) {
  return Guard([&] {
    Require(set);
    if (index >= set->items.size()) {
      mgram::Fail(mgram::ErrorCode::kInvalidArgument, "entry index out of range");
    }
    if (id) *id = set->items[index].id.c_str();
    if (lattice) *lattice = &set->lattices[index];
  });
}

void mg_eval_set_free(mg_eval_set* set) { delete set; }

mg_status mg_evaluate(const mg_graph* graph, const mg_eval_set* set,
                      const mg_decode_config* config, int jobs,
                      mg_report** out) {
  return Guard([&] {
    Require(graph);
    Require(set);
    Require(config);
    Require(out);
    *out = Take(mg_report{mgram::EvaluateSet(
        set->items, graph->graph, ToConfig(*config),
        static_cast<size_t>(std::max(jobs, 1)))});
  });
}

mg_status mg_evaluate_greedy(const mg_eval_set* set, mg_report** out) {
  return Guard([&] {
    Require(set);
    Require(out);
    *out = Take(mg_report{mgram::EvaluateGreedy(set->items)});
  });
}

mg_status mg_report_summary_of(const mg_report* report, mg_report_summary* out) {
  return Guard([&] {
    Require(report);
    Require(out);
    const auto& r = report->report;
    *out = {r.wer,           r.cer,          r.oov_rate,
            r.coverage_rate, r.decode_seconds, r.lines.size(),
            r.failed_lines};
  });
}

mg_status mg_report_text(const mg_report* report, char** out) {
  return Guard([&] {
    Require(report);
    Require(out);
    *out = Dup(mgram::FormatEvalReport(report->report));
  });
}

mg_status mg_report_tsv(const mg_report* report, char** out) {
  return Guard([&] {
    Require(report);
    Require(out);
    *out = Dup(mgram::EvalReportTsv(report->report));
  });
}

void mg_report_free(mg_report* report) { delete report; }

mg_status mg_tune(const mg_graph* graph, const mg_eval_set* set,
                  const double* gammas, size_t num_gammas, const double* betas,
                  size_t num_betas, const mg_decode_config* base, int jobs,
                  mg_decode_config* best, double* best_wer, char** grid_tsv) {
  return Guard([&] {
    Require(graph);
    Require(set);
    Require(base);
    Require(best);
    if (num_gammas > 0) Require(gammas);
    if (num_betas > 0) Require(betas);
    const auto result = mgram::TuneHyperparameters(
        set->items, graph->graph, std::span<const double>(gammas, num_gammas),
        std::span<const double>(betas, num_betas), ToConfig(*base),
        static_cast<size_t>(std::max(jobs, 1)));
    *best = FromConfig(result.best);
    if (best_wer) *best_wer = result.best_wer;
    if (grid_tsv) {
      std::string tsv = "gamma\tbeta\twer\n";
      for (const auto& cell : result.grid) {
        tsv += fmt::format("{}\t{}\t{:.4f}\n", cell.gamma, cell.beta, cell.wer);
      }
      *grid_tsv = Dup(tsv);
    }
  });
}

}  // extern "C"
