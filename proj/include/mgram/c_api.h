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

#ifndef MGRAM_C_API_H_
#define MGRAM_C_API_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define MG_API __attribute__((visibility("default")))
#else
#define MG_API
#endif

typedef enum mg_status {
  MG_OK = 0,
  MG_ERR_INVALID_ARGUMENT = 1,
  MG_ERR_IO = 2,
  MG_ERR_FORMAT = 3,
  MG_ERR_ENCODING = 4,
  MG_ERR_UNSEGMENTABLE = 5,
  MG_ERR_DETERMINIZE = 6,
  MG_ERR_NO_PATH = 7,
  MG_ERR_BEAM_EXHAUSTED = 8,
  MG_ERR_SYMBOL_MISMATCH = 9,
  MG_ERR_INTERNAL = 10
} mg_status;

typedef enum mg_lexicon_type {
  MG_LEXICON_WORD = 0,
  MG_LEXICON_CHARACTER = 1,
  MG_LEXICON_MULTIGRAM = 2
} mg_lexicon_type;

typedef struct mg_corpus mg_corpus;
typedef struct mg_charset mg_charset;
typedef struct mg_multigram mg_multigram;
typedef struct mg_tokens mg_tokens;
typedef struct mg_lm mg_lm;
typedef struct mg_graph mg_graph;
typedef struct mg_lattice mg_lattice;
typedef struct mg_eval_set mg_eval_set;
typedef struct mg_report mg_report;
typedef struct mg_hypotheses mg_hypotheses;

/* Library version string. */
MG_API const char* mg_version(void);

/* Message of the last failing call on this thread; "" if none. */
MG_API const char* mg_last_error(void);

/* Strings returned through char** out-parameters are freed with this. */
MG_API void mg_string_free(char* s);

/* level: 0 = info, 1 = warning. Passing NULL restores the default sink. */
typedef void (*mg_log_fn)(int level, const char* message, void* user);
MG_API void mg_set_log_callback(mg_log_fn fn, void* user);

/* NFC, whitespace collapsed and trimmed. */
MG_API mg_status mg_normalize_utf8(const char* text, char** out);

/* ---- corpora ---- */
MG_API mg_status mg_corpus_load(const char* path, const char* language_tag,
                                mg_corpus** out);
/* `tag<TAB>text` lines. */
MG_API mg_status mg_corpus_load_tagged(const char* path, mg_corpus** out);
/* Appends every line of `src` to `dst`. */
MG_API mg_status mg_corpus_append(mg_corpus* dst, const mg_corpus* src);
MG_API size_t mg_corpus_size(const mg_corpus* corpus);
/* Borrowed pointers, valid until the corpus is freed. */
MG_API mg_status mg_corpus_line(const mg_corpus* corpus, size_t index,
                                const char** text, const char** tag);
MG_API mg_status mg_corpus_write(const mg_corpus* corpus, const char* path);
MG_API void mg_corpus_free(mg_corpus* corpus);

/* ---- character sets ---- */
MG_API mg_status mg_charset_from_corpus(const mg_corpus* corpus,
                                        mg_charset** out);
/* `symbol<TAB>index` lines, space written as <space>. */
MG_API mg_status mg_charset_read(const char* path, mg_charset** out);
MG_API mg_status mg_charset_write(const mg_charset* charset, const char* path);
/* Lattice label table: <blk> then the characters. */
MG_API mg_status mg_charset_write_labels(const mg_charset* charset,
                                         const char* path);
MG_API size_t mg_charset_size(const mg_charset* charset);
MG_API void mg_charset_free(mg_charset* charset);

/* ---- multigram models ---- */
typedef struct mg_em_options {
  int max_iters;
  double rel_tol;
  int jobs;
} mg_em_options;

MG_API void mg_em_options_default(mg_em_options* options);
MG_API mg_status mg_multigram_train(const mg_corpus* corpus, int d_max,
                                    const char* language_tag,
                                    const mg_em_options* options,
                                    mg_multigram** out);
/* Log-likelihood after each iteration (index 0 = initial model). */
MG_API size_t mg_multigram_history_size(const mg_multigram* model);
MG_API double mg_multigram_history(const mg_multigram* model, size_t index);
MG_API mg_status mg_multigram_prune(mg_multigram* model, double min_prob);
MG_API size_t mg_multigram_size(const mg_multigram* model);
/* Space-separated units of the best segmentation of `word`. */
MG_API mg_status mg_multigram_segment(const mg_multigram* model,
                                      const char* word, char** out);
MG_API mg_status mg_multigram_read(const char* path, mg_multigram** out);
MG_API mg_status mg_multigram_write(const mg_multigram* model,
                                    const char* path);
MG_API void mg_multigram_free(mg_multigram* model);

/* ---- tokenized corpora ---- */
/* For MG_LEXICON_MULTIGRAM, each line uses the model whose tag matches and
   the models' single-character units join the lexicon so that any word over
   the training characters stays spellable. */
MG_API mg_status mg_tokenize(const mg_corpus* corpus, mg_lexicon_type type,
                             const mg_multigram* const* models,
                             size_t num_models, mg_tokens** out);
MG_API size_t mg_tokens_size(const mg_tokens* tokens);
/* Space-joined tokens of one line. */
MG_API mg_status mg_tokens_line(const mg_tokens* tokens, size_t index,
                                char** out);
MG_API mg_status mg_tokens_read(const char* path, mg_tokens** out);
MG_API mg_status mg_tokens_write(const mg_tokens* tokens, const char* path);
/* Distinct units other than <sp>, written as `unit<TAB>tags`. */
MG_API mg_status mg_tokens_write_lexicon(const mg_tokens* tokens,
                                         const char* path);
MG_API size_t mg_tokens_lexicon_size(const mg_tokens* tokens);
MG_API void mg_tokens_free(mg_tokens* tokens);

/* Units of several lexicon files merged; written to `out_path`. Returns the
   merged size through `size` when non-NULL. */
MG_API mg_status mg_lexicon_merge(const char* const* paths, size_t count,
                                  const char* out_path, size_t* size);

/* ---- language models ---- */
/* Units of the tokens' lexicon, plus those of `lexicon_path` when non-NULL,
   all join the vocabulary. */
MG_API mg_status mg_lm_train(const mg_tokens* tokens, int order,
                             const char* lexicon_path, mg_lm** out);
MG_API mg_status mg_lm_read_arpa(const char* path, mg_lm** out);
MG_API mg_status mg_lm_write_arpa(const mg_lm* lm, const char* path);
MG_API int mg_lm_order(const mg_lm* lm);
/* log10 P(<s> tokens </s>) for a space-separated token string. */
MG_API mg_status mg_lm_score(const mg_lm* lm, const char* tokens,
                             double* log10_prob);
MG_API mg_status mg_lm_perplexity(const mg_lm* lm, const mg_tokens* tokens,
                                  double* perplexity);
MG_API void mg_lm_free(mg_lm* lm);

/* ---- search graphs ---- */
typedef struct mg_graph_stats {
  uint64_t states;
  uint64_t arcs;
  uint64_t bytes;
} mg_graph_stats;

/* `lexicon_path` may be NULL to spell every LM token. `type_name` is
   recorded in the metadata. */
MG_API mg_status mg_graph_build(const mg_lm* lm, const char* lexicon_path,
                                const mg_charset* charset,
                                const char* type_name, int64_t timestamp,
                                mg_graph** out);
MG_API mg_status mg_graph_write(const mg_graph* graph, const char* dir);
MG_API mg_status mg_graph_read(const char* dir, mg_graph** out);
MG_API mg_status mg_graph_stats_of(const mg_graph* graph, mg_graph_stats* out);
MG_API mg_status mg_graph_read_stats(const char* dir, mg_graph_stats* out,
                                     char** type_name);
MG_API void mg_graph_free(mg_graph* graph);

/* Aligned (tsv == 0) or TSV complexity table. */
MG_API mg_status mg_complexity_report(const char* const* names,
                                      const mg_graph_stats* stats,
                                      size_t count, int tsv, char** out);

/* ---- lattices ---- */
typedef struct mg_noise_spec {
  double confusion;
  int frames_per_char;
  double blank_bias;
  uint64_t seed;
} mg_noise_spec;

MG_API void mg_noise_spec_default(mg_noise_spec* noise);
MG_API mg_status mg_lattice_synthesize(const char* text,
                                       const mg_charset* charset,
                                       const mg_noise_spec* noise,
                                       mg_lattice** out);
MG_API size_t mg_lattice_frames(const mg_lattice* lattice);
MG_API mg_status mg_lattice_greedy(const mg_lattice* lattice, char** out);
MG_API mg_status mg_lattice_write(const mg_lattice* lattice, const char* path);
MG_API mg_status mg_lattice_read(const char* path, const char* labels_path,
                                 mg_lattice** out);
MG_API void mg_lattice_free(mg_lattice* lattice);

/* `id<TAB>lattice<TAB>transcription` lines. */
MG_API mg_status mg_manifest_write(const char* const* ids,
                                   const char* const* lattice_paths,
                                   const char* const* references, size_t count,
                                   const char* path);

/* ---- decoding and evaluation ---- */
typedef struct mg_decode_config {
  double gamma;
  double beta;
  double beam;
  size_t n_best;
} mg_decode_config;

MG_API void mg_decode_config_default(mg_decode_config* config);

MG_API mg_status mg_decode(const mg_graph* graph, const mg_lattice* lattice,
                           const mg_decode_config* config,
                           mg_hypotheses** out);
MG_API size_t mg_hypotheses_size(const mg_hypotheses* hyps);
/* Borrowed strings, valid until the list is freed. */
MG_API mg_status mg_hypothesis_get(const mg_hypotheses* hyps, size_t index,
                                   const char** text, const char** tokens,
                                   double* total, double* acoustic,
                                   double* lm);
MG_API void mg_hypotheses_free(mg_hypotheses* hyps);

/* Lattices of a manifest, read with the graph's label table. */
MG_API mg_status mg_eval_set_load(const char* manifest_path,
                                  const mg_graph* graph, mg_eval_set** out);
MG_API size_t mg_eval_set_size(const mg_eval_set* set);
MG_API mg_status mg_eval_set_entry(const mg_eval_set* set, size_t index,
                                   const char** id, const mg_lattice** lattice);
MG_API void mg_eval_set_free(mg_eval_set* set);

MG_API mg_status mg_evaluate(const mg_graph* graph, const mg_eval_set* set,
                             const mg_decode_config* config, int jobs,
                             mg_report** out);
MG_API mg_status mg_evaluate_greedy(const mg_eval_set* set, mg_report** out);

typedef struct mg_report_summary {
  double wer;
  double cer;
  double oov_rate;
  double coverage_rate;
  double decode_seconds;
  size_t lines;
  size_t failed_lines;
} mg_report_summary;

MG_API mg_status mg_report_summary_of(const mg_report* report,
                                      mg_report_summary* out);
MG_API mg_status mg_report_text(const mg_report* report, char** out);
MG_API mg_status mg_report_tsv(const mg_report* report, char** out);
MG_API void mg_report_free(mg_report* report);

/* Grid search; `best` receives the winning config and `grid_tsv` (optional)
   one `gamma<TAB>beta<TAB>wer` row per cell. */
MG_API mg_status mg_tune(const mg_graph* graph, const mg_eval_set* set,
                         const double* gammas, size_t num_gammas,
                         const double* betas, size_t num_betas,
                         const mg_decode_config* base, int jobs,
                         mg_decode_config* best, double* best_wer,
                         char** grid_tsv);

#ifdef __cplusplus
}
#endif

#endif  /* MGRAM_C_API_H_ */
