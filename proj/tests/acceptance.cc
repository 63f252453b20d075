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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "mgram/base/error.h"
#include "mgram/base/log.h"
#include "mgram/base/utf8.h"
#include "mgram/decoder/decoder.h"
#include "mgram/eval/evaluate.h"
#include "mgram/eval/metrics.h"
#include "mgram/fst/algorithms.h"
#include "mgram/graph/builder.h"
#include "mgram/lm/ngram.h"
#include "mgram/multigram/trainer.h"
#include "oracles.h"
#include "pipeline.h"

namespace mgram {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records a failed check; keeps the first message.
  void Check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::filesystem::path Sample(const std::string& name) {
  return std::filesystem::path(MGRAM_DATA_DIR) / "sample" / name;
}

// Shared bilingual fixtures, built once.
struct Corpora {
  std::vector<CorpusLine> fr_train, en_train, fr_test, en_test;
  std::vector<CorpusLine> train, test;
  CharacterInventory inventory;
};

const Corpora& Data() {
  static const Corpora data = [] {
    Corpora c;
    c.fr_train = LoadCorpus(Sample("fr.train.txt"), "fr");
    c.en_train = LoadCorpus(Sample("en.train.txt"), "en");
    c.fr_test = LoadCorpus(Sample("fr.test.txt"), "fr");
    c.en_test = LoadCorpus(Sample("en.test.txt"), "en");
    c.train = c.fr_train;
    c.train.insert(c.train.end(), c.en_train.begin(), c.en_train.end());
    c.test = c.fr_test;
    c.test.insert(c.test.end(), c.en_test.begin(), c.en_test.end());
    c.inventory = BuildCharacterInventory(c.train);
    return c;
  }();
  return data;
}

const std::vector<MultigramModel>& Multigrams(int k) {
  static std::map<int, std::vector<MultigramModel>> cache;
  auto it = cache.find(k);
  if (it == cache.end()) {
    it = cache.emplace(k, testing::TrainMultigrams(Data().train, k, 20)).first;
  }
  return it->second;
}

struct Systems {
  std::vector<testing::System> all;  // chars, m2..m5, words
  double build_seconds = 0.0;
  const testing::System& Get(const std::string& name) const {
    for (const auto& s : all) {
      if (s.name == name) return s;
    }
    Fail(ErrorCode::kInternal, "no system " + name);
  }
};

const Systems& BuiltSystems() {
  static const Systems systems = [] {
    Systems s;
    const auto& d = Data();
    const auto start = Clock::now();
    s.all.push_back(testing::BuildSystem(d.train, LexiconType::kCharacter, {}, 3,
                                         d.inventory, "chars"));
    for (int k = 2; k <= 5; ++k) {
      s.all.push_back(testing::BuildSystem(d.train, LexiconType::kMultigram, Multigrams(k),
                                           3, d.inventory, fmt::format("m{}", k)));
    }
    s.all.push_back(testing::BuildSystem(d.train, LexiconType::kWord, {}, 3, d.inventory,
                                         "words"));
    s.build_seconds = Seconds(start);
    return s;
  }();
  return systems;
}

Outcome HsmmCorrectness() {
  Outcome out;
  std::mt19937_64 rng(101);
  const std::u32string letters = U"abcde";
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const size_t alphabet_size = 1 + rng() % 5;
    const std::u32string alphabet = letters.substr(0, alphabet_size);
    const int dmax = 1 + static_cast<int>(rng() % 4);
    const MultigramModel model = oracle::RandomModel(rng, alphabet, dmax, 0.3);
    std::u32string word(1 + rng() % 8, U'a');
    for (char32_t& c : word) c = alphabet[rng() % alphabet.size()];
    const double expected = oracle::SegmentationLikelihood(word, model);
    const double got = std::exp(ForwardBackward(word, model).log_likelihood);
    out.Check(std::abs(got - expected) <= 1e-9 * expected,
              fmt::format("likelihood {} vs {} on word {}", got, expected, i));
    for (bool penalty : {false, true}) {
      const auto want = oracle::BestSegmentation(word, model, penalty);
      const auto have = ViterbiDecode(word, model, penalty).segmentation.units;
      out.Check(want == have, fmt::format("viterbi mismatch on word {}", i));
    }
    ++checked;
  }
  if (out.pass) out.detail = fmt::format("{} words", checked);
  return out;
}

Outcome EmMonotonicity() {
  Outcome out;
  // 500 running words from each language.
  std::vector<std::u32string> words;
  for (const auto* part : {&Data().fr_train, &Data().en_train}) {
    const auto all = CorpusWords(*part);
    words.insert(words.end(), all.begin(), all.begin() + std::min<size_t>(500, all.size()));
  }
  out.Check(words.size() == 1000, fmt::format("corpus has {} words", words.size()));
  std::string iters;
  for (int dmax : {2, 3, 5}) {
    EmOptions options;
    options.max_iters = 30;
    options.rel_tol = 1e-12;
    const EmResult r = EmTrain(words, dmax, options, "toy");
    const auto& ll = r.log_likelihoods;
    for (size_t i = 1; i < ll.size(); ++i) {
      out.Check(ll[i] >= ll[i - 1] - 1e-9 * std::abs(ll[i - 1]),
                fmt::format("d_max={} iteration {}: {} < {}", dmax, i, ll[i], ll[i - 1]));
    }
    iters += fmt::format("{}d_max={}: {} iters", iters.empty() ? "" : ", ", dmax,
                         ll.size() - 1);
  }
  if (out.pass) out.detail = iters;
  return out;
}

Outcome LmValidity() {
  Outcome out;
  const auto& d = Data();
  const auto tokens = testing::Tokenize(d.train, LexiconType::kMultigram, Multigrams(2));
  const NgramModel m =
      EstimateKneserNey(CountNgrams(tokens.sequences, 9, false, tokens.lexicon));
  std::mt19937_64 rng(303);

  std::vector<Ngram> seen;
  for (int k = 1; k < m.order(); ++k) {
    for (const auto& [g, e] : m.entries(k)) {
      if (e.has_backoff) seen.push_back(g);
    }
  }
  const auto vocab_size = static_cast<int32_t>(m.vocabulary().size());
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Ngram h;
    if (i % 2 == 0 && !seen.empty()) {
      h = seen[rng() % seen.size()];
    } else {
      h.resize(rng() % 9);
      for (auto& w : h) w = 1 + static_cast<int32_t>(rng() % (vocab_size - 1));
      if (!h.empty() && rng() % 2) h.front() = Vocabulary::kBos;
    }
    double sum = 0.0;
    for (int32_t w = 0; w < vocab_size; ++w) {
      if (w != Vocabulary::kBos) sum += std::pow(10.0, m.ConditionalLog10(h, w));
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  out.Check(worst <= 1e-6, fmt::format("context mass off by {}", worst));

  const NgramModel back = ParseArpa(ArpaString(m));
  double arpa_err = 0.0;
  size_t entries = 0;
  for (int k = 1; k <= m.order(); ++k) {
    out.Check(back.NumEntries(k) == m.NumEntries(k),
              fmt::format("order {} entry count changed", k));
    for (const auto& [g, e] : m.entries(k)) {
      Ngram ids;
      for (int32_t w : g) ids.push_back(back.vocabulary().Find(m.vocabulary().Token(w)));
      const NgramEntry* f = back.Find(ids);
      if (f == nullptr) {
        out.Check(false, "ARPA round trip lost an n-gram");
        break;
      }
      arpa_err = std::max(arpa_err, std::abs(f->log10_prob - e.log10_prob));
      if (e.has_backoff) {
        arpa_err = std::max(arpa_err, std::abs(f->log10_backoff - e.log10_backoff));
      }
      ++entries;
    }
  }
  out.Check(arpa_err <= 1e-6, fmt::format("ARPA round trip error {}", arpa_err));

  double score_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> seq;
    if (i % 2 == 0) {
      seq = tokens.sequences[rng() % tokens.sequences.size()];
    } else {
      seq.resize(1 + rng() % 12);
      for (auto& t : seq) t = m.vocabulary().Token(3 + static_cast<int>(rng() % (vocab_size - 3)));
    }
    const double want = oracle::SequenceLog10(m, seq);
    score_err = std::max(score_err, std::abs(m.ScoreSequence(seq) - want) /
                                        std::max(1.0, std::abs(want)));
  }
  out.Check(score_err <= 1e-9, fmt::format("sequence score error {}", score_err));
  if (out.pass) {
    out.detail = fmt::format("max |mass-1| {:.1e}, {} ARPA entries, score err {:.1e}",
                             worst, entries, score_err);
  }
  return out;
}

Outcome FstAlgorithms() {
  Outcome out;
  constexpr double kTol = 1e-9;
  std::mt19937_64 rng(404);
  oracle::RandomFstSpec general;
  oracle::RandomFstSpec functional;
  functional.functional = true;
  for (int i = 0; i < 100; ++i) {
    const Transducer a = oracle::RandomAcyclic(rng, general);
    const Transducer b = oracle::RandomAcyclic(rng, general);
    const auto la = oracle::WeightedLanguage(a);
    std::string diff = oracle::CompareLanguages(
        oracle::ComposeLanguages(la, oracle::WeightedLanguage(b)),
        oracle::WeightedLanguage(Compose(a, b)), kTol);
    out.Check(diff.empty(), fmt::format("compose #{}: {}", i, diff));

    const Transducer f = oracle::RandomAcyclic(rng, functional);
    const auto lf = oracle::WeightedLanguage(f);
    const Transducer det = Determinize(f);
    diff = oracle::CompareLanguages(lf, oracle::WeightedLanguage(det), kTol);
    out.Check(diff.empty() && IsInputDeterministic(det),
              fmt::format("determinize #{}: {}", i, diff));
    diff = oracle::CompareLanguages(lf, oracle::WeightedLanguage(Minimize(det)), kTol);
    out.Check(diff.empty(), fmt::format("minimize #{}: {}", i, diff));
    diff = oracle::CompareLanguages(lf, oracle::WeightedLanguage(RemoveEpsilons(f)), kTol);
    out.Check(diff.empty(), fmt::format("remove_epsilons #{}: {}", i, diff));

    if (la.empty()) {
      bool threw = false;
      try {
        ShortestPath(a, 1);
      } catch (const Error& e) {
        threw = e.code() == ErrorCode::kNoPath;
      }
      out.Check(threw, fmt::format("shortest path #{} should find nothing", i));
    } else {
      double best = la.begin()->second;
      for (const auto& [k, w] : la) best = std::min(best, w);
      const double got = ShortestPath(a, 1)[0].weight.Value();
      out.Check(std::abs(got - best) <= kTol,
                fmt::format("shortest path #{}: {} vs {}", i, got, best));
    }
  }
  if (out.pass) out.detail = "100 machines";
  return out;
}

Outcome JointDecoding() {
  Outcome out;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> gamma(0.0, 2.0);
  std::uniform_real_distribution<double> beta(0.5, 3.0);
  const auto start = Clock::now();
  int with_path = 0;
  for (int i = 0; i < 20; ++i) {
    const oracle::ToyInstance toy = oracle::MakeToyInstance(rng);
    DecodeConfig config;
    config.gamma = gamma(rng);
    config.beta = beta(rng);
    config.beam = std::numeric_limits<double>::infinity();
    const auto want =
        oracle::JointDecode(toy.lattice, toy.lexicon, toy.model, config.gamma, config.beta);
    if (!want.found) {
      bool threw = false;
      try {
        DecodeLattice(toy.lattice, toy.graph.graph, config);
      } catch (const Error& e) {
        threw = e.code() == ErrorCode::kNoPath;
      }
      out.Check(threw, fmt::format("instance {} should have no path", i));
      continue;
    }
    ++with_path;
    const auto hyps = DecodeLattice(toy.lattice, toy.graph.graph, config);
    out.Check(hyps[0].tokens == want.tokens, fmt::format("instance {}: argmax differs", i));
    out.Check(std::abs(hyps[0].total - want.total) <= 1e-9 * (1.0 + std::abs(want.total)),
              fmt::format("instance {}: cost {} vs {}", i, hyps[0].total, want.total));
  }
  const double seconds = Seconds(start);
  out.Check(seconds < 30.0, fmt::format("took {:.1f} s", seconds));
  if (out.pass) {
    out.detail = fmt::format("{} instances with a path, {:.2f} s", with_path, seconds);
  }
  return out;
}

Outcome LexiconCompression() {
  Outcome out;
  const Systems& s = BuiltSystems();
  std::set<std::string> distinct;
  for (const auto& w : CorpusWords(Data().train)) distinct.insert(U32ToUtf8(w));
  out.Check(distinct.size() >= 2000,
            fmt::format("only {} distinct words", distinct.size()));
  const size_t words = s.Get("words").lexicon.size();
  std::vector<size_t> sizes;
  for (int k = 2; k <= 5; ++k) sizes.push_back(s.Get(fmt::format("m{}", k)).lexicon.size());
  const double ratio = 100.0 * static_cast<double>(sizes[0]) / static_cast<double>(words);
  out.Check(ratio <= 25.0, fmt::format("m2/words = {:.1f}%", ratio));
  for (size_t i = 1; i < sizes.size(); ++i) {
    out.Check(sizes[i] >= sizes[i - 1], fmt::format("m{} smaller than m{}", i + 2, i + 1));
  }
  if (out.pass) {
    out.detail = fmt::format("words {} m2 {} m3 {} m4 {} m5 {} (m2/words {:.1f}%)", words,
                             sizes[0], sizes[1], sizes[2], sizes[3], ratio);
  }
  return out;
}

Outcome GraphCompression() {
  Outcome out;
  const Systems& s = BuiltSystems();
  std::string sizes;
  size_t previous = 0;
  for (const auto& sys : s.all) {
    const GraphStats st = ComputeGraphStats(sys.graph.graph);
    const size_t total = st.states + st.arcs;
    out.Check(total > previous, fmt::format("{} is not larger than its predecessor", sys.name));
    previous = total;
    sizes += fmt::format("{}{} {}", sizes.empty() ? "" : ", ", sys.name, total);
  }
  const double reduction = StatesArcsReduction(ComputeGraphStats(s.Get("m2").graph.graph),
                                               ComputeGraphStats(s.Get("words").graph.graph));
  out.Check(reduction >= 20.0, fmt::format("m2 reduction {:.1f}%", reduction));
  out.Check(s.build_seconds < 300.0, fmt::format("build took {:.1f} s", s.build_seconds));
  if (out.pass) {
    out.detail = fmt::format("states+arcs {}; m2 reduction {:.1f}%; built in {:.1f} s", sizes,
                             reduction, s.build_seconds);
  }
  return out;
}

Outcome OpenVocabulary() {
  Outcome out;
  const auto& d = Data();
  const Systems& s = BuiltSystems();
  NoiseSpec noise;
  noise.frames_per_char = 2;
  noise.seed = 808;
  const auto clean = testing::SynthesizeItems(d.test, d.inventory, noise);
  const EvalReport zero = EvaluateSet(clean, s.Get("m2").graph, {});
  out.Check(zero.failed_lines == 0 && zero.wer == 0.0,
            fmt::format("noiseless m2 WER {:.2f}% ({} failed)", zero.wer, zero.failed_lines));

  noise.confusion = 0.1;
  const auto noisy = testing::SynthesizeItems(d.test, d.inventory, noise);
  out.Check(noisy.size() == 200, fmt::format("{} lines", noisy.size()));
  const EvalReport m2 = EvaluateSet(noisy, s.Get("m2").graph, {});
  const EvalReport words = EvaluateSet(noisy, s.Get("words").graph, {});
  const EvalReport greedy = EvaluateGreedy(noisy);
  out.Check(words.oov_rate >= 5.0, fmt::format("word OOV only {:.2f}%", words.oov_rate));
  out.Check(m2.wer < words.wer,
            fmt::format("m2 WER {:.2f}% not below words {:.2f}%", m2.wer, words.wer));
  out.Check(m2.wer < greedy.wer,
            fmt::format("LM WER {:.2f}% not below greedy {:.2f}%", m2.wer, greedy.wer));
  if (out.pass) {
    out.detail = fmt::format(
        "eps=0 WER {:.2f}%; eps=0.1: greedy {:.2f}%, words {:.2f}% (OOV {:.2f}%), m2 {:.2f}%",
        zero.wer, greedy.wer, words.wer, words.oov_rate, m2.wer);
  }
  return out;
}

std::set<std::u32string, std::less<>> Units(const std::vector<std::string>& tokens) {
  std::set<std::u32string, std::less<>> out;
  for (const auto& t : tokens) out.insert(Utf8ToU32(t));
  return out;
}

Outcome UnifiedOov() {
  Outcome out;
  const auto& d = Data();
  std::string detail;
  for (const char* kind : {"words", "m2"}) {
    const bool word = std::string(kind) == "words";
    const auto type = word ? LexiconType::kWord : LexiconType::kMultigram;
    std::vector<MultigramModel> fr_model, en_model;
    for (const auto& m : Multigrams(2)) {
      (m.language_tag() == "fr" ? fr_model : en_model).push_back(m);
    }
    const auto fr = Units(testing::Tokenize(d.fr_train, type, fr_model).lexicon);
    const auto en = Units(testing::Tokenize(d.en_train, type, en_model).lexicon);
    auto merged = fr;
    merged.insert(en.begin(), en.end());
    const auto fr_words = CorpusWords(d.fr_test);
    const auto en_words = CorpusWords(d.en_test);
    const double fr_on_en = OovAndCoverage(fr, en_words).oov_rate;
    const double en_on_fr = OovAndCoverage(en, fr_words).oov_rate;
    const double merged_on_en = OovAndCoverage(merged, en_words).oov_rate;
    const double merged_on_fr = OovAndCoverage(merged, fr_words).oov_rate;
    out.Check(merged_on_en <= fr_on_en && merged_on_fr <= en_on_fr,
              fmt::format("{}: merged OOV above specialized", kind));
    detail += fmt::format("{}{}: fr->en {:.2f}% vs merged {:.2f}%, en->fr {:.2f}% vs merged {:.2f}%",
                          detail.empty() ? "" : "; ", kind, fr_on_en, merged_on_en, en_on_fr,
                          merged_on_fr);
  }
  if (out.pass) out.detail = detail;
  return out;
}

std::string RandomText(std::mt19937_64& rng) {
  static const std::vector<std::string> pool = {"le", "la", "chat", "a", "é", "the"};
  std::string s;
  const size_t n = rng() % 7;
  for (size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += pool[rng() % pool.size()];
  }
  return s;
}

Outcome ErrorRates() {
  Outcome out;
  std::mt19937_64 rng(1010);
  for (int i = 0; i < 50; ++i) {
    std::string ref = RandomText(rng);
    if (ref.empty()) ref = "chat";
    const std::string hyp = RandomText(rng);
    const std::vector<std::pair<std::string, std::string>> pair = {{ref, hyp}};
    const auto rw = WordsOf(ref);
    const auto hw = WordsOf(hyp);
    const double wer = 100.0 * static_cast<double>(oracle::Levenshtein(rw, hw)) /
                       static_cast<double>(rw.size());
    std::vector<std::string> rc, hc;
    for (char32_t c : Utf8ToU32(ref)) rc.push_back(U32ToUtf8(c));
    for (char32_t c : Utf8ToU32(hyp)) hc.push_back(U32ToUtf8(c));
    const double cer = 100.0 * static_cast<double>(oracle::Levenshtein(rc, hc)) /
                       static_cast<double>(rc.size());
    out.Check(WordErrorRate(pair).percent == wer, fmt::format("WER pair {}", i));
    out.Check(CharacterErrorRate(pair).percent == cer, fmt::format("CER pair {}", i));
  }
  for (int i = 0; i < 100; ++i) {
    const auto a = WordsOf(RandomText(rng));
    const auto b = WordsOf(RandomText(rng));
    const auto c = WordsOf(RandomText(rng));
    const size_t ab = EditDistance(a, b).distance;
    out.Check(ab == EditDistance(b, a).distance, fmt::format("symmetry triple {}", i));
    out.Check(EditDistance(a, c).distance <= ab + EditDistance(b, c).distance,
              fmt::format("triangle triple {}", i));
  }
  if (out.pass) out.detail = "50 pairs, 100 triples";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace mgram

int main() {
  using namespace mgram;
  SetLogSink([](LogLevel, std::string_view) {});
  const std::vector<Criterion> criteria = {
      {1, "HSMM forward-backward and Viterbi", HsmmCorrectness},
      {2, "EM monotonicity", EmMonotonicity},
      {3, "9-gram LM validity", LmValidity},
      {4, "FST algorithm correctness", FstAlgorithms},
      {5, "search-graph joint correctness", JointDecoding},
      {6, "lexicon compression", LexiconCompression},
      {7, "graph compression", GraphCompression},
      {8, "end-to-end open vocabulary", OpenVocabulary},
      {9, "unified lexicon OOV", UnifiedOov},
      {10, "WER/CER oracle", ErrorRates},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    fmt::print("{} criterion {}: {} ({}; {:.1f} s)\n", outcome.pass ? "PASS" : "FAIL", c.id,
               c.name, outcome.detail, Seconds(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
