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

#ifndef MGRAM_DECODER_DECODER_H_
#define MGRAM_DECODER_DECODER_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mgram/emulator/lattice.h"
#include "mgram/fst/transducer.h"

namespace mgram {

struct DecodeConfig {
  double gamma = 1.0;  // LM scale
  double beta = 1.0;   // word insertion factor
  double beam = 12.0;  // -ln margin; infinity disables pruning
  size_t n_best = 1;
};

// gamma >= 0, beta > 0, beam > 0, n_best >= 1.
void ValidateDecodeConfig(const DecodeConfig& config);

struct Hypothesis {
  std::vector<std::string> tokens;
  std::string text;         // UTF-8
  double total = 0.0;       // acoustic + lm
  double acoustic = 0.0;    // sum of -ln posteriors
  double lm = 0.0;          // gamma * graph weight - words * ln(beta)
};

// Posteriors below this are clamped before taking the log.
inline constexpr double kPosteriorFloor = 1e-12;

// Frame-synchronous token passing over `graph`, whose input labels are
// lattice columns shifted by one. Returns up to n_best hypotheses with
// distinct token sequences, best first.
std::vector<Hypothesis> DecodeLattice(const PosteriorLattice& lattice,
                                      const Transducer& graph,
                                      const DecodeConfig& config);

// Concatenates token spellings; <sp> becomes one space. Leading and trailing
// spaces are dropped.
std::string Detokenize(std::span<const std::string> tokens);

}  // namespace mgram

#endif  // MGRAM_DECODER_DECODER_H_
