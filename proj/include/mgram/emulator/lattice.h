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

#ifndef MGRAM_EMULATOR_LATTICE_H_
#define MGRAM_EMULATOR_LATTICE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgram/text/corpus.h"

namespace mgram {

// Frame-level label posteriors. Column 0 is the blank; column j > 0 is the
// j-th inventory character.
class PosteriorLattice {
 public:
  PosteriorLattice() = default;
  explicit PosteriorLattice(std::vector<std::string> labels);

  size_t num_frames() const { return num_labels() == 0 ? 0 : data_.size() / num_labels(); }
  size_t num_labels() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::span<const double> Frame(size_t t) const {
    return {data_.data() + t * num_labels(), num_labels()};
  }
  std::span<double> MutableFrame(size_t t) {
    return {data_.data() + t * num_labels(), num_labels()};
  }
  // Appends a zeroed frame and returns it.
  std::span<double> AddFrame();

  // Throws kFormat if any frame is negative or does not sum to 1 within tol.
  void Validate(double tol = 1e-9) const;

  bool operator==(const PosteriorLattice&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> data_;
};

// <blk> followed by the inventory character symbols.
std::vector<std::string> LatticeLabels(const CharacterInventory& inventory);

struct NoiseSpec {
  double confusion = 0.0;  // epsilon, in [0, 1)
  int frames_per_char = 2;
  double blank_bias = 0.0;  // in [0, 1)
  uint64_t seed = 0;
};

void ValidateNoiseSpec(const NoiseSpec& noise);

// Each character yields one peak frame followed by frames_per_char - 1 blank
// frames. With probability epsilon the peak frame is a confusion: a random
// other character takes 0.5 to 0.7 of the mass and the true one keeps 0.3.
// Otherwise the true character takes 1 - epsilon and the rest is spread over
// the other characters. Blank frames give 1 - epsilon to the blank,
// epsilon * blank_bias to the true character and spread the remainder.
PosteriorLattice SynthesizeLattice(std::u32string_view text,
                                   const CharacterInventory& inventory,
                                   const NoiseSpec& noise);

// Per-frame argmax (lowest column on ties), repeats merged, blanks removed.
std::u32string GreedyCollapse(const PosteriorLattice& lattice);

// `#frames=N labels=M` then one space-separated row per frame.
std::string LatticeToText(const PosteriorLattice& lattice);
void WriteLattice(const PosteriorLattice& lattice,
                  const std::filesystem::path& path);
PosteriorLattice ReadLattice(const std::filesystem::path& path,
                             std::vector<std::string> labels);

// `symbol<TAB>column` per line.
void WriteLabelTable(std::span<const std::string> labels,
                     const std::filesystem::path& path);
std::vector<std::string> ReadLabelTable(const std::filesystem::path& path);

struct ManifestEntry {
  std::string id;
  std::filesystem::path lattice;  // resolved against the manifest directory
  std::string reference;          // UTF-8 transcription
};

// `id<TAB>lattice_path<TAB>transcription` per line.
void WriteManifest(std::span<const ManifestEntry> entries,
                   const std::filesystem::path& path);
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path);

}  // namespace mgram

#endif  // MGRAM_EMULATOR_LATTICE_H_
