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

#include "mgram/emulator/lattice.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "mgram/base/error.h"
#include "mgram/base/utf8.h"

namespace mgram {
namespace {

// Uniform double in [0, 1) from the top 53 bits.
double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

size_t PickIndex(std::mt19937_64& rng, size_t n) {
  return std::min(n - 1, static_cast<size_t>(Uniform(rng) * static_cast<double>(n)));
}

// Spreads `mass` evenly over every column except those in `skip`.
void Spread(std::span<double> frame, double mass,
            std::initializer_list<size_t> skip) {
  std::vector<size_t> cols;
  for (size_t j = 0; j < frame.size(); ++j) {
    if (std::find(skip.begin(), skip.end(), j) == skip.end()) cols.push_back(j);
  }
  if (cols.empty()) return;
  const double share = mass / static_cast<double>(cols.size());
  for (size_t j : cols) frame[j] += share;
}

std::string Where(const std::filesystem::path& path, size_t lineno) {
  return fmt::format("{}:{}", path.string(), lineno);
}

}  // namespace

PosteriorLattice::PosteriorLattice(std::vector<std::string> labels)
    : labels_(std::move(labels)) {}

std::span<double> PosteriorLattice::AddFrame() {
  data_.resize(data_.size() + num_labels(), 0.0);
  return MutableFrame(num_frames() - 1);
}

void PosteriorLattice::Validate(double tol) const {
  for (size_t t = 0; t < num_frames(); ++t) {
    double sum = 0.0;
    for (double p : Frame(t)) {
      if (!(p >= 0.0)) {
        Fail(ErrorCode::kFormat, fmt::format("frame {} has a negative entry", t));
      }
      sum += p;
    }
    if (std::fabs(sum - 1.0) > tol) {
      Fail(ErrorCode::kFormat,
           fmt::format("frame {} sums to {:.12g}, not 1", t, sum));
    }
  }
}

std::vector<std::string> LatticeLabels(const CharacterInventory& inventory) {
  std::vector<std::string> labels = {"<blk>"};
  for (char32_t c : inventory.characters()) labels.push_back(CharacterSymbol(c));
  return labels;
}

void ValidateNoiseSpec(const NoiseSpec& noise) {
  if (!(noise.confusion >= 0.0 && noise.confusion < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "confusion mass must lie in [0, 1)");
  }
  if (noise.frames_per_char < 2) {
    Fail(ErrorCode::kInvalidArgument, "frames_per_char must be at least 2");
  }
  if (!(noise.blank_bias >= 0.0 && noise.blank_bias < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "blank_bias must lie in [0, 1)");
  }
}

PosteriorLattice SynthesizeLattice(std::u32string_view text,
                                   const CharacterInventory& inventory,
                                   const NoiseSpec& noise) {
  ValidateNoiseSpec(noise);
  PosteriorLattice lattice(LatticeLabels(inventory));
  const size_t num_chars = inventory.size();
  std::mt19937_64 rng(noise.seed);
  const double eps = noise.confusion;
  for (char32_t c : text) {
    const int index = inventory.IndexOf(c);
    if (index < 0) {
      Fail(ErrorCode::kInvalidArgument,
           "character '" + U32ToUtf8(c) + "' is not in the inventory");
    }
    const size_t truth = static_cast<size_t>(index) + 1;

    std::span<double> peak = lattice.AddFrame();
    // Both draws happen on every peak frame so the random stream does not
    // depend on epsilon.
    const double u = Uniform(rng);
    const double v = Uniform(rng);
    if (u < eps && num_chars >= 2) {
      size_t confuser = 1 + PickIndex(rng, num_chars - 1);
      if (confuser >= truth) ++confuser;
      peak[confuser] = 0.5 + 0.2 * v;
      peak[truth] = 0.3;
      Spread(peak, 1.0 - peak[confuser] - peak[truth], {confuser, truth});
    } else {
      if (num_chars >= 2) PickIndex(rng, num_chars - 1);
      peak[truth] = 1.0 - eps;
      if (num_chars >= 2) {
        Spread(peak, eps, {0, truth});
      } else {
        peak[truth] = 1.0;
      }
    }

    for (int f = 1; f < noise.frames_per_char; ++f) {
      std::span<double> frame = lattice.AddFrame();
      frame[0] = 1.0 - eps;
      frame[truth] = eps * noise.blank_bias;
      const double rest = eps * (1.0 - noise.blank_bias);
      if (num_chars >= 2) {
        Spread(frame, rest, {0, truth});
      } else {
        frame[truth] += rest;
      }
    }
  }
  return lattice;
}

std::u32string GreedyCollapse(const PosteriorLattice& lattice) {
  std::u32string out;
  size_t prev = 0;
  for (size_t t = 0; t < lattice.num_frames(); ++t) {
    std::span<const double> frame = lattice.Frame(t);
    size_t best = 0;
    for (size_t j = 1; j < frame.size(); ++j) {
      if (frame[j] > frame[best]) best = j;
    }
    if (best != 0 && best != prev) {
      out += SymbolCharacter(lattice.labels()[best]);
    }
    prev = best;
  }
  return out;
}

std::string LatticeToText(const PosteriorLattice& lattice) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "#frames={} labels={}\n",
                 lattice.num_frames(), lattice.num_labels());
  for (size_t t = 0; t < lattice.num_frames(); ++t) {
    std::span<const double> frame = lattice.Frame(t);
    for (size_t j = 0; j < frame.size(); ++j) {
      fmt::format_to(std::back_inserter(out), "{}{:.17g}", j == 0 ? "" : " ",
                     frame[j]);
    }
    out.push_back('\n');
  }
  return fmt::to_string(out);
}

void WriteLattice(const PosteriorLattice& lattice,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << LatticeToText(lattice);
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

PosteriorLattice ReadLattice(const std::filesystem::path& path,
                             std::vector<std::string> labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open lattice " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    Fail(ErrorCode::kFormat, Where(path, 1) + ": missing header");
  }
  size_t frames = 0, num_labels = 0;
  if (std::sscanf(line.c_str(), "#frames=%zu labels=%zu", &frames,
                  &num_labels) != 2) {
    Fail(ErrorCode::kFormat,
         Where(path, 1) + ": expected '#frames=<N> labels=<M>'");
  }
  if (num_labels != labels.size()) {
    Fail(ErrorCode::kFormat,
         fmt::format("{}: lattice has {} labels but the label table has {}",
                     Where(path, 1), num_labels, labels.size()));
  }
  PosteriorLattice lattice(std::move(labels));
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lattice.num_frames() == frames) {
      Fail(ErrorCode::kFormat, Where(path, lineno) + ": more frames than declared");
    }
    std::span<double> frame = lattice.AddFrame();
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (size_t j = 0; j < num_labels; ++j) {
      while (p < end && *p == ' ') ++p;
      auto [next, ec] = std::from_chars(p, end, frame[j]);
      if (ec != std::errc()) {
        Fail(ErrorCode::kFormat,
             fmt::format("{}: expected {} probabilities", Where(path, lineno),
                         num_labels));
      }
      p = next;
    }
    while (p < end && (*p == ' ' || *p == '\r')) ++p;
    if (p != end) {
      Fail(ErrorCode::kFormat, Where(path, lineno) + ": trailing data");
    }
    double sum = 0.0;
    for (double x : frame) {
      if (!(x >= 0.0)) {
        Fail(ErrorCode::kFormat, Where(path, lineno) + ": negative probability");
      }
      sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      Fail(ErrorCode::kFormat,
           fmt::format("{}: frame sums to {:.12g}", Where(path, lineno), sum));
    }
  }
  if (lattice.num_frames() != frames) {
    Fail(ErrorCode::kFormat,
         fmt::format("{}: header declares {} frames but {} were read",
                     path.string(), frames, lattice.num_frames()));
  }
  return lattice;
}

void WriteLabelTable(std::span<const std::string> labels,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  for (size_t j = 0; j < labels.size(); ++j) out << labels[j] << '\t' << j << '\n';
}

std::vector<std::string> ReadLabelTable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open label table " + path.string());
  std::vector<std::string> labels;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      Fail(ErrorCode::kFormat, Where(path, lineno) + ": expected symbol<TAB>column");
    }
    size_t column = 0;
    const std::string field = line.substr(tab + 1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), column);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        column != labels.size()) {
      Fail(ErrorCode::kFormat,
           Where(path, lineno) + ": columns must be numbered 0, 1, 2, ...");
    }
    labels.push_back(line.substr(0, tab));
  }
  if (labels.empty() || labels[0] != "<blk>") {
    Fail(ErrorCode::kFormat, path.string() + ": column 0 must be <blk>");
  }
  return labels;
}

void WriteManifest(std::span<const ManifestEntry> entries,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  const std::filesystem::path base = path.parent_path();
  for (const ManifestEntry& e : entries) {
    std::filesystem::path rel = e.lattice;
    if (!base.empty()) {
      auto candidate = e.lattice.lexically_relative(base);
      if (!candidate.empty()) rel = candidate;
    }
    out << e.id << '\t' << rel.generic_string() << '\t' << e.reference << '\n';
  }
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  const std::filesystem::path base = path.parent_path();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t a = line.find('\t');
    const size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) {
      Fail(ErrorCode::kFormat,
           Where(path, lineno) + ": expected id<TAB>lattice<TAB>transcription");
    }
    ManifestEntry e;
    e.id = line.substr(0, a);
    e.lattice = line.substr(a + 1, b - a - 1);
    if (e.lattice.is_relative()) e.lattice = base / e.lattice;
    e.reference = line.substr(b + 1);
    if (!IsValidUtf8(e.reference)) {
      Fail(ErrorCode::kEncoding, Where(path, lineno) + ": invalid UTF-8");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace mgram
