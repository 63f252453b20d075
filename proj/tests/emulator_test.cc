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

#include <gtest/gtest.h>

#include <random>

#include "mgram/base/utf8.h"
#include "mgram/emulator/lattice.h"
#include "mgram/eval/metrics.h"
#include "test_util.h"

namespace mgram {
namespace {

using testing::TempDir;

const CharacterInventory kInv({U' ', U'M', U'a', U'b', U'c', U'e', U'i', U'r'});

NoiseSpec Noise(double eps, uint64_t seed = 1, int fpc = 2, double bias = 0.0) {
  NoiseSpec n;
  n.confusion = eps;
  n.seed = seed;
  n.frames_per_char = fpc;
  n.blank_bias = bias;
  return n;
}

size_t ArgMax(std::span<const double> frame) {
  size_t best = 0;
  for (size_t j = 1; j < frame.size(); ++j) {
    if (frame[j] > frame[best]) best = j;
  }
  return best;
}

PosteriorLattice OneHot(const std::vector<std::string>& labels,
                        const std::vector<size_t>& argmax) {
  PosteriorLattice lat(labels);
  for (size_t j : argmax) lat.AddFrame()[j] = 1.0;
  return lat;
}

TEST(SynthesizeLattice, NoiselessFrames) {
  const auto lat = SynthesizeLattice(U"ab", kInv, Noise(0.0));
  ASSERT_EQ(lat.num_frames(), 4u);
  EXPECT_EQ(lat.num_labels(), kInv.size() + 1);
  const size_t a = 1 + kInv.IndexOf(U'a'), b = 1 + kInv.IndexOf(U'b');
  EXPECT_EQ(ArgMax(lat.Frame(0)), a);
  EXPECT_EQ(ArgMax(lat.Frame(1)), 0u);
  EXPECT_EQ(ArgMax(lat.Frame(2)), b);
  EXPECT_EQ(ArgMax(lat.Frame(3)), 0u);
  EXPECT_EQ(GreedyCollapse(lat), U"ab");
}

TEST(SynthesizeLattice, EmptyText) {
  EXPECT_EQ(SynthesizeLattice(U"", kInv, Noise(0.0)).num_frames(), 0u);
}

TEST(SynthesizeLattice, SeededNoiseIsReproducible) {
  const auto a = SynthesizeLattice(U"ab", kInv, Noise(0.4, 99));
  const auto b = SynthesizeLattice(U"ab", kInv, Noise(0.4, 99));
  EXPECT_EQ(LatticeToText(a), LatticeToText(b));
  const auto c = SynthesizeLattice(U"ab", kInv, Noise(0.4, 100));
  EXPECT_NE(LatticeToText(a), LatticeToText(c));
}

TEST(SynthesizeLattice, FramesAreDistributions) {
  std::mt19937_64 rng(2);
  for (double eps : {0.0, 0.1, 0.5, 0.9}) {
    for (double bias : {0.0, 0.3}) {
      const auto lat =
          SynthesizeLattice(U"Merci abba", kInv, Noise(eps, rng(), 3, bias));
      EXPECT_NO_THROW(lat.Validate(1e-9));
      for (size_t t = 0; t < lat.num_frames(); ++t) {
        for (double p : lat.Frame(t)) EXPECT_GE(p, 0.0);
      }
    }
  }
}

TEST(SynthesizeLattice, RejectsBadInput) {
  EXPECT_MGRAM_ERROR(SynthesizeLattice(U"az", kInv, Noise(0.0)),
                     ErrorCode::kInvalidArgument);
  EXPECT_MGRAM_ERROR(SynthesizeLattice(U"a", kInv, Noise(0.0, 1, 1)),
                     ErrorCode::kInvalidArgument);
  EXPECT_MGRAM_ERROR(SynthesizeLattice(U"a", kInv, Noise(1.0)),
                     ErrorCode::kInvalidArgument);
}

TEST(GreedyCollapse, Examples) {
  const auto labels = LatticeLabels(CharacterInventory({U'a', U'b'}));
  EXPECT_EQ(GreedyCollapse(OneHot(labels, {1, 1, 0, 2})), U"ab");
  EXPECT_EQ(GreedyCollapse(OneHot(labels, {0, 0, 0})), U"");
  EXPECT_EQ(GreedyCollapse(SynthesizeLattice(U"Merci", kInv, Noise(0.0))), U"Merci");
}

TEST(GreedyCollapse, NoiselessRoundTrip) {
  std::mt19937_64 rng(3);
  const std::u32string alphabet = U"Mabceir";
  for (int i = 0; i < 100; ++i) {
    std::u32string w;
    const size_t n = rng() % 12;
    for (size_t k = 0; k < n; ++k) w.push_back(alphabet[rng() % alphabet.size()]);
    for (int fpc : {2, 3}) {
      EXPECT_EQ(GreedyCollapse(SynthesizeLattice(w, kInv, Noise(0.0, i, fpc))), w);
    }
  }
}

TEST(GreedyCollapse, CerGrowsWithNoise) {
  std::mt19937_64 rng(4);
  const std::u32string alphabet = U"Mabceir ";
  std::vector<std::u32string> lines;
  for (int i = 0; i < 200; ++i) {
    std::u32string w;
    for (int k = 0; k < 12; ++k) w.push_back(alphabet[rng() % (alphabet.size() - 1)]);
    w[5] = U' ';
    lines.push_back(w);
  }
  double previous = -1.0;
  for (double eps : {0.0, 0.1, 0.2, 0.3}) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (size_t i = 0; i < lines.size(); ++i) {
      const auto lat = SynthesizeLattice(lines[i], kInv, Noise(eps, i + 1, 3));
      pairs.emplace_back(U32ToUtf8(lines[i]), U32ToUtf8(GreedyCollapse(lat)));
    }
    const double cer = CharacterErrorRate(pairs).percent;
    EXPECT_GE(cer, previous) << "eps " << eps;
    previous = cer;
  }
  EXPECT_GT(previous, 0.0);
}

TEST(LatticeFile, RoundTripIsExact) {
  TempDir dir;
  const auto lat = SynthesizeLattice(U"Mer ci", kInv, Noise(0.3, 5, 3, 0.2));
  WriteLattice(lat, dir / "x.lat");
  const auto text = testing::ReadFile(dir / "x.lat");
  EXPECT_EQ(text.substr(0, text.find('\n')), "#frames=18 labels=9");
  const auto back = ReadLattice(dir / "x.lat", lat.labels());
  EXPECT_EQ(back, lat);
}

TEST(LatticeFile, RejectsBadRows) {
  TempDir dir;
  const auto labels = LatticeLabels(CharacterInventory({U'a'}));
  testing::WriteFile(dir / "a.lat", "#frames=1 labels=2\n0.5 0.6\n");
  EXPECT_MGRAM_ERROR(ReadLattice(dir / "a.lat", labels), ErrorCode::kFormat);
  testing::WriteFile(dir / "b.lat", "#frames=2 labels=2\n0.5 0.5\n");
  EXPECT_MGRAM_ERROR(ReadLattice(dir / "b.lat", labels), ErrorCode::kFormat);
  testing::WriteFile(dir / "c.lat", "#frames=1 labels=3\n0.5 0.25 0.25\n");
  EXPECT_MGRAM_ERROR(ReadLattice(dir / "c.lat", labels), ErrorCode::kFormat);
}

TEST(LabelTable, RoundTrip) {
  TempDir dir;
  const auto labels = LatticeLabels(kInv);
  EXPECT_EQ(labels[0], "<blk>");
  EXPECT_EQ(labels[1], "<space>");
  WriteLabelTable(labels, dir / "labels.tsv");
  EXPECT_EQ(ReadLabelTable(dir / "labels.tsv"), labels);
}

TEST(Manifest, ResolvesRelativePaths) {
  TempDir dir;
  std::filesystem::create_directories(dir / "lat");
  const std::vector<ManifestEntry> entries = {
      {"l1", dir / "lat" / "l1.lat", "Merci beaucoup"}, {"l2", dir / "lat" / "l2.lat", "a"}};
  WriteManifest(entries, dir / "manifest.tsv");
  EXPECT_EQ(testing::ReadFile(dir / "manifest.tsv"),
            "l1\tlat/l1.lat\tMerci beaucoup\nl2\tlat/l2.lat\ta\n");
  const auto back = ReadManifest(dir / "manifest.tsv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].lattice, dir / "lat" / "l1.lat");
  EXPECT_EQ(back[1].reference, "a");
}

}  // namespace
}  // namespace mgram
