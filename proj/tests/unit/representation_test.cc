// Copyright (c) 2026 The r2w Authors
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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "r2w/representation/backend.h"
#include "r2w/representation/extract.h"
#include "r2w/signal/resample.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"
#include "support/synth.h"

namespace r2w::rep {
namespace {

namespace fs = std::filesystem;
using r2w::testing::Babble;
using r2w::testing::WhiteNoise;

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "r2w_rep_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Emits one constant matrix per layer, at 16 kHz with a 20 ms grid.
class ConstantBackend : public RepresentationBackend {
 public:
  explicit ConstantBackend(std::vector<float> values) : values_(std::move(values)) {}
  std::string id() const override { return "constant"; }
  int sample_rate() const override { return 16000; }
  int num_layers() const override { return static_cast<int>(values_.size()) - 1; }
  int dim() const override { return 4; }
  std::vector<RepresentationSequence> Forward(
      const signal::Waveform& wav) const override {
    std::vector<RepresentationSequence> out;
    for (float v : values_) {
      RepresentationSequence s;
      s.dim = 4;
      s.n_frames = ExpectedFrames(wav.size(), wav.sample_rate);
      s.source_rate = wav.sample_rate;
      s.frames.assign(static_cast<size_t>(s.n_frames) * 4, v);
      out.push_back(s);
    }
    return out;
  }

 private:
  std::vector<float> values_;
};

class FailingBackend : public ConstantBackend {
 public:
  FailingBackend() : ConstantBackend({0.0f}) {}
  std::string id() const override { return "failing-backend"; }
  std::vector<RepresentationSequence> Forward(const signal::Waveform&) const override {
    throw std::runtime_error("model crashed");
  }
};

TEST(LayerSpec, TagsRoundTrip) {
  for (const auto& s : SweepLayerSpecs()) EXPECT_EQ(LayerSpec::Parse(s.Tag()), s);
  EXPECT_EQ(SweepLayerSpecs().size(), 6u);
  EXPECT_THROW(LayerSpec::Parse("layer"), ConfigError);
  EXPECT_THROW(LayerSpec::Parse("layerx"), ConfigError);
  EXPECT_THROW(LayerSpec::Parse("mean"), ConfigError);
}

TEST(Extract, AverageOfIdenticalLayersEqualsAnyLayer) {
  ConstantBackend backend({0.7f, 0.7f, 0.7f});
  auto wav = WhiteNoise(24000, 0.1, 1);
  auto avg = Extract(wav, LayerSpec::AverageAll(), backend);
  auto one = Extract(wav, LayerSpec::Single(2), backend);
  EXPECT_EQ(avg.frames, one.frames);
}

TEST(Extract, AverageOfOneAndThreeIsTwo) {
  ConstantBackend backend({1.0f, 3.0f});
  auto avg = Extract(WhiteNoise(12000, 0.1, 1), LayerSpec::AverageAll(), backend);
  for (float v : avg.frames) EXPECT_EQ(v, 2.0f);
}

TEST(Extract, OneSecondGivesFiftyFramesOf768) {
  MockBackend backend(7, 12);
  auto seq = Extract(Babble(1.0, 3), LayerSpec::Single(12), backend);
  EXPECT_EQ(seq.n_frames, 50);
  EXPECT_EQ(seq.dim, 768);
  EXPECT_EQ(seq.source_rate, 24000);
  EXPECT_EQ(seq.hop_samples(), 480);
}

TEST(Extract, LayerOutOfRangeAndBackendFailure) {
  MockBackend backend(7, 3, 8);
  auto wav = Babble(0.2, 1);
  EXPECT_THROW(Extract(wav, LayerSpec::Single(4), backend), ConfigError);
  FailingBackend failing;
  try {
    Extract(wav, LayerSpec::Single(0), failing);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("failing-backend"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("model crashed"), std::string::npos);
  }
}

TEST(Extract, InputIsNotMutated) {
  MockBackend backend(7, 2, 8);
  auto wav = Babble(0.5, 2);
  const auto copy = wav;
  Extract(wav, LayerSpec::AverageAll(), backend);
  EXPECT_EQ(wav.samples, copy.samples);
  EXPECT_EQ(wav.sample_rate, copy.sample_rate);
}

TEST(Extract, AverageMatchesMeanOfSingles) {
  MockBackend backend(11, 12, 64);
  auto wav = Babble(0.6, 4);
  auto avg = Extract(wav, LayerSpec::AverageAll(), backend);
  std::vector<double> mean(avg.frames.size(), 0.0);
  for (int k = 0; k <= 12; ++k) {
    auto s = Extract(wav, LayerSpec::Single(k), backend);
    for (size_t i = 0; i < mean.size(); ++i) mean[i] += s.frames[i] / 13.0;
  }
  for (size_t i = 0; i < mean.size(); ++i) EXPECT_NEAR(avg.frames[i], mean[i], 1e-6);
}

TEST(Extract, FrameCountIsAPureFunctionOfDuration) {
  MockBackend backend(3, 1, 8);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const size_t n = 480 + rng() % (72000 - 480 + 1);  // 0.02 s .. 3 s
    auto seq = Extract(WhiteNoise(n, 0.1, rng()), LayerSpec::Single(1), backend);
    const auto expect = static_cast<int>(std::ceil(n / 480.0));
    ASSERT_EQ(seq.n_frames, expect) << n << " samples";
  }
}

TEST(MockBackend, DeterministicAndLayersDiffer) {
  MockBackend a(42, 2, 16), b(42, 2, 16);
  auto wav = Babble(0.3, 8);
  auto la = a.Forward(signal::Resample(wav, 16000));
  auto lb = b.Forward(signal::Resample(wav, 16000));
  ASSERT_EQ(la.size(), 3u);
  for (size_t k = 0; k < la.size(); ++k) EXPECT_EQ(la[k].frames, lb[k].frames);
  EXPECT_NE(la[0].frames, la[1].frames);
  EXPECT_NE(a.id(), MockBackend(43, 2, 16).id());
}

TEST(MockBackend, SilenceGivesTheFloorResponse) {
  MockBackend backend(9, 2, 16);
  signal::Waveform silence{std::vector<double>(8000, 0.0), 16000};
  auto layers = backend.Forward(silence);
  const double floor = std::log(backend.mel_config().log_floor);
  const int n_mels = backend.mel_config().n_mels;
  for (int k = 0; k <= 2; ++k) {
    const auto& w = backend.weights(k);
    const auto& b = backend.bias(k);
    for (int d = 0; d < 16; ++d) {
      double expect = b[d];
      for (int m = 0; m < n_mels; ++m) expect += floor * w[static_cast<size_t>(m) * 16 + d];
      for (int t = 0; t < layers[k].n_frames; ++t) {
        EXPECT_NEAR(layers[k].at(t, d), expect, 1e-4);
        EXPECT_EQ(layers[k].at(t, d), layers[k].at(0, d));
      }
    }
  }
}

RepresentationSequence RandomSequence(int n, int dim, uint64_t seed) {
  std::mt19937_64 rng(seed);
  RepresentationSequence s;
  s.n_frames = n;
  s.dim = dim;
  for (int i = 0; i < n * dim; ++i)
    s.frames.push_back(static_cast<float>(static_cast<int64_t>(rng() % 20001) - 10000) / 997.0f);
  return s;
}

TEST(RepresentationFile, RoundTripAndSize) {
  auto dir = FreshDir("file");
  auto seq = RandomSequence(50, 768, 1);
  SaveRepresentation(seq, dir / "a.rep");
  // magic(8) + dtype + n_frames + dim + frame_shift + source_rate (4 each).
  EXPECT_EQ(fs::file_size(dir / "a.rep"), 8u + 5u * 4u + 50u * 768u * 4u);
  auto back = LoadRepresentation(dir / "a.rep");
  EXPECT_EQ(back.frames, seq.frames);
  EXPECT_EQ(back.n_frames, 50);
  EXPECT_EQ(back.dim, 768);
  EXPECT_EQ(back.frame_shift_ms, 20.0);
  EXPECT_EQ(back.source_rate, 24000);
}

TEST(RepresentationFile, CorruptAndMismatchedFilesFail) {
  auto dir = FreshDir("corrupt");
  auto seq = RandomSequence(5, 8, 2);
  SaveRepresentation(seq, dir / "a.rep");
  std::string bytes = ReadFileBytes(dir / "a.rep");
  AtomicWriteFile(dir / "short.rep", bytes.substr(0, 20));
  EXPECT_THROW(LoadRepresentation(dir / "short.rep"), DataError);
  AtomicWriteFile(dir / "cut.rep", bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(LoadRepresentation(dir / "cut.rep"), DataError);
  std::string bad = bytes;
  bad[0] = 'X';
  AtomicWriteFile(dir / "magic.rep", bad);
  EXPECT_THROW(LoadRepresentation(dir / "magic.rep"), DataError);
  EXPECT_THROW(LoadRepresentation(dir / "a.rep", 768), DataError);
  EXPECT_NO_THROW(LoadRepresentation(dir / "a.rep", 8));
}

TEST(RepresentationCache, MissThenHitAndKeyedBySpec) {
  auto dir = FreshDir("cache");
  MockBackend backend(5, 3, 8);
  RepresentationCache cache(dir);
  auto wav = Babble(0.4, 6);
  auto first = cache.GetOrExtract(wav, LayerSpec::Single(3), backend);
  auto second = cache.GetOrExtract(wav, LayerSpec::Single(3), backend);
  EXPECT_EQ(cache.misses(), 1);
  EXPECT_EQ(cache.hits(), 1);
  EXPECT_EQ(first.frames, second.frames);
  EXPECT_NE(cache.PathFor(wav, LayerSpec::Single(3), backend),
            cache.PathFor(wav, LayerSpec::AverageAll(), backend));
  auto louder = wav;
  louder.samples[0] += 1e-3;
  EXPECT_NE(cache.PathFor(wav, LayerSpec::Single(3), backend),
            cache.PathFor(louder, LayerSpec::Single(3), backend));

  // A corrupt entry is rebuilt rather than trusted.
  auto path = cache.PathFor(wav, LayerSpec::Single(3), backend);
  AtomicWriteFile(path, "garbage");
  auto rebuilt = cache.GetOrExtract(wav, LayerSpec::Single(3), backend);
  EXPECT_EQ(rebuilt.frames, first.frames);
  EXPECT_EQ(cache.misses(), 2);
}

TEST(ExternalBackend, RunsToolAndReadsLayers) {
  auto dir = FreshDir("external");
  auto layers_dir = dir / "precomputed";
  fs::create_directories(layers_dir);
  auto wav = Babble(0.5, 9);
  const int n16 = ExpectedFrames(8000, 16000);
  for (int k = 0; k <= 2; ++k) {
    auto s = RandomSequence(n16, 8, 10 + k);
    s.source_rate = 16000;
    SaveRepresentation(s, layers_dir / ("layer_" + std::to_string(k) + ".rep"));
  }
  AtomicWriteFile(dir / "model.ckpt", "weights");
  ::setenv("R2W_FAKE_REP_DIR", layers_dir.c_str(), 1);
  ExternalBackend backend(R2W_FIXTURE_DIR "/fake_rep_tool.sh", dir / "model.ckpt", 2, 8);
  auto seq = Extract(wav, LayerSpec::Single(1), backend);
  EXPECT_EQ(seq.n_frames, 25);
  auto expect = LoadRepresentation(layers_dir / "layer_1.rep");
  for (int d = 0; d < 8; ++d) EXPECT_EQ(seq.at(0, d), expect.at(0, d));

  EXPECT_THROW(ExternalBackend("/nonexistent/tool", dir / "model.ckpt", 2, 8), ConfigError);
  EXPECT_THROW(ExternalBackend(R2W_FIXTURE_DIR "/fake_rep_tool.sh", dir / "none.ckpt", 2, 8),
               ConfigError);
}

}  // namespace
}  // namespace r2w::rep
