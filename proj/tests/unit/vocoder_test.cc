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
#include <filesystem>
#include <limits>

#include "r2w/nn/checkpoint.h"
#include "r2w/nn/ops.h"
#include "r2w/representation/backend.h"
#include "r2w/representation/extract.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"
#include "r2w/vocoder/trainer.h"
#include "support/gradcheck.h"
#include "support/synth.h"

namespace r2w::vocoder {
namespace {

namespace fs = std::filesystem;
using nn::Tensor;

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "r2w_vocoder_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Tensor RandomMap(const nn::Shape& shape, nn::Rng& rng, double mean = 0.0) {
  std::vector<double> v(static_cast<size_t>(nn::NumElements(shape)));
  for (double& x : v) x = nn::NormalDouble(rng, mean, 1.0);
  return Tensor::FromVector(shape, std::move(v));
}

rep::RepresentationSequence RandomRep(int n, int dim, uint64_t seed) {
  nn::Rng rng(seed);
  rep::RepresentationSequence r;
  r.n_frames = n;
  r.dim = dim;
  for (int i = 0; i < n * dim; ++i) r.frames.push_back(static_cast<float>(nn::NormalDouble(rng, 0, 1)));
  return r;
}

// Independent elementwise evaluations of the adversarial objectives.
double OracleAdvD(const std::vector<Tensor>& real, const std::vector<Tensor>& fake) {
  double total = 0.0;
  for (size_t k = 0; k < real.size(); ++k) {
    double r = 0.0, f = 0.0;
    for (double v : real[k].values()) r += (v - 1.0) * (v - 1.0);
    for (double v : fake[k].values()) f += v * v;
    total += r / real[k].numel() + f / fake[k].numel();
  }
  return total;
}

double OracleAdvG(const std::vector<Tensor>& fake) {
  double total = 0.0;
  for (const auto& t : fake) {
    double f = 0.0;
    for (double v : t.values()) f += (v - 1.0) * (v - 1.0);
    total += f / t.numel();
  }
  return total;
}

double OracleFm(const std::vector<std::vector<Tensor>>& a,
                const std::vector<std::vector<Tensor>>& b) {
  double total = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    for (size_t l = 0; l < a[k].size(); ++l) {
      double s = 0.0;
      for (int64_t i = 0; i < a[k][l].numel(); ++i) {
        s += std::abs(a[k][l].values()[i] - b[k][l].values()[i]);
      }
      total += s / a[k][l].numel();
    }
  }
  return total;
}

TEST(AdvLoss, PerfectAndWorstDiscriminator) {
  std::vector<Tensor> ones{Tensor::Full({2, 1, 7}, 1.0), Tensor::Full({3, 1, 4}, 1.0)};
  std::vector<Tensor> zeros{Tensor::Full({2, 1, 7}, 0.0), Tensor::Full({3, 1, 4}, 0.0)};
  EXPECT_EQ(AdvLossD(ones, zeros).item(), 0.0);
  EXPECT_EQ(AdvLossD(zeros, ones).item(), 2.0 * 2);
  EXPECT_EQ(AdvLossG(ones).item(), 0.0);
  EXPECT_EQ(AdvLossG(zeros).item(), 1.0 * 2);
  EXPECT_THROW(AdvLossD(ones, {zeros[0]}), std::invalid_argument);
  EXPECT_THROW(AdvLossG({}), std::invalid_argument);
}

TEST(AdvLoss, MatchesElementwiseOracle) {
  nn::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Tensor> real, fake;
    for (int k = 0; k < 8; ++k) {
      nn::Shape s{1 + trial % 3, 1, 5 + k * 3};
      real.push_back(RandomMap(s, rng, 0.7));
      fake.push_back(RandomMap(s, rng, 0.2));
    }
    EXPECT_NEAR(AdvLossD(real, fake).item(), OracleAdvD(real, fake), 1e-6);
    EXPECT_NEAR(AdvLossG(fake).item(), OracleAdvG(fake), 1e-6);
  }
}

TEST(FeatureMatching, KnownCasesAndOracle) {
  nn::Rng rng(4);
  std::vector<std::vector<Tensor>> real{{RandomMap({1, 2, 5}, rng), RandomMap({1, 3, 4}, rng),
                                         RandomMap({1, 1, 9}, rng)}};
  EXPECT_EQ(FeatureMatchingLoss(real, real).item(), 0.0);
  std::vector<std::vector<Tensor>> shifted{{}};
  for (const auto& t : real[0]) shifted[0].push_back(nn::AddScalar(t, 0.5));
  EXPECT_NEAR(FeatureMatchingLoss(real, shifted).item(), 1.5, 1e-12);

  std::vector<std::vector<Tensor>> a, b;
  for (int k = 0; k < 4; ++k) {
    a.emplace_back();
    b.emplace_back();
    for (int l = 0; l < 5; ++l) {
      a.back().push_back(RandomMap({2, 3, 4 + l}, rng));
      b.back().push_back(RandomMap({2, 3, 4 + l}, rng));
    }
  }
  EXPECT_NEAR(FeatureMatchingLoss(a, b).item(), OracleFm(a, b), 1e-6);
  b.back().pop_back();
  EXPECT_THROW(FeatureMatchingLoss(a, b), std::invalid_argument);
}

TEST(TotalLoss, WeightedSum) {
  const LossBreakdown l = TotalGeneratorLoss(0.5, 0.1, 0.2);
  EXPECT_EQ(l.total_g, 9.7);
  EXPECT_EQ(l.alpha, 2.0);
  EXPECT_EQ(l.beta, 45.0);
  EXPECT_EQ(TotalGeneratorLoss(0.0, 0.0, 0.0).total_g, 0.0);
  nn::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = nn::UniformDouble(rng, 0, 10), f = nn::UniformDouble(rng, 0, 10),
                 m = nn::UniformDouble(rng, 0, 10);
    EXPECT_NEAR(TotalGeneratorLoss(a, f, m).total_g, a + 2.0 * f + 45.0 * m, 1e-9);
  }
  EXPECT_THROW(TotalGeneratorLoss(std::nan(""), 0, 0), NumericError);
  EXPECT_THROW(TotalGeneratorLoss(0, std::numeric_limits<double>::infinity(), 0), NumericError);
}

TEST(MelLoss, IdentityHalvingAndCompositionOracle) {
  const auto cfg = signal::SpectralConfig::RepAligned();
  auto real = testing::WhiteNoise(9600, 0.3, 1);
  EXPECT_EQ(MelLoss(real, real, cfg), 0.0);

  auto half = real;
  for (double& s : half.samples) s *= 0.5;
  const auto m_half = signal::ComputeMelSpectrogram(half, cfg);
  for (double v : m_half.values) ASSERT_GT(v, std::log(cfg.log_floor));  // all unclamped
  EXPECT_NEAR(MelLoss(real, half, cfg), std::log(2.0), 1e-6);

  auto fake = testing::Babble(0.4, 2);
  const auto ma = signal::ComputeMelSpectrogram(real, cfg);
  const auto mb = signal::ComputeMelSpectrogram(fake, cfg);
  double acc = 0.0;
  for (size_t i = 0; i < ma.values.size(); ++i) acc += std::abs(ma.values[i] - mb.values[i]);
  EXPECT_NEAR(MelLoss(real, fake, cfg), acc / ma.values.size(), 1e-6);

  fake.samples.pop_back();
  EXPECT_THROW(MelLoss(real, fake, cfg), std::invalid_argument);
}

TEST(MelTransform, MatchesFftRoute) {
  for (const auto& cfg : {signal::SpectralConfig::RepAligned(), signal::SpectralConfig::Baseline()}) {
    MelTransform mel(cfg);
    auto a = testing::Babble(0.3, 5);
    auto b = testing::WhiteNoise(a.size(), 0.1, 6);
    std::vector<double> both = a.samples;
    both.insert(both.end(), b.samples.begin(), b.samples.end());
    const auto n = static_cast<int64_t>(a.size());
    Tensor out = mel.Forward(Tensor::FromVector({2, 1, n}, both));
    const auto ma = signal::ComputeMelSpectrogram(a, cfg);
    const auto mb = signal::ComputeMelSpectrogram(b, cfg);
    ASSERT_EQ(out.dim(0), 2 * ma.n_frames);
    ASSERT_EQ(out.dim(1), cfg.n_mels);
    for (size_t i = 0; i < ma.values.size(); ++i) {
      ASSERT_NEAR(out.values()[i], ma.values[i], 1e-6);
      ASSERT_NEAR(out.values()[ma.values.size() + i], mb.values[i], 1e-6);
    }
  }
}

TEST(Generator, OutputLengthLawAndRange) {
  nn::Rng rng(1);
  Generator g(GeneratorConfig::Toy(32), rng);
  for (int n : {1, 7, 50}) {
    auto wav = g.Generate(RandomRep(n, 32, n));
    EXPECT_EQ(wav.size(), static_cast<size_t>(480 * n));
    EXPECT_EQ(wav.sample_rate, 24000);
    for (double s : wav.samples) ASSERT_LE(std::abs(s), 1.0);
  }
  EXPECT_THROW(g.Generate(RandomRep(3, 16, 1)), std::invalid_argument);
}

TEST(Generator, DeterministicForFixedSeed) {
  nn::Rng r1(77), r2(77);
  Generator a(GeneratorConfig::Toy(16), r1), b(GeneratorConfig::Toy(16), r2);
  auto rep = RandomRep(5, 16, 9);
  EXPECT_EQ(a.Generate(rep).samples, b.Generate(rep).samples);
}

TEST(Generator, NonFiniteParametersRejected) {
  nn::Rng rng(1);
  Generator g(GeneratorConfig::Tiny(8), rng);
  g.Parameters()[0].mutable_values()[0] = std::nan("");
  EXPECT_THROW(g.Generate(RandomRep(2, 8, 1)), NumericError);
}

TEST(GeneratorConfig, Validation) {
  auto c = GeneratorConfig::Toy(8);
  c.upsample_factors = {10, 6, 4};
  EXPECT_THROW(c.Validate(), ConfigError);
  c.upsample_factors = {15, 32};
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_NO_THROW(GeneratorConfig::Full().Validate());
  auto d = DiscriminatorConfig::Toy();
  d.scale_groups[1] = 3;
  EXPECT_THROW(d.Validate(), ConfigError);
}

TEST(Discriminator, RealAndFakePassesShareStructure) {
  nn::Rng rng(2);
  Discriminator d(DiscriminatorConfig::Toy(), rng);
  EXPECT_EQ(d.num_subdiscriminators(), 8u);
  auto a = d.Forward(RandomMap({1, 1, 2400}, rng));
  auto b = d.Forward(RandomMap({1, 1, 2400}, rng));
  ASSERT_EQ(a.scores.size(), 8u);
  for (size_t k = 0; k < a.scores.size(); ++k) {
    EXPECT_EQ(a.scores[k].shape(), b.scores[k].shape());
    ASSERT_FALSE(a.features[k].empty());
    ASSERT_EQ(a.features[k].size(), b.features[k].size());
    for (size_t l = 0; l < a.features[k].size(); ++l)
      EXPECT_EQ(a.features[k][l].shape(), b.features[k][l].shape());
  }
}

TEST(Losses, PerfectReconstructionZeroesFmAndMel) {
  nn::Rng rng(3);
  Discriminator d(DiscriminatorConfig::Tiny(), rng);
  MelTransform mel(signal::SpectralConfig::RepAligned());
  Tensor wave = Tensor::FromVector({1, 1, 1920}, testing::Babble(0.08, 1).samples);
  auto real = d.Forward(wave);
  auto fake = d.Forward(wave);
  EXPECT_EQ(FeatureMatchingLoss(real.features, fake.features).item(), 0.0);
  EXPECT_EQ(nn::L1Loss(mel.Forward(wave), mel.Forward(wave)).item(), 0.0);
}

TEST(Gradients, TinyGeneratorTotalLoss) {
  nn::Rng rng(10);
  const int dim = 8;
  Generator g(GeneratorConfig::Tiny(dim), rng);
  Discriminator d(DiscriminatorConfig::Tiny(), rng);
  d.SetRequiresGrad(false);
  ASSERT_LE(g.NumParameters(), 5000);
  // At the N(0, 0.01) init most gradients sit below finite-difference
  // resolution, so the check runs at a larger weight scale.
  for (auto& p : g.Parameters()) {
    for (double& v : p.mutable_values()) v = nn::NormalDouble(rng, 0.0, 0.3);
  }
  MelTransform mel(signal::SpectralConfig::RepAligned());
  const Tensor input = FramesToInput(RandomRep(4, dim, 2), 0, 4);
  auto target = testing::Babble(0.08, 3);
  const Tensor real = Tensor::FromVector({1, 1, 1920}, target.samples);
  Tensor real_mel;
  DiscriminatorOutput d_real;
  {
    nn::NoGradGuard no_grad;
    real_mel = mel.Forward(real);
    d_real = d.Forward(real);
  }
  auto loss = [&] {
    Tensor fake = g.Forward(input);
    auto d_fake = d.Forward(fake);
    return TotalGeneratorLoss(AdvLossG(d_fake.scores),
                              FeatureMatchingLoss(d_real.features, d_fake.features),
                              nn::L1Loss(real_mel, mel.Forward(fake)), LossWeights{});
  };
  auto r = testing::CheckGradients(loss, g.Parameters(), 1e-5, 1e-3, 1e-8);
  EXPECT_GE(r.pass_fraction(), 0.99) << r.worst_where;
  EXPECT_GT(r.checked, 0);
}

// Small but complete training setup for behavioural tests.
VocoderConfig SmallConfig(int64_t steps) {
  VocoderConfig c;
  c.generator = GeneratorConfig::Tiny(8);
  c.discriminator = DiscriminatorConfig::Tiny();
  c.train.steps = steps;
  c.train.crop_frames = 3;
  c.train.learning_rate = 1e-3;
  c.train.seed = 5;
  return c;
}

std::vector<TrainingPair> SmallData() {
  rep::MockBackend backend(1, 2, 8);
  std::vector<TrainingPair> data;
  for (int i = 0; i < 2; ++i) {
    auto wav = testing::Babble(0.15, 20 + i);
    auto feats = rep::Extract(wav, rep::LayerSpec::Single(2), backend);
    data.push_back(MakeTrainingPair("u" + std::to_string(i), feats, wav));
  }
  return data;
}

TEST(Trainer, UpdatesTouchOnlyTheirOwnNetwork) {
  VocoderTrainer tr(SmallConfig(1), "layer2");
  auto data = SmallData();
  auto crops = tr.SampleCrops({&data[0]});
  const uint64_t g0 = nn::ParameterHash(tr.generator());
  const uint64_t d0 = nn::ParameterHash(tr.discriminator());
  tr.UpdateDiscriminator(crops);
  const uint64_t d1 = nn::ParameterHash(tr.discriminator());
  EXPECT_EQ(nn::ParameterHash(tr.generator()), g0);
  EXPECT_NE(d1, d0);
  tr.UpdateGenerator(crops);
  EXPECT_EQ(nn::ParameterHash(tr.discriminator()), d1);
  EXPECT_NE(nn::ParameterHash(tr.generator()), g0);
}

TEST(Trainer, ZeroStepsWritesInitialCheckpointAndEmptyLog) {
  auto dir = FreshDir("zero");
  VocoderTrainer tr(SmallConfig(0), "layer2");
  tr.Train(SmallData(), dir);
  EXPECT_TRUE(fs::exists(dir / "final.ckpt"));
  EXPECT_EQ(ReadFileBytes(dir / "loss_log.csv"), "step,adv_d,adv_g,fm,mel,total_g\n");
}

TEST(Trainer, SameSeedSameLogAndResumeIsExact) {
  auto data = SmallData();
  auto a = FreshDir("run_a"), b = FreshDir("run_b"), c = FreshDir("run_c");
  auto cfg = SmallConfig(6);
  cfg.train.checkpoint_every = 3;
  {
    VocoderTrainer tr(cfg, "layer2");
    tr.Train(data, a);
  }
  {
    VocoderTrainer tr(cfg, "layer2");
    tr.Train(data, b);
  }
  EXPECT_EQ(ReadFileBytes(a / "loss_log.csv"), ReadFileBytes(b / "loss_log.csv"));
  EXPECT_EQ(ReadFileBytes(a / "final.ckpt"), ReadFileBytes(b / "final.ckpt"));

  // Resume from step 3 in a directory holding the first half of the log.
  fs::copy_file(a / "loss_log.csv", c / "loss_log.csv");
  {
    VocoderTrainer tr(cfg, "layer2");
    tr.LoadCheckpoint(a / "step_3.ckpt");
    EXPECT_EQ(tr.step(), 3);
    tr.Train(data, c);
  }
  EXPECT_EQ(ReadFileBytes(c / "loss_log.csv"), ReadFileBytes(a / "loss_log.csv"));
  EXPECT_EQ(ReadFileBytes(c / "final.ckpt"), ReadFileBytes(a / "final.ckpt"));
}

TEST(Trainer, CheckpointCompatibilityIsEnforced) {
  auto dir = FreshDir("compat");
  VocoderTrainer tr(SmallConfig(0), "layer2");
  tr.SaveCheckpoint(dir / "a.ckpt");
  VocoderTrainer other_space(SmallConfig(0), "average");
  EXPECT_THROW(other_space.LoadCheckpoint(dir / "a.ckpt"), ConfigError);
  auto wider = SmallConfig(0);
  wider.generator.initial_channels = 16;
  VocoderTrainer other_arch(wider, "layer2");
  EXPECT_THROW(other_arch.LoadCheckpoint(dir / "a.ckpt"), ConfigError);

  auto loaded = LoadGenerator(dir / "a.ckpt");
  EXPECT_EQ(loaded.layer_tag, "layer2");
  auto rep = RandomRep(3, 8, 4);
  EXPECT_EQ(loaded.generator->Generate(rep).samples, tr.generator().Generate(rep).samples);

  nn::Checkpoint old = nn::ReadCheckpoint(dir / "a.ckpt");
  old.meta["version"] = 0;
  nn::WriteCheckpoint(dir / "old.ckpt", old);
  EXPECT_THROW(tr.LoadCheckpoint(dir / "old.ckpt"), DataError);
  EXPECT_THROW(LoadGenerator(dir / "old.ckpt"), DataError);

  std::string bytes = ReadFileBytes(dir / "a.ckpt");
  AtomicWriteFile(dir / "cut.ckpt", bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(LoadGenerator(dir / "cut.ckpt"), DataError);
}

TEST(Trainer, NonFiniteLossAbortsWithSnapshot) {
  auto dir = FreshDir("nan");
  VocoderTrainer tr(SmallConfig(3), "layer2");
  for (auto& p : tr.discriminator().Parameters()) {
    for (double& v : p.mutable_values()) v = std::numeric_limits<double>::infinity();
  }
  EXPECT_THROW(tr.Train(SmallData(), dir), NumericError);
  EXPECT_TRUE(fs::exists(dir / "diagnostic_step1.ckpt"));
}

}  // namespace
}  // namespace r2w::vocoder
