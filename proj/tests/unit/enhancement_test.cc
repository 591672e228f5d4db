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
#include <random>

#include "r2w/enhancement/enhancer.h"
#include "r2w/signal/mixing.h"
#include "r2w/signal/snr.h"
#include "r2w/util/error.h"
#include "support/synth.h"

namespace r2w::enhance {
namespace {

const std::string kTools = R2W_TEST_TOOL_DIR;

// A tone switched on and off every 0.25 s, so a level-based estimator can
// separate active and inactive frames.
signal::Waveform GatedSine(double seconds) {
  auto wav = testing::Sine(440.0, seconds, 0.5, 24000);
  for (size_t i = 0; i < wav.size(); ++i) {
    if ((i / 6000) % 2 == 1) wav.samples[i] = 0.0;
  }
  return wav;
}

TEST(Identity, BitExact) {
  IdentityEnhancer e;
  auto wav = testing::WhiteNoise(1234, 0.3, 1);
  EXPECT_EQ(e.Enhance(wav).samples, wav.samples);
  EXPECT_TRUE(signal::ResidualSnr(e.Enhance(wav), wav).is_infinite());
  signal::Waveform empty;
  EXPECT_TRUE(e.Enhance(empty).samples.empty());
}

TEST(SpectralSubtraction, SilenceStaysSilent) {
  SpectralSubtractionEnhancer e;
  signal::Waveform silence;
  silence.samples.assign(24000, 0.0);
  double peak = 0.0;
  for (double s : e.Enhance(silence).samples) peak = std::max(peak, std::abs(s));
  EXPECT_LT(peak, 1e-4);
}

TEST(SpectralSubtraction, ImprovesEstimatedSnrOfNoisyTone) {
  SpectralSubtractionEnhancer e;
  const auto clean = GatedSine(2.0);
  const auto noise = testing::WhiteNoise(clean.size(), 0.1, 7);
  const auto noisy = signal::MixAtSnr(clean, noise, 5.0);
  const auto in_snr = signal::EstimateSnr(noisy);
  const auto out_snr = signal::EstimateSnr(e.Enhance(noisy));
  ASSERT_TRUE(in_snr.is_finite());
  ASSERT_TRUE(out_snr.is_finite());
  EXPECT_GT(out_snr.db(), in_snr.db() + 3.0) << in_snr.db() << " -> " << out_snr.db();
}

TEST(SpectralSubtraction, LimitedDistortionOnCleanSpeechLikeInput) {
  SpectralSubtractionEnhancer e;
  for (uint64_t seed : {1, 2, 3}) {
    const auto clean = testing::Babble(1.5, seed);
    const auto r = signal::ResidualSnr(e.Enhance(clean), clean);
    ASSERT_TRUE(r.is_finite());
    EXPECT_GT(r.db(), 15.0) << "seed " << seed;
  }
}

TEST(SpectralSubtraction, RejectsShortInputAndBadConfig) {
  SpectralSubtractionEnhancer e;
  EXPECT_THROW(e.Enhance(testing::WhiteNoise(959, 0.1, 1)), std::invalid_argument);
  SpectralSubtractionConfig c;
  c.floor = 2.0;
  EXPECT_THROW(SpectralSubtractionEnhancer{c}, ConfigError);
}

TEST(Enhancers, PreserveRateAndLength) {
  std::vector<std::unique_ptr<Enhancer>> all;
  all.push_back(std::make_unique<IdentityEnhancer>());
  all.push_back(std::make_unique<SpectralSubtractionEnhancer>());
  all.push_back(std::make_unique<ExternalEnhancer>(kTools + "/enhance_copy.sh"));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    const size_t n = 960 + rng() % 20000;
    auto wav = testing::WhiteNoise(n, 0.2, trial);
    for (const auto& e : all) {
      auto out = e->Enhance(wav);
      ASSERT_EQ(out.size(), n) << e->id();
      ASSERT_EQ(out.sample_rate, wav.sample_rate) << e->id();
      ASSERT_EQ(e->Enhance(wav).samples, out.samples) << e->id() << " is not deterministic";
    }
  }
}

TEST(External, CopyToolMatchesIdentity) {
  const auto wav = testing::Babble(0.5, 4);
  ExternalEnhancer same_rate(kTools + "/enhance_copy.sh", 24000);
  // Exact up to the float32 WAV exchange format.
  const auto out = same_rate.Enhance(wav);
  for (size_t i = 0; i < wav.size(); ++i) {
    ASSERT_EQ(out.samples[i], static_cast<double>(static_cast<float>(wav.samples[i])));
  }
  // Around a 16 kHz tool only the band above 8 kHz is lost.
  ExternalEnhancer resampled(kTools + "/enhance_copy.sh", 16000);
  const auto r = signal::ResidualSnr(resampled.Enhance(wav), wav);
  ASSERT_TRUE(r.is_finite());
  EXPECT_GT(r.db(), 30.0);
}

TEST(External, ContractViolations) {
  EXPECT_THROW(ExternalEnhancer("/nonexistent/enhancer"), ConfigError);
  const auto wav = testing::Babble(0.5, 4);
  EXPECT_THROW(ExternalEnhancer(kTools + "/enhance_half.sh").Enhance(wav), DataError);
  EXPECT_THROW(ExternalEnhancer(kTools + "/enhance_garbage.sh").Enhance(wav), DataError);
  EXPECT_THROW(ExternalEnhancer(kTools + "/enhance_fail.sh").Enhance(wav), DataError);
}

TEST(Factory, Kinds) {
  using nlohmann::json;
  EXPECT_EQ(MakeEnhancer(json{{"kind", "identity"}})->id(), "identity");
  auto ss = MakeEnhancer(json{{"kind", "spectral_subtraction"}, {"oversubtraction", 2.0}});
  EXPECT_NE(ss->id().find("o=2"), std::string::npos);
  EXPECT_NE(MakeEnhancer(json{{"kind", "external"}, {"command", kTools + "/enhance_copy.sh"}}),
            nullptr);
  EXPECT_THROW(MakeEnhancer(json{{"kind", "wiener"}}), ConfigError);
  EXPECT_THROW(MakeEnhancer(json{{"kind", "identity"}, {"extra", 1}}), ConfigError);
  EXPECT_THROW(MakeEnhancer(json{{"kind", "external"}, {"command", "/missing"}}), ConfigError);
  EXPECT_THROW(MakeEnhancer(json::array()), ConfigError);
}

}  // namespace
}  // namespace r2w::enhance
