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
#include <numbers>
#include <random>

#include "r2w/signal/mixing.h"
#include "r2w/signal/prosody.h"
#include "r2w/signal/resample.h"
#include "r2w/signal/snr.h"
#include "r2w/signal/spectral.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/error.h"
#include "support/synth.h"

namespace r2w::signal {
namespace {

namespace fs = std::filesystem;
using r2w::testing::Sine;
using r2w::testing::WhiteNoise;

fs::path TempDir() {
  fs::path dir = fs::temp_directory_path() / "r2w_signal_test";
  fs::create_directories(dir);
  return dir;
}

// Naive DFT magnitude peak; independent of the FFT backend.
int PeakBin(const std::vector<double>& x, int n_fft) {
  int best = 0;
  double best_mag = -1.0;
  for (int k = 1; k < n_fft / 2; ++k) {
    double re = 0, im = 0;
    for (int i = 0; i < n_fft; ++i) {
      re += x[i] * std::cos(2 * std::numbers::pi * k * i / n_fft);
      im -= x[i] * std::sin(2 * std::numbers::pi * k * i / n_fft);
    }
    double mag = std::hypot(re, im);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return best;
}

TEST(WavIo, RoundTripFloatAndPcm) {
  Waveform w = Sine(440.0, 0.1, 0.5, 24000);
  auto dir = TempDir();
  WriteWav(dir / "f.wav", w, WavEncoding::kFloat32);
  Waveform f = ReadWav(dir / "f.wav");
  ASSERT_EQ(f.size(), w.size());
  EXPECT_EQ(f.sample_rate, 24000);
  for (size_t i = 0; i < w.size(); ++i)
    EXPECT_EQ(f.samples[i], static_cast<double>(static_cast<float>(w.samples[i])));

  WriteWav(dir / "p.wav", w, WavEncoding::kPcm16);
  Waveform p = ReadWav(dir / "p.wav");
  ASSERT_EQ(p.size(), w.size());
  for (size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(p.samples[i], w.samples[i], 1.0 / 32767);
}

TEST(WavIo, StereoIsDownmixed) {
  // Hand-built 2-channel 16-bit file: frames (L, R) = (16384, 0), (0, -16384).
  std::string bytes = "RIFF";
  auto u32 = [&](uint32_t v) { bytes.append(reinterpret_cast<char*>(&v), 4); };
  auto u16 = [&](uint16_t v) { bytes.append(reinterpret_cast<char*>(&v), 2); };
  u32(36 + 8);
  bytes += "WAVEfmt ";
  u32(16); u16(1); u16(2); u32(16000); u32(16000 * 4); u16(4); u16(16);
  bytes += "data";
  u32(8);
  u16(16384); u16(0); u16(0); u16(static_cast<uint16_t>(-16384));
  Waveform w = DecodeWav(bytes);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_DOUBLE_EQ(w.samples[0], 0.25);
  EXPECT_DOUBLE_EQ(w.samples[1], -0.25);
}

TEST(WavIo, MalformedInputsAreDataErrors) {
  EXPECT_THROW(DecodeWav("RIFF"), DataError);
  Waveform w = Sine(100.0, 0.01, 0.5, 8000);
  std::string ok = EncodeWav(w, WavEncoding::kPcm16);
  EXPECT_THROW(DecodeWav(ok.substr(0, 44)), DataError);  // header only
  EXPECT_THROW(ReadWav(TempDir() / "missing.wav"), DataError);
}

TEST(LoadAudio, HalvesRateAndKeepsIdentity) {
  auto dir = TempDir();
  Waveform w48 = Sine(300.0, 0.5, 0.5, 48000);
  WriteWav(dir / "a48.wav", w48);
  Waveform out = LoadAudio(dir / "a48.wav", 24000);
  EXPECT_EQ(out.sample_rate, 24000);
  EXPECT_NEAR(static_cast<double>(out.size()), w48.size() / 2.0, 1.0);

  Waveform w24 = Sine(300.0, 0.5, 0.5, 24000);
  WriteWav(dir / "a24.wav", w24, WavEncoding::kFloat32);
  Waveform direct = ReadWav(dir / "a24.wav");
  Waveform loaded = LoadAudio(dir / "a24.wav", 24000);
  EXPECT_EQ(loaded.samples, direct.samples);
}

TEST(LoadAudio, UpsampledSineKeepsItsPeak) {
  auto dir = TempDir();
  WriteWav(dir / "s16.wav", Sine(440.0, 1.0, 0.5, 16000));
  Waveform out = LoadAudio(dir / "s16.wav", 24000);
  ASSERT_EQ(out.size(), 24000u);
  // 4800-point analysis: 5 Hz bins, so 440 Hz sits exactly on bin 88.
  std::vector<double> seg(out.samples.begin() + 9600, out.samples.begin() + 14400);
  const int peak = PeakBin(seg, 4800);
  EXPECT_NEAR(peak, 88, 1);
}

TEST(Resample, PassbandGainIsUnity) {
  Waveform w = Sine(1000.0, 0.5, 0.5, 24000);
  Waveform d = Resample(w, 16000);
  double amp = 0;
  for (size_t i = 2000; i < 6000; ++i) amp = std::max(amp, std::abs(d.samples[i]));
  EXPECT_NEAR(amp, 0.5, 0.01);
}

TEST(Framing, ExhaustiveAgainstBruteForce) {
  for (const auto& cfg : {SpectralConfig::Baseline(), SpectralConfig::RepAligned()}) {
    for (size_t len = 1; len <= 5000; ++len) {
      int brute = 0;
      for (size_t start = 0; start < len; start += cfg.hop_size) ++brute;
      ASSERT_EQ(NumFrames(len, cfg.fft_size, cfg.hop_size, true), brute)
          << "length " << len << " hop " << cfg.hop_size;
    }
  }
  EXPECT_EQ(NumFrames(2048, 1024, 480, false), 1 + (2048 - 1024) / 480);
  EXPECT_THROW(NumFrames(1000, 1024, 480, false), std::invalid_argument);
}

TEST(Framing, ReflectIndexHandlesLongPads) {
  EXPECT_EQ(ReflectIndex(-1, 4), 1u);
  EXPECT_EQ(ReflectIndex(4, 4), 2u);
  EXPECT_EQ(ReflectIndex(-7, 4), 1u);  // -7 -> 7 -> 6-7... period 6: -7 mod 6 = 5 -> 1
  EXPECT_EQ(ReflectIndex(100, 1), 0u);
}

TEST(MelSpectrogram, SilenceSitsOnTheFloor) {
  Waveform silence{std::vector<double>(24000, 0.0), 24000};
  auto mel = ComputeMelSpectrogram(silence, SpectralConfig::RepAligned());
  EXPECT_EQ(mel.n_frames, 50);
  EXPECT_EQ(mel.n_mels, 80);
  for (double v : mel.values) EXPECT_DOUBLE_EQ(v, std::log(1e-5));
}

TEST(MelSpectrogram, FrameCountsFollowHop) {
  Waveform w = WhiteNoise(24000, 0.1, 3);
  EXPECT_EQ(ComputeMelSpectrogram(w, SpectralConfig::RepAligned()).n_frames, 50);
  EXPECT_EQ(ComputeMelSpectrogram(w, SpectralConfig::Baseline()).n_frames, 100);
}

TEST(MelSpectrogram, RejectsRateMismatchAndShortInputWithoutPadding) {
  Waveform w = WhiteNoise(1000, 0.1, 3);
  w.sample_rate = 16000;
  EXPECT_THROW(ComputeMelSpectrogram(w, SpectralConfig::RepAligned()),
               std::invalid_argument);
  SpectralConfig no_pad = SpectralConfig::RepAligned();
  no_pad.center = false;
  EXPECT_THROW(ComputeMelSpectrogram(WhiteNoise(500, 0.1, 3), no_pad),
               std::invalid_argument);
}

// Slaney mel centers computed from first principles.
std::vector<double> OracleMelCenters(int n_mels, double fmax) {
  auto to_mel = [](double f) {
    return f < 1000 ? 3.0 * f / 200.0
                    : 15.0 + 27.0 * std::log(f / 1000.0) / std::log(6.4);
  };
  auto to_hz = [](double m) {
    return m < 15 ? 200.0 * m / 3.0 : 1000.0 * std::pow(6.4, (m - 15.0) / 27.0);
  };
  std::vector<double> centers;
  const double top = to_mel(fmax);
  for (int i = 1; i <= n_mels; ++i) centers.push_back(to_hz(top * i / (n_mels + 1)));
  return centers;
}

TEST(MelSpectrogram, ToneLandsInNearestBand) {
  auto cfg = SpectralConfig::RepAligned();
  auto centers = OracleMelCenters(cfg.n_mels, cfg.fmax);
  for (double freq : {1000.0, 440.0, 3000.0}) {
    int nearest = 0;
    for (int m = 0; m < cfg.n_mels; ++m)
      if (std::abs(centers[m] - freq) < std::abs(centers[nearest] - freq)) nearest = m;
    auto mel = ComputeMelSpectrogram(Sine(freq, 0.5, 0.5, 24000), cfg);
    const int t = mel.n_frames / 2;
    int arg = 0;
    for (int m = 0; m < mel.n_mels; ++m)
      if (mel.at(t, m) > mel.at(t, arg)) arg = m;
    EXPECT_EQ(arg, nearest) << freq << " Hz";
  }
}

TEST(MelSpectrogram, LogDomainScaleCovariance) {
  auto cfg = SpectralConfig::RepAligned();
  Waveform w = WhiteNoise(12000, 0.2, 5);
  Waveform scaled = w;
  const double k = 0.37;
  for (double& s : scaled.samples) s *= k;
  auto a = ComputeMelSpectrogram(w, cfg);
  auto b = ComputeMelSpectrogram(scaled, cfg);
  const double floor = std::log(cfg.log_floor);
  int checked = 0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] == floor || b.values[i] == floor) continue;
    EXPECT_NEAR(b.values[i] - a.values[i], std::log(k), 1e-6);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(MixAtSnr, EqualPowerAtZeroDbKeepsNoise) {
  Waveform clean{{1.0, -1.0, 1.0, -1.0}, 24000};
  Waveform noise{{-1.0, 1.0, 1.0, -1.0}, 24000};
  auto m = MixAtSnrDetailed(clean, noise, 0.0);
  EXPECT_DOUBLE_EQ(m.noise_scale, 1.0);
}

TEST(MixAtSnr, ErrorsOnZeroPowerAndRateMismatch) {
  Waveform clean = WhiteNoise(100, 0.1, 1);
  Waveform zeros{std::vector<double>(100, 0.0), 24000};
  EXPECT_THROW(MixAtSnr(clean, zeros, 5.0), std::invalid_argument);
  EXPECT_THROW(MixAtSnr(zeros, clean, 5.0), std::invalid_argument);
  Waveform other = WhiteNoise(100, 0.1, 2);
  other.sample_rate = 16000;
  EXPECT_THROW(MixAtSnr(clean, other, 5.0), std::invalid_argument);
}

double MeasuredSnr(const Waveform& clean, const Waveform& mix) {
  long double pc = 0, pn = 0;
  for (size_t i = 0; i < clean.size(); ++i) {
    long double n = static_cast<long double>(mix.samples[i]) - clean.samples[i];
    pc += static_cast<long double>(clean.samples[i]) * clean.samples[i];
    pn += n * n;
  }
  return static_cast<double>(10.0L * std::log10(pc / pn));
}

TEST(MixAtSnr, SeededWhiteNoiseHitsFiveDb) {
  Waveform clean = WhiteNoise(24000, 0.3, 11);
  Waveform noise = WhiteNoise(24000, 0.05, 12);
  Waveform mix = MixAtSnr(clean, noise, 5.0);
  EXPECT_NEAR(MeasuredSnr(clean, mix), 5.0, 1e-6);
}

TEST(MixAtSnr, PropertyTargetAndAdditivity) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t len = 100 + rng() % 3000;
    const size_t noise_len = 10 + rng() % 4000;  // shorter or longer than clean
    Waveform clean = WhiteNoise(len, 0.01 + (rng() % 1000) / 1000.0, rng());
    Waveform noise = WhiteNoise(noise_len, 0.01 + (rng() % 1000) / 1000.0, rng());
    const double target = -10.0 + 30.0 * (rng() % 10001) / 10000.0;
    auto m = MixAtSnrDetailed(clean, noise, target, rng());
    ASSERT_NEAR(MeasuredSnr(clean, m.mixture), target, 1e-6);
    for (size_t i = 0; i < len; ++i)
      ASSERT_EQ(m.mixture.samples[i], clean.samples[i] + m.scaled_noise[i]);
  }
}

TEST(MixAtSnr, ShortNoiseIsTiled) {
  auto tiled = FitNoiseLength({1.0, 2.0, 3.0}, 7, 5);
  for (size_t i = 3; i < 7; ++i) EXPECT_EQ(tiled[i], tiled[i - 3]);
  auto cut = FitNoiseLength({1.0, 2.0, 3.0, 4.0}, 2, 5);
  EXPECT_EQ(cut, (std::vector<double>{1.0, 2.0}));
}

TEST(EstimateSnr, BurstInNoiseAtTenDb) {
  // 2 s of white noise with power Pn; a harmonic burst of power 9 Pn in the
  // middle second, so burst frames carry 10x the noise-frame power.
  const int sr = 24000;
  const double pn = 1e-4;
  Waveform w = WhiteNoise(2 * sr, std::sqrt(pn), 21);
  // Three equal-amplitude harmonics: power = 3 * a^2 / 2 = 9 * pn.
  const double a = std::sqrt(6.0 * pn);
  for (int i = sr / 2; i < 3 * sr / 2; ++i) {
    const double t = static_cast<double>(i) / sr;
    for (double f : {200.0, 400.0, 600.0}) w.samples[i] += a * std::sin(2 * std::numbers::pi * f * t);
  }
  Snr snr = EstimateSnr(w);
  ASSERT_TRUE(snr.is_finite());
  EXPECT_NEAR(snr.db(), 10.0, 1.0);

  Waveform half = w;
  for (double& s : half.samples) s *= 0.5;
  EXPECT_EQ(EstimateSnr(half).db(), snr.db());
}

TEST(EstimateSnr, SilenceIsUnmeasurableAndShortInputRejected) {
  Waveform silence{std::vector<double>(24000, 0.0), 24000};
  EXPECT_TRUE(EstimateSnr(silence).is_unmeasurable());
  Waveform short_wav{std::vector<double>(1000, 0.1), 24000};
  EXPECT_THROW(EstimateSnr(short_wav), std::invalid_argument);
}

TEST(ResidualSnr, KnownRatios) {
  Waveform ref = WhiteNoise(5000, 0.3, 31);
  EXPECT_TRUE(ResidualSnr(ref, ref).is_infinite());

  Waveform test = ref;
  for (double& s : test.samples) s *= 1.1;
  EXPECT_NEAR(ResidualSnr(test, ref).db(), 20.0, 1e-9);

  Waveform pert = WhiteNoise(5000, 0.01, 32);
  Waveform sum = ref;
  long double e_ref = 0, e_err = 0;
  for (size_t i = 0; i < sum.size(); ++i) {
    sum.samples[i] += pert.samples[i];
    long double d = static_cast<long double>(sum.samples[i]) - ref.samples[i];
    e_ref += static_cast<long double>(ref.samples[i]) * ref.samples[i];
    e_err += d * d;
  }
  const double expect = static_cast<double>(10.0L * std::log10(e_ref / e_err));
  EXPECT_NEAR(ResidualSnr(sum, ref).db(), expect, 1e-9);

  Waveform zeros{std::vector<double>(5000, 0.0), 24000};
  EXPECT_THROW(ResidualSnr(ref, zeros), std::invalid_argument);
  Waveform shorter = WhiteNoise(10, 0.1, 1);
  EXPECT_THROW(ResidualSnr(shorter, ref), std::invalid_argument);
}

TEST(Prosody, PitchOfAPureToneAndRmsOfSilence) {
  Waveform tone = Sine(200.0, 0.5, 0.3, 24000);
  auto f0 = EstimatePitch(tone);
  ASSERT_EQ(f0.size(), 25u);
  for (size_t t = 2; t + 2 < f0.size(); ++t) EXPECT_NEAR(f0[t], 200.0, 2.0);
  Waveform silence{std::vector<double>(4800, 0.0), 24000};
  for (double v : EstimatePitch(silence)) EXPECT_EQ(v, 0.0);
  for (double v : FrameRms(silence, 480, 960)) EXPECT_EQ(v, 0.0);
  auto rms = FrameRms(tone, 480, 960);
  EXPECT_NEAR(rms[10], 0.3 / std::sqrt(2.0), 1e-3);
}

}  // namespace
}  // namespace r2w::signal
