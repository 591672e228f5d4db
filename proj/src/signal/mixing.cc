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

#include "r2w/signal/mixing.h"

#include <cmath>
#include <random>
#include <stdexcept>

namespace r2w::signal {

std::vector<double> FitNoiseLength(const std::vector<double>& noise,
                                   size_t length, uint64_t seed) {
  if (noise.empty()) throw std::invalid_argument("noise is empty");
  if (noise.size() >= length) {
    return {noise.begin(), noise.begin() + static_cast<long>(length)};
  }
  std::mt19937_64 rng(seed);
  const size_t offset = static_cast<size_t>(rng() % noise.size());
  std::vector<double> out(length);
  for (size_t i = 0; i < length; ++i) out[i] = noise[(offset + i) % noise.size()];
  return out;
}

Mixture MixAtSnrDetailed(const Waveform& clean, const Waveform& noise,
                         double target_snr_db, uint64_t seed) {
  if (clean.sample_rate != noise.sample_rate) {
    throw std::invalid_argument("mix_at_snr: sample-rate mismatch (" +
                                std::to_string(clean.sample_rate) + " vs " +
                                std::to_string(noise.sample_rate) + ")");
  }
  if (!std::isfinite(target_snr_db))
    throw std::invalid_argument("mix_at_snr: target SNR must be finite");
  const double clean_power = MeanPower(clean.samples);
  if (!(clean_power > 0.0))
    throw std::invalid_argument("mix_at_snr: clean signal has zero power");
  if (noise.empty())
    throw std::invalid_argument("mix_at_snr: noise signal is empty");

  std::vector<double> fitted = FitNoiseLength(noise.samples, clean.size(), seed);
  const double noise_power = MeanPower(fitted);
  if (!(noise_power > 0.0))
    throw std::invalid_argument("mix_at_snr: noise has zero power");

  Mixture out;
  out.noise_scale = std::sqrt(clean_power /
                              (noise_power * std::pow(10.0, target_snr_db / 10.0)));
  out.scaled_noise = std::move(fitted);
  for (double& s : out.scaled_noise) s *= out.noise_scale;
  out.mixture.sample_rate = clean.sample_rate;
  out.mixture.samples.resize(clean.size());
  for (size_t i = 0; i < clean.size(); ++i) {
    out.mixture.samples[i] = clean.samples[i] + out.scaled_noise[i];
  }
  return out;
}

Waveform MixAtSnr(const Waveform& clean, const Waveform& noise,
                  double target_snr_db, uint64_t seed) {
  return MixAtSnrDetailed(clean, noise, target_snr_db, seed).mixture;
}

}  // namespace r2w::signal
