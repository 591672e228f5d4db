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

#ifndef R2W_SIGNAL_MIXING_H_
#define R2W_SIGNAL_MIXING_H_

#include <cstdint>
#include <vector>

#include "r2w/signal/waveform.h"

namespace r2w::signal {

struct Mixture {
  Waveform mixture;
  // Noise after fitting to the clean length and scaling; mixture equals
  // clean + scaled_noise sample by sample.
  std::vector<double> scaled_noise;
  double noise_scale = 0.0;
};

// Fits `noise` to `length` samples. Longer noise is truncated; shorter noise
// is tiled starting from a circular offset drawn from `seed`.
std::vector<double> FitNoiseLength(const std::vector<double>& noise,
                                   size_t length, uint64_t seed);

// Adds noise scaled so that 10 log10(P_clean / P_noise) equals
// `target_snr_db`, with P the mean squared amplitude over the clean length.
// Throws std::invalid_argument on a rate mismatch or zero-power input.
Mixture MixAtSnrDetailed(const Waveform& clean, const Waveform& noise,
                         double target_snr_db, uint64_t seed = 0);

Waveform MixAtSnr(const Waveform& clean, const Waveform& noise,
                  double target_snr_db, uint64_t seed = 0);

}  // namespace r2w::signal

#endif  // R2W_SIGNAL_MIXING_H_
