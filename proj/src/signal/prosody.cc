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

#include "r2w/signal/prosody.h"

#include <cmath>
#include <stdexcept>

#include "r2w/signal/spectral.h"

namespace r2w::signal {

namespace {

// Samples of frame t, centered on t * hop with reflection at the edges.
std::vector<double> CenteredFrame(const Waveform& wav, int t, int hop,
                                  int window) {
  std::vector<double> out(static_cast<size_t>(window));
  const long long start = static_cast<long long>(t) * hop - window / 2;
  for (int i = 0; i < window; ++i) {
    out[static_cast<size_t>(i)] = wav.samples[ReflectIndex(start + i, wav.size())];
  }
  return out;
}

}  // namespace

std::vector<double> FrameRms(const Waveform& wav, int hop_size,
                             int window_size) {
  if (wav.empty()) throw std::invalid_argument("FrameRms: empty input");
  const int n = NumFrames(wav.size(), window_size, hop_size, true);
  std::vector<double> rms(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    const auto frame = CenteredFrame(wav, t, hop_size, window_size);
    double acc = 0.0;
    for (double s : frame) acc += s * s;
    rms[static_cast<size_t>(t)] = std::sqrt(acc / window_size);
  }
  return rms;
}

std::vector<double> EstimatePitch(const Waveform& wav,
                                  const PitchConfig& config) {
  if (wav.empty()) throw std::invalid_argument("EstimatePitch: empty input");
  const int n =
      NumFrames(wav.size(), config.window_size, config.hop_size, true);
  const int min_lag =
      std::max(1, static_cast<int>(std::floor(wav.sample_rate / config.fmax)));
  const int max_lag = std::min(
      config.window_size / 2,
      static_cast<int>(std::ceil(wav.sample_rate / config.fmin)));
  std::vector<double> f0(static_cast<size_t>(n), 0.0);
  if (min_lag + 1 >= max_lag) return f0;

  for (int t = 0; t < n; ++t) {
    const auto frame =
        CenteredFrame(wav, t, config.hop_size, config.window_size);
    double energy = 0.0;
    for (double s : frame) energy += s * s;
    if (std::sqrt(energy / config.window_size) < config.silence_rms) continue;

    const int w = config.window_size;
    std::vector<double> r(static_cast<size_t>(max_lag + 2), 0.0);
    for (int lag = min_lag - 1; lag <= max_lag + 1 && lag < w; ++lag) {
      double num = 0.0, e0 = 0.0, e1 = 0.0;
      for (int i = 0; i + lag < w; ++i) {
        num += frame[static_cast<size_t>(i)] * frame[static_cast<size_t>(i + lag)];
        e0 += frame[static_cast<size_t>(i)] * frame[static_cast<size_t>(i)];
        e1 += frame[static_cast<size_t>(i + lag)] *
              frame[static_cast<size_t>(i + lag)];
      }
      const double den = std::sqrt(e0 * e1);
      r[static_cast<size_t>(lag)] = den > 0.0 ? num / den : 0.0;
    }
    int best = min_lag;
    for (int lag = min_lag; lag <= max_lag; ++lag) {
      if (r[static_cast<size_t>(lag)] > r[static_cast<size_t>(best)]) best = lag;
    }
    if (r[static_cast<size_t>(best)] < config.voicing_threshold) continue;
    // Multiples of the period score almost as high as the period itself;
    // take the shortest lag that is a local peak close to the best score.
    const double accept = 0.9 * r[static_cast<size_t>(best)];
    for (int lag = min_lag; lag < best; ++lag) {
      const double v = r[static_cast<size_t>(lag)];
      if (v >= accept && v >= r[static_cast<size_t>(lag - 1)] &&
          v >= r[static_cast<size_t>(lag + 1)]) {
        best = lag;
        break;
      }
    }
    // Parabolic refinement around the peak.
    const double a = r[static_cast<size_t>(best - 1)];
    const double b = r[static_cast<size_t>(best)];
    const double c = r[static_cast<size_t>(best + 1)];
    const double den = a - 2.0 * b + c;
    double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    if (std::abs(shift) > 1.0) shift = 0.0;
    f0[static_cast<size_t>(t)] = wav.sample_rate / (best + shift);
  }
  return f0;
}

}  // namespace r2w::signal
