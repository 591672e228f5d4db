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

#include "r2w/signal/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace r2w::signal {

namespace {

constexpr double kZeroCrossings = 32.0;
constexpr double kRolloff = 0.97;
constexpr double kKaiserBeta = 8.6;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

size_t ResampledLength(size_t n, int source_rate, int target_rate) {
  const long long g = std::gcd(source_rate, target_rate);
  const long long up = target_rate / g;
  const long long down = source_rate / g;
  return static_cast<size_t>((static_cast<long long>(n) * up + down - 1) /
                             down);
}

Waveform Resample(const Waveform& wav, int target_rate) {
  if (target_rate <= 0 || wav.sample_rate <= 0)
    throw std::invalid_argument("Resample: sample rates must be positive");
  if (wav.sample_rate == target_rate) return wav;

  const long long g = std::gcd(wav.sample_rate, target_rate);
  const long long up = target_rate / g;
  const long long down = wav.sample_rate / g;
  // Cutoff as a fraction of the input Nyquist band.
  const double cutoff =
      std::min(1.0, static_cast<double>(up) / static_cast<double>(down)) *
      kRolloff;
  const double half_width = kZeroCrossings / cutoff;
  const long long taps_half = static_cast<long long>(std::ceil(half_width)) + 1;
  const long long n_taps = 2 * taps_half + 1;
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);

  // table[phase][j] weights input sample base + (j - taps_half).
  std::vector<double> table(static_cast<size_t>(up * n_taps), 0.0);
  for (long long phase = 0; phase < up; ++phase) {
    const double frac = static_cast<double>(phase) / static_cast<double>(up);
    for (long long j = 0; j < n_taps; ++j) {
      const double x = frac - static_cast<double>(j - taps_half);
      if (std::abs(x) > half_width) continue;
      const double r = x / half_width;
      const double window =
          std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) /
          i0_beta;
      table[static_cast<size_t>(phase * n_taps + j)] =
          cutoff * Sinc(cutoff * x) * window;
    }
  }

  const auto n_in = static_cast<long long>(wav.size());
  const size_t n_out = ResampledLength(wav.size(), wav.sample_rate, target_rate);
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(n_out);
  for (size_t m = 0; m < n_out; ++m) {
    const long long pos = static_cast<long long>(m) * down;
    const long long base = pos / up;
    const long long phase = pos % up;
    const double* weights = &table[static_cast<size_t>(phase * n_taps)];
    const long long first = base - taps_half;
    const long long j_lo = std::max<long long>(0, -first);
    const long long j_hi = std::min<long long>(n_taps, n_in - first);
    double acc = 0.0;
    for (long long j = j_lo; j < j_hi; ++j) {
      acc += weights[j] * wav.samples[static_cast<size_t>(first + j)];
    }
    out.samples[m] = acc;
  }
  return out;
}

}  // namespace r2w::signal
