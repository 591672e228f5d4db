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

#include "r2w/signal/snr.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace r2w::signal {

double Snr::db() const {
  if (kind_ != Kind::kFinite) throw std::logic_error("Snr is not finite");
  return db_;
}

std::string Snr::ToString() const {
  switch (kind_) {
    case Kind::kInfinite:
      return "inf";
    case Kind::kUnmeasurable:
      return "unmeasurable";
    case Kind::kFinite:
      break;
  }
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed << db_;
  return ss.str();
}

double Percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("Percentile: empty input");
  std::sort(values.begin(), values.end());
  const double rank = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

Snr EstimateSnr(const Waveform& wav, const VadSnrConfig& config) {
  if (wav.duration_seconds() < config.min_duration_seconds) {
    throw std::invalid_argument("estimate_snr: input shorter than " +
                                std::to_string(config.min_duration_seconds) +
                                " s");
  }
  const auto frame =
      static_cast<size_t>(std::lround(config.frame_seconds * wav.sample_rate));
  const auto hop =
      static_cast<size_t>(std::lround(config.hop_seconds * wav.sample_rate));
  std::vector<double> powers;
  for (size_t start = 0; start + frame <= wav.size(); start += hop) {
    double acc = 0.0;
    for (size_t i = start; i < start + frame; ++i)
      acc += wav.samples[i] * wav.samples[i];
    powers.push_back(acc / static_cast<double>(frame));
  }
  if (powers.empty()) return Snr::Unmeasurable();

  const double noise_edge = Percentile(powers, config.noise_percentile);
  const double speech_edge = Percentile(powers, config.speech_percentile);
  double noise_sum = 0.0, speech_sum = 0.0;
  size_t noise_n = 0, speech_n = 0;
  for (double p : powers) {
    if (p < noise_edge) {
      noise_sum += p;
      ++noise_n;
    } else if (p > speech_edge) {
      speech_sum += p;
      ++speech_n;
    }
  }
  if (noise_n == 0 || speech_n == 0) return Snr::Unmeasurable();
  const double noise_mean = noise_sum / static_cast<double>(noise_n);
  const double speech_mean = speech_sum / static_cast<double>(speech_n);
  if (noise_mean == 0.0) return Snr::Infinite();
  return Snr::Db(10.0 * std::log10(speech_mean / noise_mean));
}

Snr ResidualSnr(const Waveform& test, const Waveform& reference) {
  if (test.size() != reference.size() ||
      test.sample_rate != reference.sample_rate) {
    throw std::invalid_argument("residual_snr: length or rate mismatch");
  }
  double ref_energy = 0.0, err_energy = 0.0;
  for (size_t i = 0; i < test.size(); ++i) {
    const double d = test.samples[i] - reference.samples[i];
    ref_energy += reference.samples[i] * reference.samples[i];
    err_energy += d * d;
  }
  if (!(ref_energy > 0.0))
    throw std::invalid_argument("residual_snr: reference has zero power");
  if (err_energy == 0.0) return Snr::Infinite();
  return Snr::Db(10.0 * std::log10(ref_energy / err_energy));
}

}  // namespace r2w::signal
