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

#ifndef R2W_SIGNAL_SNR_H_
#define R2W_SIGNAL_SNR_H_

#include <string>

#include "r2w/signal/waveform.h"

namespace r2w::signal {

// A decibel measurement that may degenerate. kInfinite arises from a zero
// residual; kUnmeasurable from an estimator that cannot separate classes.
class Snr {
 public:
  enum class Kind { kFinite, kInfinite, kUnmeasurable };

  static Snr Db(double db) { return Snr(Kind::kFinite, db); }
  static Snr Infinite() { return Snr(Kind::kInfinite, 0.0); }
  static Snr Unmeasurable() { return Snr(Kind::kUnmeasurable, 0.0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_infinite() const { return kind_ == Kind::kInfinite; }
  bool is_unmeasurable() const { return kind_ == Kind::kUnmeasurable; }
  // Throws std::logic_error unless finite.
  double db() const;
  std::string ToString() const;

 private:
  Snr(Kind kind, double db) : kind_(kind), db_(db) {}
  Kind kind_;
  double db_;
};

// Energy-VAD settings for the reference-free estimator.
struct VadSnrConfig {
  double frame_seconds = 0.025;
  double hop_seconds = 0.010;
  double noise_percentile = 20.0;
  double speech_percentile = 60.0;
  double min_duration_seconds = 0.5;
};

// Frames with power strictly below the noise percentile form the noise
// class, frames strictly above the speech percentile form the speech
// class, and the result is the ratio of the class mean powers. Returns
// Unmeasurable when either class is empty, Infinite when the noise class
// has zero power. Throws std::invalid_argument on input shorter than
// config.min_duration_seconds.
Snr EstimateSnr(const Waveform& wav, const VadSnrConfig& config = {});

// 10 log10(||reference||^2 / ||test - reference||^2). Infinite for a zero
// residual; throws std::invalid_argument on a length/rate mismatch or a
// zero-power reference.
Snr ResidualSnr(const Waveform& test, const Waveform& reference);

// Linear-interpolated percentile (0..100) of an unsorted sample.
double Percentile(std::vector<double> values, double pct);

}  // namespace r2w::signal

#endif  // R2W_SIGNAL_SNR_H_
