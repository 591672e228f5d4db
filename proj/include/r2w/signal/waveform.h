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

#ifndef R2W_SIGNAL_WAVEFORM_H_
#define R2W_SIGNAL_WAVEFORM_H_

#include <cstddef>
#include <vector>

namespace r2w::signal {

// Every stage of the pipeline runs at this rate.
inline constexpr int kPipelineSampleRate = 24000;

// Mono audio. Nominal amplitude range is [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kPipelineSampleRate;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws std::invalid_argument on a non-positive rate or non-finite sample.
void ValidateWaveform(const Waveform& wav);

// Mean squared amplitude; 0 for empty input.
double MeanPower(const std::vector<double>& samples);

}  // namespace r2w::signal

#endif  // R2W_SIGNAL_WAVEFORM_H_
