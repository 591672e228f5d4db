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

#include "r2w/signal/waveform.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace r2w::signal {

void ValidateWaveform(const Waveform& wav) {
  if (wav.sample_rate <= 0) {
    throw std::invalid_argument("waveform sample rate must be positive, got " +
                                std::to_string(wav.sample_rate));
  }
  for (size_t i = 0; i < wav.samples.size(); ++i) {
    if (!std::isfinite(wav.samples[i])) {
      throw std::invalid_argument("waveform sample " + std::to_string(i) +
                                  " is not finite");
    }
  }
}

double MeanPower(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

}  // namespace r2w::signal
