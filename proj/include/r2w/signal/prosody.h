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

#ifndef R2W_SIGNAL_PROSODY_H_
#define R2W_SIGNAL_PROSODY_H_

#include <vector>

#include "r2w/signal/waveform.h"

namespace r2w::signal {

struct PitchConfig {
  int hop_size = 480;
  int window_size = 960;
  double fmin = 60.0;
  double fmax = 500.0;
  // Minimum normalized autocorrelation peak for a voiced frame.
  double voicing_threshold = 0.5;
  // Frames with RMS below this are unvoiced regardless of periodicity.
  double silence_rms = 1e-4;
};

// Frame-level F0 in Hz (0 for unvoiced) from normalized autocorrelation,
// one value per frame of the center-padded framing rule.
std::vector<double> EstimatePitch(const Waveform& wav,
                                  const PitchConfig& config = {});

// Frame-level RMS over center-padded frames.
std::vector<double> FrameRms(const Waveform& wav, int hop_size,
                             int window_size);

}  // namespace r2w::signal

#endif  // R2W_SIGNAL_PROSODY_H_
