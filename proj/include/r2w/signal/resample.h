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

#ifndef R2W_SIGNAL_RESAMPLE_H_
#define R2W_SIGNAL_RESAMPLE_H_

#include <cstddef>

#include "r2w/signal/waveform.h"

namespace r2w::signal {

// Band-limited rational resampling with a Kaiser-windowed sinc kernel.
// The output holds ceil(n * target / source) samples. Same-rate input is
// returned unchanged.
Waveform Resample(const Waveform& wav, int target_rate);

size_t ResampledLength(size_t n, int source_rate, int target_rate);

}  // namespace r2w::signal

#endif  // R2W_SIGNAL_RESAMPLE_H_
