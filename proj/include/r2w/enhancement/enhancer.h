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

#ifndef R2W_ENHANCEMENT_ENHANCER_H_
#define R2W_ENHANCEMENT_ENHANCER_H_

#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"
#include "r2w/signal/waveform.h"

namespace r2w::enhance {

// Frozen speech enhancement: same sample rate and length out as in.
// Implementations are immutable after construction.
class Enhancer {
 public:
  virtual ~Enhancer() = default;
  // Stable identity, used in cache keys and reports.
  virtual std::string id() const = 0;
  virtual signal::Waveform Enhance(const signal::Waveform& wav) const = 0;
};

class IdentityEnhancer : public Enhancer {
 public:
  std::string id() const override { return "identity"; }
  signal::Waveform Enhance(const signal::Waveform& wav) const override { return wav; }
};

struct SpectralSubtractionConfig {
  int fft_size = 1024;
  int window_size = 960;
  int hop_size = 240;
  // Per-bin noise magnitude: this percentile over frames.
  double noise_percentile = 20.0;
  double oversubtraction = 1.5;
  // Output magnitude never drops below floor * input magnitude.
  double floor = 0.01;

  void Validate() const;
};

// Magnitude subtraction with the noisy phase, resynthesized by weighted
// overlap-add. invalid_argument on input shorter than one window.
class SpectralSubtractionEnhancer : public Enhancer {
 public:
  explicit SpectralSubtractionEnhancer(const SpectralSubtractionConfig& config = {});
  std::string id() const override;
  signal::Waveform Enhance(const signal::Waveform& wav) const override;

 private:
  SpectralSubtractionConfig config_;
};

// Runs `<command> <in.wav> <out.wav>` on audio resampled to `tool_rate`
// and resamples the result back. ConfigError at construction if the tool is
// missing; DataError on a nonzero exit, unreadable output or an output
// length more than 20 ms off the input.
class ExternalEnhancer : public Enhancer {
 public:
  explicit ExternalEnhancer(std::string command, int tool_rate = 16000);
  std::string id() const override;
  signal::Waveform Enhance(const signal::Waveform& wav) const override;

 private:
  std::string command_;
  int tool_rate_;
  mutable std::mutex mu_;  // one subprocess at a time per instance
};

// {"kind": "identity"} | {"kind": "spectral_subtraction", ...config} |
// {"kind": "external", "command": ..., "tool_rate": 16000}.
std::unique_ptr<Enhancer> MakeEnhancer(const nlohmann::json& config);

}  // namespace r2w::enhance

#endif  // R2W_ENHANCEMENT_ENHANCER_H_
