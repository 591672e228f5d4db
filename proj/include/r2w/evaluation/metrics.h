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

#ifndef R2W_EVALUATION_METRICS_H_
#define R2W_EVALUATION_METRICS_H_

#include <mutex>
#include <string>
#include <vector>

#include "r2w/signal/spectral.h"
#include "r2w/signal/waveform.h"

namespace r2w::eval {

// Waveform -> fixed-dimension unit-norm vector. Deterministic.
class SpeakerEmbedder {
 public:
  virtual ~SpeakerEmbedder() = default;
  virtual std::string id() const = 0;
  virtual std::vector<double> Embed(const signal::Waveform& wav) const = 0;
};

// Time-averaged log-mel vector with its mean over bands removed, scaled to
// unit norm. Input at another rate is resampled first. DataError for empty
// input or a perfectly flat average spectrum (nothing to normalize).
class MockSpeakerEmbedder : public SpeakerEmbedder {
 public:
  explicit MockSpeakerEmbedder(
      const signal::SpectralConfig& config = signal::SpectralConfig::RepAligned());
  std::string id() const override { return "mock-mean-logmel"; }
  std::vector<double> Embed(const signal::Waveform& wav) const override;

 private:
  signal::SpectralConfig config_;
};

// Cosine of the two embeddings, clamped to [-1, 1]. DataError on empty
// input; NumericError if the embedder breaks the unit-norm contract.
double SpeakerSimilarity(const signal::Waveform& a, const signal::Waveform& b,
                         const SpeakerEmbedder& embedder);

// Objective quality score of `test` against `reference`.
class QualityTool {
 public:
  virtual ~QualityTool() = default;
  virtual std::string id() const = 0;
  virtual double Score(const signal::Waveform& reference, const signal::Waveform& test) const = 0;
};

inline constexpr double kMosLqoMin = 1.0;
inline constexpr double kMosLqoMax = 4.75;

// Accepts a line "MOS-LQO: <x>" (last one wins) or output that is a bare
// number. DataError if nothing parses or the value is outside
// [kMosLqoMin, kMosLqoMax].
double ParseMosLqo(const std::string& tool_output);

// Runs `<command> <reference.wav> <test.wav>` and parses its stdout.
// ConfigError at construction if the tool is missing; DataError on a
// nonzero exit or bad output.
class ExternalQualityTool : public QualityTool {
 public:
  explicit ExternalQualityTool(std::string command);
  std::string id() const override { return "external:" + command_; }
  double Score(const signal::Waveform& reference, const signal::Waveform& test) const override;

 private:
  std::string command_;
  mutable std::mutex mu_;
};

}  // namespace r2w::eval

#endif  // R2W_EVALUATION_METRICS_H_
