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

#ifndef R2W_REPRESENTATION_BACKEND_H_
#define R2W_REPRESENTATION_BACKEND_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "r2w/representation/sequence.h"
#include "r2w/signal/spectral.h"
#include "r2w/signal/waveform.h"

namespace r2w::rep {

// A frozen speech model exposing its hidden states. Forward() receives audio
// already at sample_rate() and returns layers 0..num_layers(), all with the
// same shape. Implementations must be deterministic and must not keep
// mutable state across calls.
class RepresentationBackend {
 public:
  virtual ~RepresentationBackend() = default;

  // Stable identity; part of the cache key.
  virtual std::string id() const = 0;
  virtual int sample_rate() const = 0;
  // Index of the last layer; Forward() returns num_layers() + 1 matrices.
  virtual int num_layers() const = 0;
  virtual int dim() const = 0;
  virtual std::vector<RepresentationSequence> Forward(
      const signal::Waveform& wav) const = 0;
};

// Test double: layer k is a fixed seeded affine map of the 80-band log-mel
// of the 16 kHz input at a 20 ms hop.
class MockBackend : public RepresentationBackend {
 public:
  MockBackend(uint64_t seed, int num_layers, int dim = kDefaultRepDim);

  std::string id() const override;
  int sample_rate() const override { return 16000; }
  int num_layers() const override { return num_layers_; }
  int dim() const override { return dim_; }
  std::vector<RepresentationSequence> Forward(
      const signal::Waveform& wav) const override;

  const signal::SpectralConfig& mel_config() const { return mel_config_; }
  const std::vector<double>& weights(int layer) const {
    return weights_[static_cast<size_t>(layer)];
  }
  const std::vector<double>& bias(int layer) const {
    return biases_[static_cast<size_t>(layer)];
  }

 private:
  uint64_t seed_;
  int num_layers_;
  int dim_;
  signal::SpectralConfig mel_config_;
  // Per layer: weights [n_mels, dim] then bias [dim].
  std::vector<std::vector<double>> weights_;
  std::vector<std::vector<double>> biases_;
};

// Adapter for a real pretrained model run out of process:
//   <command> <checkpoint> <input.wav> <output_dir>
// The command reads 16 kHz float WAV and writes layer_<k>.rep for every k in
// 0..num_layers in the representation file format.
class ExternalBackend : public RepresentationBackend {
 public:
  ExternalBackend(std::string command, std::filesystem::path checkpoint,
                  int num_layers, int dim);

  std::string id() const override;
  int sample_rate() const override { return 16000; }
  int num_layers() const override { return num_layers_; }
  int dim() const override { return dim_; }
  std::vector<RepresentationSequence> Forward(
      const signal::Waveform& wav) const override;

 private:
  std::string command_;
  std::filesystem::path checkpoint_;
  int num_layers_;
  int dim_;
};

}  // namespace r2w::rep

#endif  // R2W_REPRESENTATION_BACKEND_H_
