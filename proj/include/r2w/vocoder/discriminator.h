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

#ifndef R2W_VOCODER_DISCRIMINATOR_H_
#define R2W_VOCODER_DISCRIMINATOR_H_

#include <memory>
#include <vector>

#include "r2w/nn/module.h"
#include "r2w/vocoder/config.h"

namespace r2w::vocoder {

// One entry per sub-discriminator: its final score map and its ordered
// intermediate activations (after each nonlinearity, then the score map).
struct DiscriminatorOutput {
  std::vector<nn::Tensor> scores;
  std::vector<std::vector<nn::Tensor>> features;
};

// Views the waveform as `period` interleaved columns (reflection-padded to a
// multiple of the period) and runs the same strided conv stack on each.
class PeriodDiscriminator : public nn::Module {
 public:
  PeriodDiscriminator(int period, const std::vector<int>& channels, nn::Rng& rng);
  void Forward(const nn::Tensor& wave, DiscriminatorOutput& out) const;

 private:
  int period_;
  std::vector<std::unique_ptr<nn::Conv1dLayer>> convs_;
  std::unique_ptr<nn::Conv1dLayer> post_;
};

// Grouped strided conv stack over the raw (or pooled) waveform.
class ScaleDiscriminator : public nn::Module {
 public:
  ScaleDiscriminator(const std::vector<int>& channels,
                     const std::vector<int>& groups, nn::Rng& rng);
  void Forward(const nn::Tensor& wave, DiscriminatorOutput& out) const;

 private:
  std::vector<std::unique_ptr<nn::Conv1dLayer>> convs_;
  std::unique_ptr<nn::Conv1dLayer> post_;
};

// Period sub-discriminators first, then scale sub-discriminators on the
// waveform average-pooled 0, 1, 2, ... times.
class Discriminator : public nn::Module {
 public:
  Discriminator(const DiscriminatorConfig& config, nn::Rng& rng);
  // wave: [b, 1, t].
  DiscriminatorOutput Forward(const nn::Tensor& wave) const;
  size_t num_subdiscriminators() const { return periods_.size() + scales_.size(); }

 private:
  std::vector<std::unique_ptr<PeriodDiscriminator>> periods_;
  std::vector<std::unique_ptr<ScaleDiscriminator>> scales_;
};

}  // namespace r2w::vocoder

#endif  // R2W_VOCODER_DISCRIMINATOR_H_
