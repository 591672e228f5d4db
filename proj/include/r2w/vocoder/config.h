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

#ifndef R2W_VOCODER_CONFIG_H_
#define R2W_VOCODER_CONFIG_H_

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace r2w::vocoder {

struct GeneratorConfig {
  int input_dim = 768;
  std::vector<int> upsample_factors = {10, 6, 4, 2};
  int initial_channels = 512;
  std::vector<int> resblock_kernels = {3, 7, 11};
  std::vector<std::vector<int>> resblock_dilations = {{1, 3, 5}, {1, 3, 5}, {1, 3, 5}};

  // Samples per input frame: product of the upsample factors.
  int hop() const;
  // ConfigError unless the hop is 480, every factor is even and channel
  // widths stay >= 1.
  void Validate() const;

  static GeneratorConfig Full();
  static GeneratorConfig Toy(int input_dim);
  // Under 5k parameters; for finite-difference checks.
  static GeneratorConfig Tiny(int input_dim);
};

struct DiscriminatorConfig {
  std::vector<int> periods = {2, 3, 5, 7, 11};
  // Output channels of the strided period convs, then one stride-1 conv.
  std::vector<int> period_channels = {32, 128, 512, 1024, 1024};
  int num_scales = 3;
  // Scale-discriminator conv stack: out channels and groups per layer.
  std::vector<int> scale_channels = {128, 128, 256, 512, 1024, 1024, 1024};
  std::vector<int> scale_groups = {1, 4, 16, 16, 16, 16, 1};

  void Validate() const;

  static DiscriminatorConfig Full();
  static DiscriminatorConfig Toy();
  static DiscriminatorConfig Tiny();
};

struct LossWeights {
  double alpha = 2.0;  // feature matching
  double beta = 45.0;  // mel
};

struct VocoderTrainConfig {
  int64_t steps = 1000;
  int batch_size = 1;
  int crop_frames = 40;
  double learning_rate = 2e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double lr_decay = 0.999;  // per epoch
  uint64_t seed = 1234;
  int64_t checkpoint_every = 0;  // 0: only the final checkpoint
  LossWeights weights;
};

struct VocoderConfig {
  GeneratorConfig generator;
  DiscriminatorConfig discriminator;
  VocoderTrainConfig train;

  static VocoderConfig Toy(int input_dim);
};

void to_json(nlohmann::json& j, const GeneratorConfig& c);
void from_json(const nlohmann::json& j, GeneratorConfig& c);
void to_json(nlohmann::json& j, const DiscriminatorConfig& c);
void from_json(const nlohmann::json& j, DiscriminatorConfig& c);
void to_json(nlohmann::json& j, const VocoderTrainConfig& c);
void from_json(const nlohmann::json& j, VocoderTrainConfig& c);
void to_json(nlohmann::json& j, const VocoderConfig& c);
void from_json(const nlohmann::json& j, VocoderConfig& c);

}  // namespace r2w::vocoder

#endif  // R2W_VOCODER_CONFIG_H_
