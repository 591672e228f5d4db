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

#ifndef R2W_ACOUSTIC_CONFIG_H_
#define R2W_ACOUSTIC_CONFIG_H_

#include <cstdint>

#include "json.hpp"

namespace r2w::acoustic {

struct AcousticModelConfig {
  int64_t inventory_size = 41;
  int hidden = 256;
  int encoder_layers = 4;
  // 0 keeps the decoder to the output projection alone.
  int decoder_layers = 0;
  int heads = 2;
  int ffn_filter = 1024;
  int ffn_kernel = 9;
  int predictor_filter = 256;
  int predictor_kernel = 3;
  int variance_bins = 256;
  int output_dim = 768;

  // ConfigError on non-positive sizes, even kernels or a hidden width not
  // divisible by the head count.
  void Validate() const;

  static AcousticModelConfig Full();
  static AcousticModelConfig Toy(int output_dim);
  // A few thousand parameters; for finite-difference checks.
  static AcousticModelConfig Tiny(int output_dim);
};

struct AcousticLossWeights {
  double representation = 1.0;
  double duration = 1.0;
  double pitch = 1.0;
  double energy = 1.0;
};

struct AcousticTrainConfig {
  int64_t steps = 1000;
  int batch_size = 1;
  // Inverse-square-root schedule: lr = lr_scale * min(s^-0.5, s * warmup^-1.5).
  // lr_scale 0 means hidden^-0.5.
  int64_t warmup_steps = 4000;
  double lr_scale = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
  uint64_t seed = 1234;
  int64_t checkpoint_every = 0;
  AcousticLossWeights weights;
};

struct AcousticConfig {
  AcousticModelConfig model;
  AcousticTrainConfig train;

  // Toy model, 2000 steps, short warmup.
  static AcousticConfig Toy(int output_dim);
};

void to_json(nlohmann::json& j, const AcousticModelConfig& c);
void from_json(const nlohmann::json& j, AcousticModelConfig& c);
void to_json(nlohmann::json& j, const AcousticTrainConfig& c);
void from_json(const nlohmann::json& j, AcousticTrainConfig& c);
void to_json(nlohmann::json& j, const AcousticConfig& c);
void from_json(const nlohmann::json& j, AcousticConfig& c);

}  // namespace r2w::acoustic

#endif  // R2W_ACOUSTIC_CONFIG_H_
