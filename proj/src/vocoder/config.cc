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

#include "r2w/vocoder/config.h"

#include "r2w/util/error.h"
#include "r2w/util/json_util.h"

namespace r2w::vocoder {

using nlohmann::json;

int GeneratorConfig::hop() const {
  int h = 1;
  for (int u : upsample_factors) h *= u;
  return h;
}

void GeneratorConfig::Validate() const {
  if (input_dim < 1) throw ConfigError("generator.input_dim must be >= 1");
  if (upsample_factors.empty() || hop() != 480) {
    throw ConfigError("generator.upsample_factors must multiply to 480, got " +
                      std::to_string(hop()));
  }
  for (int u : upsample_factors) {
    if (u < 2 || u % 2 != 0) {
      throw ConfigError("generator.upsample_factors must be even and >= 2");
    }
  }
  if (initial_channels < 1) throw ConfigError("generator.initial_channels must be >= 1");
  if (resblock_kernels.empty() ||
      resblock_kernels.size() != resblock_dilations.size()) {
    throw ConfigError("generator: one dilation set per residual kernel");
  }
  for (size_t i = 0; i < resblock_kernels.size(); ++i) {
    if (resblock_kernels[i] < 1 || resblock_kernels[i] % 2 == 0) {
      throw ConfigError("generator.resblock_kernels must be odd");
    }
    if (resblock_dilations[i].empty()) {
      throw ConfigError("generator.resblock_dilations entries must be nonempty");
    }
    for (int d : resblock_dilations[i]) {
      if (d < 1) throw ConfigError("generator dilations must be >= 1");
    }
  }
}

GeneratorConfig GeneratorConfig::Full() { return GeneratorConfig{}; }

GeneratorConfig GeneratorConfig::Toy(int input_dim) {
  GeneratorConfig c;
  c.input_dim = input_dim;
  c.initial_channels = 64;
  c.resblock_kernels = {3, 5};
  c.resblock_dilations = {{1, 3}, {1, 3}};
  return c;
}

GeneratorConfig GeneratorConfig::Tiny(int input_dim) {
  GeneratorConfig c;
  c.input_dim = input_dim;
  c.initial_channels = 8;
  c.resblock_kernels = {3};
  c.resblock_dilations = {{1, 2}};
  return c;
}

void DiscriminatorConfig::Validate() const {
  if (periods.empty() && num_scales < 1) {
    throw ConfigError("discriminator: need at least one period or scale");
  }
  for (int p : periods) {
    if (p < 1) throw ConfigError("discriminator.periods must be >= 1");
  }
  if (!periods.empty() && period_channels.size() < 2) {
    throw ConfigError("discriminator.period_channels needs >= 2 entries");
  }
  if (num_scales > 0) {
    if (scale_channels.size() < 2 || scale_channels.size() != scale_groups.size()) {
      throw ConfigError("discriminator: scale_channels/scale_groups mismatch");
    }
    int in = 1;
    for (size_t i = 0; i < scale_channels.size(); ++i) {
      const int g = scale_groups[i];
      if (g < 1 || in % g != 0 || scale_channels[i] % g != 0) {
        throw ConfigError("discriminator: scale layer " + std::to_string(i) +
                          " groups do not divide its channels");
      }
      in = scale_channels[i];
    }
  }
}

DiscriminatorConfig DiscriminatorConfig::Full() { return DiscriminatorConfig{}; }

DiscriminatorConfig DiscriminatorConfig::Toy() {
  DiscriminatorConfig c;
  c.period_channels = {8, 16, 32, 32, 32};
  c.scale_channels = {16, 16, 32, 32, 64, 64, 64};
  c.scale_groups = {1, 4, 8, 8, 8, 8, 1};
  return c;
}

DiscriminatorConfig DiscriminatorConfig::Tiny() {
  DiscriminatorConfig c;
  c.periods = {2, 3};
  c.period_channels = {2, 4};
  c.num_scales = 2;
  c.scale_channels = {2, 4, 4};
  c.scale_groups = {1, 2, 1};
  return c;
}

VocoderConfig VocoderConfig::Toy(int input_dim) {
  VocoderConfig c;
  c.generator = GeneratorConfig::Toy(input_dim);
  c.discriminator = DiscriminatorConfig::Toy();
  c.train.steps = 500;
  c.train.crop_frames = 10;
  c.train.learning_rate = 1e-3;
  return c;
}

void to_json(json& j, const GeneratorConfig& c) {
  j = json{{"input_dim", c.input_dim},
           {"upsample_factors", c.upsample_factors},
           {"initial_channels", c.initial_channels},
           {"resblock_kernels", c.resblock_kernels},
           {"resblock_dilations", c.resblock_dilations}};
}

void from_json(const json& j, GeneratorConfig& c) {
  const std::string where = "vocoder.generator";
  CheckKeys(j, where, {"input_dim", "upsample_factors", "initial_channels",
                       "resblock_kernels", "resblock_dilations"});
  ReadOptional(j, "input_dim", c.input_dim, where);
  ReadOptional(j, "upsample_factors", c.upsample_factors, where);
  ReadOptional(j, "initial_channels", c.initial_channels, where);
  ReadOptional(j, "resblock_kernels", c.resblock_kernels, where);
  ReadOptional(j, "resblock_dilations", c.resblock_dilations, where);
}

void to_json(json& j, const DiscriminatorConfig& c) {
  j = json{{"periods", c.periods},
           {"period_channels", c.period_channels},
           {"num_scales", c.num_scales},
           {"scale_channels", c.scale_channels},
           {"scale_groups", c.scale_groups}};
}

void from_json(const json& j, DiscriminatorConfig& c) {
  const std::string where = "vocoder.discriminator";
  CheckKeys(j, where, {"periods", "period_channels", "num_scales",
                       "scale_channels", "scale_groups"});
  ReadOptional(j, "periods", c.periods, where);
  ReadOptional(j, "period_channels", c.period_channels, where);
  ReadOptional(j, "num_scales", c.num_scales, where);
  ReadOptional(j, "scale_channels", c.scale_channels, where);
  ReadOptional(j, "scale_groups", c.scale_groups, where);
}

void to_json(json& j, const VocoderTrainConfig& c) {
  j = json{{"steps", c.steps},
           {"batch_size", c.batch_size},
           {"crop_frames", c.crop_frames},
           {"learning_rate", c.learning_rate},
           {"beta1", c.beta1},
           {"beta2", c.beta2},
           {"lr_decay", c.lr_decay},
           {"seed", c.seed},
           {"checkpoint_every", c.checkpoint_every},
           {"alpha", c.weights.alpha},
           {"beta", c.weights.beta}};
}

void from_json(const json& j, VocoderTrainConfig& c) {
  const std::string where = "vocoder.train";
  CheckKeys(j, where, {"steps", "batch_size", "crop_frames", "learning_rate",
                       "beta1", "beta2", "lr_decay", "seed", "checkpoint_every",
                       "alpha", "beta"});
  ReadOptional(j, "steps", c.steps, where);
  ReadOptional(j, "batch_size", c.batch_size, where);
  ReadOptional(j, "crop_frames", c.crop_frames, where);
  ReadOptional(j, "learning_rate", c.learning_rate, where);
  ReadOptional(j, "beta1", c.beta1, where);
  ReadOptional(j, "beta2", c.beta2, where);
  ReadOptional(j, "lr_decay", c.lr_decay, where);
  ReadOptional(j, "seed", c.seed, where);
  ReadOptional(j, "checkpoint_every", c.checkpoint_every, where);
  ReadOptional(j, "alpha", c.weights.alpha, where);
  ReadOptional(j, "beta", c.weights.beta, where);
  if (c.steps < 0 || c.batch_size < 1 || c.crop_frames < 1 ||
      c.learning_rate <= 0.0 || c.checkpoint_every < 0) {
    throw ConfigError(where + ": steps/batch_size/crop_frames/learning_rate out of range");
  }
}

void to_json(json& j, const VocoderConfig& c) {
  j = json{{"generator", c.generator},
           {"discriminator", c.discriminator},
           {"train", c.train}};
}

void from_json(const json& j, VocoderConfig& c) {
  CheckKeys(j, "vocoder", {"generator", "discriminator", "train"});
  if (j.contains("generator")) from_json(j.at("generator"), c.generator);
  if (j.contains("discriminator")) from_json(j.at("discriminator"), c.discriminator);
  if (j.contains("train")) from_json(j.at("train"), c.train);
}

}  // namespace r2w::vocoder
