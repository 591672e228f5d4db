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

#include "r2w/acoustic/config.h"

#include "r2w/util/error.h"
#include "r2w/util/json_util.h"

namespace r2w::acoustic {

using nlohmann::json;

void AcousticModelConfig::Validate() const {
  if (inventory_size < 1 || hidden < 1 || encoder_layers < 1 || decoder_layers < 0 ||
      heads < 1 || ffn_filter < 1 || predictor_filter < 1 || variance_bins < 2 ||
      output_dim < 1) {
    throw ConfigError("acoustic.model: sizes out of range");
  }
  if (hidden % heads != 0) {
    throw ConfigError("acoustic.model.hidden must be divisible by heads");
  }
  if (ffn_kernel < 1 || ffn_kernel % 2 == 0 || predictor_kernel < 1 ||
      predictor_kernel % 2 == 0) {
    throw ConfigError("acoustic.model kernels must be odd");
  }
}

AcousticModelConfig AcousticModelConfig::Full() { return AcousticModelConfig{}; }

AcousticModelConfig AcousticModelConfig::Toy(int output_dim) {
  AcousticModelConfig c;
  c.hidden = 32;
  c.encoder_layers = 2;
  c.heads = 2;
  c.ffn_filter = 64;
  c.ffn_kernel = 3;
  c.predictor_filter = 32;
  c.output_dim = output_dim;
  return c;
}

AcousticModelConfig AcousticModelConfig::Tiny(int output_dim) {
  AcousticModelConfig c;
  c.inventory_size = 6;
  c.hidden = 4;
  c.encoder_layers = 1;
  c.decoder_layers = 1;
  c.heads = 2;
  c.ffn_filter = 6;
  c.ffn_kernel = 3;
  c.predictor_filter = 4;
  c.variance_bins = 8;
  c.output_dim = output_dim;
  return c;
}

AcousticConfig AcousticConfig::Toy(int output_dim) {
  AcousticConfig c;
  c.model = AcousticModelConfig::Toy(output_dim);
  c.train.steps = 2000;
  c.train.warmup_steps = 200;
  return c;
}

void to_json(json& j, const AcousticModelConfig& c) {
  j = json{{"inventory_size", c.inventory_size},
           {"hidden", c.hidden},
           {"encoder_layers", c.encoder_layers},
           {"decoder_layers", c.decoder_layers},
           {"heads", c.heads},
           {"ffn_filter", c.ffn_filter},
           {"ffn_kernel", c.ffn_kernel},
           {"predictor_filter", c.predictor_filter},
           {"predictor_kernel", c.predictor_kernel},
           {"variance_bins", c.variance_bins},
           {"output_dim", c.output_dim}};
}

void from_json(const json& j, AcousticModelConfig& c) {
  const std::string where = "acoustic.model";
  CheckKeys(j, where, {"inventory_size", "hidden", "encoder_layers", "decoder_layers", "heads",
                       "ffn_filter", "ffn_kernel", "predictor_filter", "predictor_kernel",
                       "variance_bins", "output_dim"});
  ReadOptional(j, "inventory_size", c.inventory_size, where);
  ReadOptional(j, "hidden", c.hidden, where);
  ReadOptional(j, "encoder_layers", c.encoder_layers, where);
  ReadOptional(j, "decoder_layers", c.decoder_layers, where);
  ReadOptional(j, "heads", c.heads, where);
  ReadOptional(j, "ffn_filter", c.ffn_filter, where);
  ReadOptional(j, "ffn_kernel", c.ffn_kernel, where);
  ReadOptional(j, "predictor_filter", c.predictor_filter, where);
  ReadOptional(j, "predictor_kernel", c.predictor_kernel, where);
  ReadOptional(j, "variance_bins", c.variance_bins, where);
  ReadOptional(j, "output_dim", c.output_dim, where);
}

void to_json(json& j, const AcousticTrainConfig& c) {
  j = json{{"steps", c.steps},
           {"batch_size", c.batch_size},
           {"warmup_steps", c.warmup_steps},
           {"lr_scale", c.lr_scale},
           {"beta1", c.beta1},
           {"beta2", c.beta2},
           {"eps", c.eps},
           {"seed", c.seed},
           {"checkpoint_every", c.checkpoint_every},
           {"weights",
            {{"representation", c.weights.representation},
             {"duration", c.weights.duration},
             {"pitch", c.weights.pitch},
             {"energy", c.weights.energy}}}};
}

void from_json(const json& j, AcousticTrainConfig& c) {
  const std::string where = "acoustic.train";
  CheckKeys(j, where, {"steps", "batch_size", "warmup_steps", "lr_scale", "beta1", "beta2",
                       "eps", "seed", "checkpoint_every", "weights"});
  ReadOptional(j, "steps", c.steps, where);
  ReadOptional(j, "batch_size", c.batch_size, where);
  ReadOptional(j, "warmup_steps", c.warmup_steps, where);
  ReadOptional(j, "lr_scale", c.lr_scale, where);
  ReadOptional(j, "beta1", c.beta1, where);
  ReadOptional(j, "beta2", c.beta2, where);
  ReadOptional(j, "eps", c.eps, where);
  ReadOptional(j, "seed", c.seed, where);
  ReadOptional(j, "checkpoint_every", c.checkpoint_every, where);
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    const std::string ww = where + ".weights";
    CheckKeys(w, ww, {"representation", "duration", "pitch", "energy"});
    ReadOptional(w, "representation", c.weights.representation, ww);
    ReadOptional(w, "duration", c.weights.duration, ww);
    ReadOptional(w, "pitch", c.weights.pitch, ww);
    ReadOptional(w, "energy", c.weights.energy, ww);
  }
  if (c.steps < 0 || c.batch_size < 1 || c.warmup_steps < 1 || c.lr_scale < 0.0 ||
      c.checkpoint_every < 0) {
    throw ConfigError(where + ": steps/batch_size/warmup_steps/lr_scale out of range");
  }
}

void to_json(json& j, const AcousticConfig& c) {
  j = json{{"model", c.model}, {"train", c.train}};
}

void from_json(const json& j, AcousticConfig& c) {
  CheckKeys(j, "acoustic", {"model", "train"});
  if (j.contains("model")) from_json(j.at("model"), c.model);
  if (j.contains("train")) from_json(j.at("train"), c.train);
}

}  // namespace r2w::acoustic
