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

#ifndef R2W_VOCODER_GENERATOR_H_
#define R2W_VOCODER_GENERATOR_H_

#include <memory>
#include <vector>

#include "r2w/nn/module.h"
#include "r2w/representation/sequence.h"
#include "r2w/signal/waveform.h"
#include "r2w/vocoder/config.h"

namespace r2w::vocoder {

// Stack of dilated conv pairs with residual connections.
class ResBlock : public nn::Module {
 public:
  ResBlock(int channels, int kernel, const std::vector<int>& dilations,
           nn::Rng& rng);
  nn::Tensor Forward(const nn::Tensor& x) const;

 private:
  std::vector<std::unique_ptr<nn::Conv1dLayer>> dilated_;
  std::vector<std::unique_ptr<nn::Conv1dLayer>> plain_;
};

// Frame features [b, input_dim, n] -> waveform [b, 1, n * hop] in (-1, 1):
// input conv, transposed-conv upsampling stages each followed by the average
// of parallel residual blocks, output conv and tanh.
class Generator : public nn::Module {
 public:
  Generator(const GeneratorConfig& config, nn::Rng& rng);

  nn::Tensor Forward(const nn::Tensor& x) const;

  // Inference without autograd history. Throws std::invalid_argument on a dim
  // mismatch and NumericError on non-finite parameters or output.
  signal::Waveform Generate(const rep::RepresentationSequence& rep) const;

  const GeneratorConfig& config() const { return config_; }

 private:
  GeneratorConfig config_;
  std::unique_ptr<nn::Conv1dLayer> conv_pre_;
  std::vector<std::unique_ptr<nn::ConvTranspose1dLayer>> ups_;
  std::vector<std::vector<std::unique_ptr<ResBlock>>> blocks_;
  std::unique_ptr<nn::Conv1dLayer> conv_post_;
};

// [n, dim] float frames -> [1, dim, n] tensor.
nn::Tensor FramesToInput(const rep::RepresentationSequence& rep, int first,
                         int count);

}  // namespace r2w::vocoder

#endif  // R2W_VOCODER_GENERATOR_H_
