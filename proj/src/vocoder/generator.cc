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

#include "r2w/vocoder/generator.h"

#include <cmath>
#include <stdexcept>

#include "r2w/nn/ops.h"
#include "r2w/util/error.h"

namespace r2w::vocoder {

using nn::Tensor;

namespace {

constexpr double kInitStd = 0.01;
constexpr double kSlope = 0.1;

int SamePadding(int kernel, int dilation) { return (kernel * dilation - dilation) / 2; }

int StageChannels(const GeneratorConfig& c, size_t stage) {
  return std::max(1, c.initial_channels >> (stage + 1));
}

}  // namespace

ResBlock::ResBlock(int channels, int kernel, const std::vector<int>& dilations,
                   nn::Rng& rng) {
  for (size_t i = 0; i < dilations.size(); ++i) {
    const int d = dilations[i];
    dilated_.push_back(std::make_unique<nn::Conv1dLayer>(
        channels, channels, kernel,
        nn::Conv1dOptions{.padding = SamePadding(kernel, d), .dilation = d}, rng));
    plain_.push_back(std::make_unique<nn::Conv1dLayer>(
        channels, channels, kernel,
        nn::Conv1dOptions{.padding = SamePadding(kernel, 1)}, rng));
    dilated_.back()->InitNormal(kInitStd, rng);
    plain_.back()->InitNormal(kInitStd, rng);
    RegisterModule("convs1." + std::to_string(i), dilated_.back().get());
    RegisterModule("convs2." + std::to_string(i), plain_.back().get());
  }
}

Tensor ResBlock::Forward(const Tensor& x) const {
  Tensor out = x;
  for (size_t i = 0; i < dilated_.size(); ++i) {
    Tensor t = dilated_[i]->Forward(nn::LeakyRelu(out, kSlope));
    t = plain_[i]->Forward(nn::LeakyRelu(t, kSlope));
    out = nn::Add(t, out);
  }
  return out;
}

Generator::Generator(const GeneratorConfig& config, nn::Rng& rng)
    : config_(config) {
  config_.Validate();
  conv_pre_ = std::make_unique<nn::Conv1dLayer>(
      config_.input_dim, config_.initial_channels, 7,
      nn::Conv1dOptions{.padding = 3}, rng);
  RegisterModule("conv_pre", conv_pre_.get());
  int in_ch = config_.initial_channels;
  for (size_t i = 0; i < config_.upsample_factors.size(); ++i) {
    const int u = config_.upsample_factors[i];
    const int out_ch = StageChannels(config_, i);
    ups_.push_back(std::make_unique<nn::ConvTranspose1dLayer>(
        in_ch, out_ch, 2 * u, u, u / 2, rng));
    ups_.back()->InitNormal(kInitStd, rng);
    RegisterModule("ups." + std::to_string(i), ups_.back().get());
    blocks_.emplace_back();
    for (size_t j = 0; j < config_.resblock_kernels.size(); ++j) {
      blocks_.back().push_back(std::make_unique<ResBlock>(
          out_ch, config_.resblock_kernels[j], config_.resblock_dilations[j], rng));
      RegisterModule("resblocks." + std::to_string(i) + "." + std::to_string(j),
                     blocks_.back().back().get());
    }
    in_ch = out_ch;
  }
  conv_post_ = std::make_unique<nn::Conv1dLayer>(
      in_ch, 1, 7, nn::Conv1dOptions{.padding = 3}, rng);
  RegisterModule("conv_post", conv_post_.get());
}

Tensor Generator::Forward(const Tensor& x) const {
  if (x.rank() != 3 || x.dim(1) != config_.input_dim) {
    throw std::invalid_argument("Generator: expected [b, " +
                                std::to_string(config_.input_dim) + ", n], got " +
                                nn::ShapeToString(x.shape()));
  }
  Tensor h = conv_pre_->Forward(x);
  for (size_t i = 0; i < ups_.size(); ++i) {
    h = ups_[i]->Forward(nn::LeakyRelu(h, kSlope));
    Tensor acc;
    for (const auto& block : blocks_[i]) {
      Tensor y = block->Forward(h);
      acc = acc.defined() ? nn::Add(acc, y) : y;
    }
    h = nn::MulScalar(acc, 1.0 / static_cast<double>(blocks_[i].size()));
  }
  h = nn::LeakyRelu(h, 0.01);
  return nn::Tanh(conv_post_->Forward(h));
}

Tensor FramesToInput(const rep::RepresentationSequence& rep, int first, int count) {
  if (first < 0 || count < 1 || first + count > rep.n_frames) {
    throw std::invalid_argument("FramesToInput: frame range out of bounds");
  }
  std::vector<double> v(static_cast<size_t>(rep.dim) * count);
  for (int t = 0; t < count; ++t) {
    for (int d = 0; d < rep.dim; ++d) {
      v[static_cast<size_t>(d) * count + t] = rep.at(first + t, d);
    }
  }
  return Tensor::FromVector({1, rep.dim, count}, std::move(v));
}

signal::Waveform Generator::Generate(const rep::RepresentationSequence& rep) const {
  if (rep.dim != config_.input_dim) {
    throw std::invalid_argument("Generate: representation dim " +
                                std::to_string(rep.dim) + " != generator input_dim " +
                                std::to_string(config_.input_dim));
  }
  if (rep.n_frames < 1) throw std::invalid_argument("Generate: no frames");
  for (const auto& p : NamedParameters()) {
    for (double v : p.tensor.values()) {
      if (!std::isfinite(v)) throw NumericError("generator parameter " + p.name + " is not finite");
    }
  }
  nn::NoGradGuard no_grad;
  Tensor y = Forward(FramesToInput(rep, 0, rep.n_frames));
  signal::Waveform out;
  out.sample_rate = signal::kPipelineSampleRate;
  out.samples = y.values();
  for (double s : out.samples) {
    if (!std::isfinite(s)) throw NumericError("generator produced a non-finite sample");
  }
  return out;
}

}  // namespace r2w::vocoder
