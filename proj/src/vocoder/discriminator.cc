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

#include "r2w/vocoder/discriminator.h"

#include <stdexcept>

#include "r2w/nn/ops.h"

namespace r2w::vocoder {

using nn::Tensor;

namespace {

constexpr double kSlope = 0.1;

}  // namespace

PeriodDiscriminator::PeriodDiscriminator(int period, const std::vector<int>& channels,
                                         nn::Rng& rng)
    : period_(period) {
  int in = 1;
  for (size_t i = 0; i < channels.size(); ++i) {
    const bool last = i + 1 == channels.size();
    convs_.push_back(std::make_unique<nn::Conv1dLayer>(
        in, channels[i], 5, nn::Conv1dOptions{.stride = last ? 1 : 3, .padding = 2}, rng));
    RegisterModule("convs." + std::to_string(i), convs_.back().get());
    in = channels[i];
  }
  post_ = std::make_unique<nn::Conv1dLayer>(in, 1, 3, nn::Conv1dOptions{.padding = 1}, rng);
  RegisterModule("conv_post", post_.get());
}

void PeriodDiscriminator::Forward(const Tensor& wave, DiscriminatorOutput& out) const {
  Tensor x = wave;
  const int64_t t = x.dim(2);
  if (t % period_ != 0) x = nn::PadReflect(x, 0, static_cast<int>(period_ - t % period_));
  x = nn::PeriodFold(x, period_);
  std::vector<Tensor> feats;
  for (const auto& conv : convs_) {
    x = nn::LeakyRelu(conv->Forward(x), kSlope);
    feats.push_back(x);
  }
  x = post_->Forward(x);
  feats.push_back(x);
  out.scores.push_back(x);
  out.features.push_back(std::move(feats));
}

ScaleDiscriminator::ScaleDiscriminator(const std::vector<int>& channels,
                                       const std::vector<int>& groups, nn::Rng& rng) {
  // Kernel 15 in, kernel 5 out, kernel 41 between with strides 2, 2, 4, 4
  // then 1.
  static constexpr int kStrides[] = {2, 2, 4, 4};
  int in = 1;
  for (size_t i = 0; i < channels.size(); ++i) {
    int kernel = 41, stride = 1;
    if (i == 0) {
      kernel = 15;
    } else if (i + 1 == channels.size()) {
      kernel = 5;
    } else if (i - 1 < 4) {
      stride = kStrides[i - 1];
    }
    convs_.push_back(std::make_unique<nn::Conv1dLayer>(
        in, channels[i], kernel,
        nn::Conv1dOptions{.stride = stride, .padding = kernel / 2, .groups = groups[i]},
        rng));
    RegisterModule("convs." + std::to_string(i), convs_.back().get());
    in = channels[i];
  }
  post_ = std::make_unique<nn::Conv1dLayer>(in, 1, 3, nn::Conv1dOptions{.padding = 1}, rng);
  RegisterModule("conv_post", post_.get());
}

void ScaleDiscriminator::Forward(const Tensor& wave, DiscriminatorOutput& out) const {
  Tensor x = wave;
  std::vector<Tensor> feats;
  for (const auto& conv : convs_) {
    x = nn::LeakyRelu(conv->Forward(x), kSlope);
    feats.push_back(x);
  }
  x = post_->Forward(x);
  feats.push_back(x);
  out.scores.push_back(x);
  out.features.push_back(std::move(feats));
}

Discriminator::Discriminator(const DiscriminatorConfig& config, nn::Rng& rng) {
  config.Validate();
  for (size_t i = 0; i < config.periods.size(); ++i) {
    periods_.push_back(std::make_unique<PeriodDiscriminator>(
        config.periods[i], config.period_channels, rng));
    RegisterModule("mpd." + std::to_string(i), periods_.back().get());
  }
  for (int s = 0; s < config.num_scales; ++s) {
    scales_.push_back(std::make_unique<ScaleDiscriminator>(
        config.scale_channels, config.scale_groups, rng));
    RegisterModule("msd." + std::to_string(s), scales_.back().get());
  }
}

DiscriminatorOutput Discriminator::Forward(const Tensor& wave) const {
  if (wave.rank() != 3 || wave.dim(1) != 1) {
    throw std::invalid_argument("Discriminator: expected [b, 1, t], got " +
                                nn::ShapeToString(wave.shape()));
  }
  DiscriminatorOutput out;
  for (const auto& d : periods_) d->Forward(wave, out);
  Tensor x = wave;
  for (size_t s = 0; s < scales_.size(); ++s) {
    if (s > 0) x = nn::AvgPool1d(x, 4, 2, 2);
    scales_[s]->Forward(x, out);
  }
  return out;
}

}  // namespace r2w::vocoder
