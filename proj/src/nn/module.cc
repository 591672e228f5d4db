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

#include "r2w/nn/module.h"

#include <cmath>
#include <numbers>

namespace r2w::nn {

double UniformDouble(Rng& rng, double lo, double hi) {
  // 53 random bits -> [0, 1).
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double NormalDouble(Rng& rng, double mean, double stddev) {
  // Box-Muller; u1 is shifted away from zero.
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

namespace {

Tensor UniformParam(const Shape& shape, double bound, Rng& rng) {
  std::vector<double> v(static_cast<size_t>(NumElements(shape)));
  for (double& x : v) x = UniformDouble(rng, -bound, bound);
  return Tensor::FromVector(shape, std::move(v), true);
}

void FillNormal(Tensor& t, double stddev, Rng& rng) {
  for (double& x : t.mutable_values()) x = NormalDouble(rng, 0.0, stddev);
}

}  // namespace

std::vector<NamedTensor> Module::NamedParameters() const {
  std::vector<NamedTensor> out = params_;
  for (const auto& [name, child] : children_) {
    for (auto& p : child->NamedParameters()) {
      out.push_back({name + "." + p.name, p.tensor});
    }
  }
  return out;
}

std::vector<Tensor> Module::Parameters() const {
  std::vector<Tensor> out;
  for (auto& p : NamedParameters()) out.push_back(p.tensor);
  return out;
}

int64_t Module::NumParameters() const {
  int64_t n = 0;
  for (const auto& p : NamedParameters()) n += p.tensor.numel();
  return n;
}

void Module::ZeroGrad() {
  for (auto& p : Parameters()) p.ZeroGrad();
}

void Module::SetRequiresGrad(bool on) {
  for (auto& p : Parameters()) p.set_requires_grad(on);
}

Tensor Module::RegisterParameter(const std::string& name, Tensor tensor) {
  tensor.set_requires_grad(true);
  params_.push_back({name, tensor});
  return tensor;
}

void Module::RegisterModule(const std::string& name, Module* child) {
  children_.emplace_back(name, child);
}

Linear::Linear(int64_t in_features, int64_t out_features, Rng& rng,
               bool with_bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_features));
  weight = RegisterParameter(
      "weight", UniformParam({in_features, out_features}, bound, rng));
  if (with_bias) {
    bias = RegisterParameter("bias", UniformParam({out_features}, bound, rng));
  }
}

Tensor Linear::Forward(const Tensor& x) const {
  Tensor y = Matmul(x, weight);
  return bias.defined() ? AddRowBias(y, bias) : y;
}

Conv1dLayer::Conv1dLayer(int64_t in_channels, int64_t out_channels,
                         int kernel, const Conv1dOptions& opts, Rng& rng)
    : options(opts) {
  const int64_t fan_in = in_channels / opts.groups * kernel;
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  weight = RegisterParameter(
      "weight",
      UniformParam({out_channels, in_channels / opts.groups, kernel}, bound,
                   rng));
  bias = RegisterParameter("bias", UniformParam({out_channels}, bound, rng));
}

Tensor Conv1dLayer::Forward(const Tensor& x) const {
  return Conv1d(x, weight, bias, options);
}

void Conv1dLayer::InitNormal(double stddev, Rng& rng) {
  FillNormal(weight, stddev, rng);
}

ConvTranspose1dLayer::ConvTranspose1dLayer(int64_t in_channels,
                                           int64_t out_channels, int kernel,
                                           int stride_, int padding_, Rng& rng)
    : stride(stride_), padding(padding_) {
  const int64_t fan_in = out_channels * kernel;
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  weight = RegisterParameter(
      "weight", UniformParam({in_channels, out_channels, kernel}, bound, rng));
  bias = RegisterParameter("bias", UniformParam({out_channels}, bound, rng));
}

Tensor ConvTranspose1dLayer::Forward(const Tensor& x) const {
  return ConvTranspose1d(x, weight, bias, stride, padding);
}

void ConvTranspose1dLayer::InitNormal(double stddev, Rng& rng) {
  FillNormal(weight, stddev, rng);
}

LayerNorm::LayerNorm(int64_t dim) {
  gamma = RegisterParameter("gamma", Tensor::Full({dim}, 1.0));
  beta = RegisterParameter("beta", Tensor::Zeros({dim}));
}

Tensor LayerNorm::Forward(const Tensor& x) const {
  return LayerNormRows(x, gamma, beta);
}

Embedding::Embedding(int64_t count, int64_t dim, Rng& rng) {
  std::vector<double> v(static_cast<size_t>(count * dim));
  for (double& x : v) x = NormalDouble(rng, 0.0, 1.0 / std::sqrt(static_cast<double>(dim)));
  table = RegisterParameter("table", Tensor::FromVector({count, dim}, std::move(v)));
}

Tensor Embedding::Forward(const std::vector<int64_t>& ids) const {
  return IndexRows(table, ids);
}

}  // namespace r2w::nn
