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

#include "r2w/nn/optim.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace r2w::nn {

Adam::Adam(std::vector<Tensor> params, const AdamOptions& options)
    : params_(std::move(params)), options_(options) {
  for (const auto& p : params_) {
    m_.emplace_back(static_cast<size_t>(p.numel()), 0.0);
    v_.emplace_back(static_cast<size_t>(p.numel()), 0.0);
  }
}

void Adam::Step() {
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double step_size = options_.lr / c1;
  const double sqrt_c2 = std::sqrt(c2);
  for (size_t i = 0; i < params_.size(); ++i) {
    Tensor& p = params_[i];
    const auto& g = p.grad();
    if (g.empty()) continue;
    auto& m = m_[i];
    auto& v = v_[i];
    auto& w = p.mutable_values();
    for (size_t j = 0; j < w.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      w[j] -= step_size * m[j] / (std::sqrt(v[j]) / sqrt_c2 + options_.eps);
    }
  }
}

void Adam::ZeroGrad() {
  for (auto& p : params_) p.ZeroGrad();
}

double ExponentialLr(double base, double decay, int64_t epoch) {
  return base * std::pow(decay, static_cast<double>(epoch));
}

double InverseSqrtWarmupLr(double scale, int64_t step, int64_t warmup) {
  if (step < 1) step = 1;
  if (warmup < 1) warmup = 1;
  const auto s = static_cast<double>(step);
  const auto w = static_cast<double>(warmup);
  return scale * std::min(1.0 / std::sqrt(s), s * std::pow(w, -1.5));
}

}  // namespace r2w::nn
