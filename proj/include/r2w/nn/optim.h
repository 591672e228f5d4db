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

#ifndef R2W_NN_OPTIM_H_
#define R2W_NN_OPTIM_H_

#include <cstdint>
#include <vector>

#include "r2w/nn/tensor.h"

namespace r2w::nn {

struct AdamOptions {
  double lr = 2e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double eps = 1e-8;
};

// Bias-corrected Adam over a fixed parameter list.
class Adam {
 public:
  Adam(std::vector<Tensor> params, const AdamOptions& options);

  void set_lr(double lr) { options_.lr = lr; }
  double lr() const { return options_.lr; }
  int64_t step_count() const { return step_; }

  // Parameters without a gradient are left untouched.
  void Step();
  void ZeroGrad();

  // First and second moments, one entry per parameter.
  std::vector<std::vector<double>>& first_moments() { return m_; }
  std::vector<std::vector<double>>& second_moments() { return v_; }
  void set_step_count(int64_t step) { step_ = step; }

 private:
  std::vector<Tensor> params_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  int64_t step_ = 0;
};

// base * decay^epoch.
double ExponentialLr(double base, double decay, int64_t epoch);

// scale * min(step^-0.5, step * warmup^-1.5), with step counted from 1.
double InverseSqrtWarmupLr(double scale, int64_t step, int64_t warmup);

}  // namespace r2w::nn

#endif  // R2W_NN_OPTIM_H_
