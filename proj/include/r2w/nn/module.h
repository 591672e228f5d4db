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

#ifndef R2W_NN_MODULE_H_
#define R2W_NN_MODULE_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "r2w/nn/ops.h"
#include "r2w/nn/tensor.h"

namespace r2w::nn {

using Rng = std::mt19937_64;

// Uniform in [lo, hi) and standard normal draws built directly on the raw
// engine output, so sequences do not depend on the standard library's
// distribution implementations.
double UniformDouble(Rng& rng, double lo, double hi);
double NormalDouble(Rng& rng, double mean, double stddev);

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// Parameter container. Subclasses register parameters and children in their
// constructors; the registry holds handles, so modules are neither copyable
// nor movable.
class Module {
 public:
  Module() = default;
  virtual ~Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  // Depth-first, registration order, dotted names.
  std::vector<NamedTensor> NamedParameters() const;
  std::vector<Tensor> Parameters() const;
  int64_t NumParameters() const;
  void ZeroGrad();
  void SetRequiresGrad(bool on);

 protected:
  Tensor RegisterParameter(const std::string& name, Tensor tensor);
  void RegisterModule(const std::string& name, Module* child);

 private:
  std::vector<NamedTensor> params_;
  std::vector<std::pair<std::string, Module*>> children_;
};

class Linear : public Module {
 public:
  Linear(int64_t in_features, int64_t out_features, Rng& rng,
         bool bias = true);
  // x: [n, in] -> [n, out].
  Tensor Forward(const Tensor& x) const;

  Tensor weight;  // [in, out]
  Tensor bias;    // [out] or undefined
};

class Conv1dLayer : public Module {
 public:
  Conv1dLayer(int64_t in_channels, int64_t out_channels, int kernel,
              const Conv1dOptions& options, Rng& rng);
  Tensor Forward(const Tensor& x) const;
  void InitNormal(double stddev, Rng& rng);

  Conv1dOptions options;
  Tensor weight;  // [out, in / groups, kernel]
  Tensor bias;    // [out]
};

class ConvTranspose1dLayer : public Module {
 public:
  ConvTranspose1dLayer(int64_t in_channels, int64_t out_channels, int kernel,
                       int stride, int padding, Rng& rng);
  Tensor Forward(const Tensor& x) const;
  void InitNormal(double stddev, Rng& rng);

  int stride;
  int padding;
  Tensor weight;  // [in, out, kernel]
  Tensor bias;    // [out]
};

class LayerNorm : public Module {
 public:
  explicit LayerNorm(int64_t dim);
  Tensor Forward(const Tensor& x) const;

  Tensor gamma;
  Tensor beta;
};

class Embedding : public Module {
 public:
  Embedding(int64_t count, int64_t dim, Rng& rng);
  Tensor Forward(const std::vector<int64_t>& ids) const;

  Tensor table;  // [count, dim]
};

}  // namespace r2w::nn

#endif  // R2W_NN_MODULE_H_
