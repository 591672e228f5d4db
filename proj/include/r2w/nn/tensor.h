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

#ifndef R2W_NN_TENSOR_H_
#define R2W_NN_TENSOR_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace r2w::nn {

using Shape = std::vector<int64_t>;

int64_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

struct Node;
using BackwardFn = std::function<void(Node& self)>;

// One vertex of the computation graph. `backward` reads `grad` and
// accumulates into the gradients of `inputs`.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  BackwardFn backward;

  // Gradient buffer, zero-initialized on first use.
  std::vector<double>& GradBuffer();
};

// Dense row-major double tensor with reverse-mode autodiff. Copies share
// the underlying node, so a Tensor behaves like a handle.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor Zeros(const Shape& shape, bool requires_grad = false);
  static Tensor Full(const Shape& shape, double value,
                     bool requires_grad = false);
  static Tensor FromVector(const Shape& shape, std::vector<double> values,
                           bool requires_grad = false);
  static Tensor Scalar(double value);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  size_t rank() const { return node_->shape.size(); }
  int64_t dim(size_t i) const { return node_->shape.at(i); }
  int64_t numel() const { return static_cast<int64_t>(node_->value.size()); }

  const std::vector<double>& values() const { return node_->value; }
  // Direct write access; intended for leaves (parameters, inputs).
  std::vector<double>& mutable_values() { return node_->value; }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  void set_requires_grad(bool on) { node_->requires_grad = on; }
  // Empty until a backward pass reaches this tensor.
  const std::vector<double>& grad() const { return node_->grad; }
  void ZeroGrad() { node_->grad.clear(); }

  // Back-propagates from this scalar through the recorded graph.
  void Backward() const;

  // Same values, no history.
  Tensor Detach() const;

  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& node_ptr() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Whether new operations record history on this thread.
bool GradEnabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Builds an op result. History (inputs and backward) is kept only when
// grad mode is on and some input requires grad.
Tensor MakeResult(Shape shape, std::vector<double> value,
                  std::initializer_list<Tensor> inputs, BackwardFn backward);
Tensor MakeResult(Shape shape, std::vector<double> value,
                  const std::vector<Tensor>& inputs, BackwardFn backward);

}  // namespace r2w::nn

#endif  // R2W_NN_TENSOR_H_
