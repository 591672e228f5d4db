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

#include "r2w/nn/tensor.h"

#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace r2w::nn {

namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

int64_t NumElements(const Shape& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) throw std::invalid_argument("negative dimension in shape");
    n *= d;
  }
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream ss;
  ss << '[';
  for (size_t i = 0; i < shape.size(); ++i) ss << (i ? ", " : "") << shape[i];
  ss << ']';
  return ss.str();
}

std::vector<double>& Node::GradBuffer() {
  if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  return grad;
}

Tensor Tensor::Zeros(const Shape& shape, bool requires_grad) {
  return Full(shape, 0.0, requires_grad);
}

Tensor Tensor::Full(const Shape& shape, double value, bool requires_grad) {
  auto node = std::make_shared<Node>();
  node->shape = shape;
  node->value.assign(static_cast<size_t>(NumElements(shape)), value);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::FromVector(const Shape& shape, std::vector<double> values,
                          bool requires_grad) {
  if (static_cast<int64_t>(values.size()) != NumElements(shape)) {
    throw std::invalid_argument("FromVector: " + std::to_string(values.size()) +
                                " values do not fit shape " +
                                ShapeToString(shape));
  }
  auto node = std::make_shared<Node>();
  node->shape = shape;
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::Scalar(double value) { return FromVector({}, {value}); }

double Tensor::item() const {
  if (node_->value.size() != 1)
    throw std::invalid_argument("item() on tensor of shape " +
                                ShapeToString(node_->shape));
  return node_->value[0];
}

Tensor Tensor::Detach() const { return FromVector(shape(), values()); }

void Tensor::Backward() const {
  if (node_->value.size() != 1)
    throw std::invalid_argument("Backward() requires a scalar tensor");
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node* child = node->inputs[next++].get();
      if (child->requires_grad && visited.insert(child).second) {
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  node_->GradBuffer()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward) {
      n->GradBuffer();
      n->backward(*n);
    }
  }
}

bool GradEnabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) {
  g_grad_enabled = false;
}

NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

namespace {

template <typename Range>
Tensor MakeResultImpl(Shape shape, std::vector<double> value,
                      const Range& inputs, BackwardFn backward) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  if (g_grad_enabled) {
    bool any = false;
    for (const Tensor& t : inputs) any = any || t.requires_grad();
    if (any) {
      node->requires_grad = true;
      for (const Tensor& t : inputs) node->inputs.push_back(t.node_ptr());
      node->backward = std::move(backward);
    }
  }
  return Tensor(std::move(node));
}

}  // namespace

Tensor MakeResult(Shape shape, std::vector<double> value,
                  std::initializer_list<Tensor> inputs, BackwardFn backward) {
  return MakeResultImpl(std::move(shape), std::move(value), inputs,
                        std::move(backward));
}

Tensor MakeResult(Shape shape, std::vector<double> value,
                  const std::vector<Tensor>& inputs, BackwardFn backward) {
  return MakeResultImpl(std::move(shape), std::move(value), inputs,
                        std::move(backward));
}

}  // namespace r2w::nn
