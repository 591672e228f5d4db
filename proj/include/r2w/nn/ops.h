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

#ifndef R2W_NN_OPS_H_
#define R2W_NN_OPS_H_

#include <cstdint>
#include <vector>

#include "r2w/nn/tensor.h"

// Differentiable operations. Shape violations throw std::invalid_argument.
// Sequence tensors use [batch, channels, time]; matrices use [rows, cols].
namespace r2w::nn {

// Elementwise, equal shapes.
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor AddScalar(const Tensor& a, double c);
Tensor MulScalar(const Tensor& a, double c);

Tensor Exp(const Tensor& a);
Tensor Tanh(const Tensor& a);
Tensor Relu(const Tensor& a);
Tensor LeakyRelu(const Tensor& a, double slope);
Tensor Square(const Tensor& a);
Tensor Abs(const Tensor& a);
// log(max(a, floor)); no gradient flows through clamped cells.
Tensor LogClampMin(const Tensor& a, double floor);

// Scalar reductions over all elements.
Tensor Sum(const Tensor& a);
Tensor Mean(const Tensor& a);
// mean |a - b| and mean (a - b)^2.
Tensor L1Loss(const Tensor& a, const Tensor& b);
Tensor MseLoss(const Tensor& a, const Tensor& b);

Tensor Reshape(const Tensor& a, const Shape& shape);

// Matrix ops on rank-2 tensors.
Tensor Matmul(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);
// x: [n, d], bias: [d].
Tensor AddRowBias(const Tensor& x, const Tensor& bias);
Tensor SliceCols(const Tensor& x, int64_t start, int64_t count);
Tensor ConcatCols(const std::vector<Tensor>& parts);
// Row gather: out[i] = x[index[i]]. Gradients scatter-add.
Tensor IndexRows(const Tensor& x, const std::vector<int64_t>& index);
Tensor SoftmaxRows(const Tensor& x);
// Normalizes each row over its d columns, then applies gamma/beta: [d].
Tensor LayerNormRows(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                     double eps = 1e-5);

struct Conv1dOptions {
  int stride = 1;
  int padding = 0;
  int dilation = 1;
  int groups = 1;
};

// x: [b, c_in, t]; weight: [c_out, c_in / groups, k]; bias: [c_out] or
// undefined. Zero padding.
Tensor Conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias,
              const Conv1dOptions& options = {});

// x: [b, c_in, t]; weight: [c_in, c_out, k]; bias: [c_out] or undefined.
// Output length (t - 1) * stride - 2 * padding + k.
Tensor ConvTranspose1d(const Tensor& x, const Tensor& weight,
                       const Tensor& bias, int stride, int padding);

// Average pooling over time with zero padding counted in the divisor.
Tensor AvgPool1d(const Tensor& x, int kernel, int stride, int padding);

// Symmetric reflection padding of the time axis; pads of any size repeat
// the reflection.
Tensor PadReflect(const Tensor& x, int left, int right);

// [b, c, t] -> [b * period, c, t / period], out[b * period + j, c, h] =
// x[b, c, h * period + j]. Requires t % period == 0.
Tensor PeriodFold(const Tensor& x, int period);

// x: [b, t] signal rows -> [b * n_frames, fft_size] analysis frames under
// the center-padded framing rule (see signal::SpectralConfig).
Tensor FrameSignal(const Tensor& x, int fft_size, int hop_size);

// x: [n, 2k] with real parts in the first k columns and imaginary parts in
// the last k -> [n, k] magnitudes. The gradient at a zero magnitude is 0.
Tensor ComplexMagnitude(const Tensor& x);

}  // namespace r2w::nn

#endif  // R2W_NN_OPS_H_
