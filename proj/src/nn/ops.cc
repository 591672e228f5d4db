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

#include "r2w/nn/ops.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace r2w::nn {

namespace {

void Require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

void RequireSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                ShapeToString(a.shape()) + " vs " +
                                ShapeToString(b.shape()));
  }
}

void RequireRank(const Tensor& a, size_t rank, const char* op) {
  if (a.rank() != rank) {
    throw std::invalid_argument(std::string(op) + ": expected rank " +
                                std::to_string(rank) + ", got shape " +
                                ShapeToString(a.shape()));
  }
}

bool NeedsGrad(const Node& self, size_t i) {
  return self.inputs[i]->requires_grad;
}

// y = f(x) elementwise; dfdx(x, y) is the local derivative.
template <typename F, typename D>
Tensor Unary(const Tensor& a, F f, D dfdx) {
  const auto& x = a.values();
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  return MakeResult(a.shape(), std::move(y), {a}, [dfdx](Node& self) {
    Node& in = *self.inputs[0];
    auto& gx = in.GradBuffer();
    for (size_t i = 0; i < gx.size(); ++i) {
      gx[i] += self.grad[i] * dfdx(in.value[i], self.value[i]);
    }
  });
}

// Index range [lo, hi) of t for which t * stride + offset lies in [0, limit),
// clipped to [0, count).
void ValidRange(int64_t offset, int64_t stride, int64_t limit, int64_t count,
                int64_t* lo, int64_t* hi) {
  *lo = offset >= 0 ? 0 : (-offset + stride - 1) / stride;
  const int64_t last = limit - 1 - offset;
  *hi = last < 0 ? 0 : std::min(count, last / stride + 1);
  if (*hi < *lo) *hi = *lo;
}

size_t Reflect(int64_t index, int64_t length) {
  if (length == 1) return 0;
  const int64_t period = 2 * (length - 1);
  int64_t m = index % period;
  if (m < 0) m += period;
  if (m >= length) m = period - m;
  return static_cast<size_t>(m);
}

}  // namespace

Tensor Add(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "Add");
  std::vector<double> y(a.values());
  const auto& bv = b.values();
  for (size_t i = 0; i < y.size(); ++i) y[i] += bv[i];
  return MakeResult(a.shape(), std::move(y), {a, b}, [](Node& self) {
    for (size_t k = 0; k < 2; ++k) {
      if (!NeedsGrad(self, k)) continue;
      auto& g = self.inputs[k]->GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor Sub(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "Sub");
  std::vector<double> y(a.values());
  const auto& bv = b.values();
  for (size_t i = 0; i < y.size(); ++i) y[i] -= bv[i];
  return MakeResult(a.shape(), std::move(y), {a, b}, [](Node& self) {
    if (NeedsGrad(self, 0)) {
      auto& g = self.inputs[0]->GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (NeedsGrad(self, 1)) {
      auto& g = self.inputs[1]->GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
    }
  });
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "Mul");
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> y(av.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = av[i] * bv[i];
  return MakeResult(a.shape(), std::move(y), {a, b}, [](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    if (na.requires_grad) {
      auto& g = na.GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * nb.value[i];
    }
    if (nb.requires_grad) {
      auto& g = nb.GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * na.value[i];
    }
  });
}

Tensor AddScalar(const Tensor& a, double c) {
  return Unary(a, [c](double x) { return x + c; },
               [](double, double) { return 1.0; });
}

Tensor MulScalar(const Tensor& a, double c) {
  return Unary(a, [c](double x) { return x * c; },
               [c](double, double) { return c; });
}

Tensor Exp(const Tensor& a) {
  return Unary(a, [](double x) { return std::exp(x); },
               [](double, double y) { return y; });
}

Tensor Tanh(const Tensor& a) {
  return Unary(a, [](double x) { return std::tanh(x); },
               [](double, double y) { return 1.0 - y * y; });
}

Tensor Relu(const Tensor& a) {
  return Unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor LeakyRelu(const Tensor& a, double slope) {
  return Unary(a, [slope](double x) { return x > 0.0 ? x : slope * x; },
               [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor Square(const Tensor& a) {
  return Unary(a, [](double x) { return x * x; },
               [](double x, double) { return 2.0 * x; });
}

Tensor Abs(const Tensor& a) {
  return Unary(a, [](double x) { return std::abs(x); },
               [](double x, double) {
                 return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
               });
}

Tensor LogClampMin(const Tensor& a, double floor) {
  Require(floor > 0.0, "LogClampMin: floor must be positive");
  const double log_floor = std::log(floor);
  return Unary(
      a, [floor, log_floor](double x) { return x > floor ? std::log(x) : log_floor; },
      [floor](double x, double) { return x > floor ? 1.0 / x : 0.0; });
}

Tensor Sum(const Tensor& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v;
  return MakeResult({}, {acc}, {a}, [](Node& self) {
    auto& g = self.inputs[0]->GradBuffer();
    const double go = self.grad[0];
    for (double& v : g) v += go;
  });
}

Tensor Mean(const Tensor& a) {
  Require(a.numel() > 0, "Mean: empty tensor");
  double acc = 0.0;
  for (double v : a.values()) acc += v;
  const double n = static_cast<double>(a.numel());
  return MakeResult({}, {acc / n}, {a}, [n](Node& self) {
    auto& g = self.inputs[0]->GradBuffer();
    const double go = self.grad[0] / n;
    for (double& v : g) v += go;
  });
}

Tensor L1Loss(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "L1Loss");
  Require(a.numel() > 0, "L1Loss: empty tensors");
  const auto& av = a.values();
  const auto& bv = b.values();
  double acc = 0.0;
  for (size_t i = 0; i < av.size(); ++i) acc += std::abs(av[i] - bv[i]);
  const double n = static_cast<double>(av.size());
  return MakeResult({}, {acc / n}, {a, b}, [n](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const double go = self.grad[0] / n;
    for (size_t k = 0; k < 2; ++k) {
      Node& target = k == 0 ? na : nb;
      if (!target.requires_grad) continue;
      const double sign_flip = k == 0 ? 1.0 : -1.0;
      auto& g = target.GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) {
        const double d = na.value[i] - nb.value[i];
        const double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        g[i] += sign_flip * s * go;
      }
    }
  });
}

Tensor MseLoss(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "MseLoss");
  Require(a.numel() > 0, "MseLoss: empty tensors");
  const auto& av = a.values();
  const auto& bv = b.values();
  double acc = 0.0;
  for (size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    acc += d * d;
  }
  const double n = static_cast<double>(av.size());
  return MakeResult({}, {acc / n}, {a, b}, [n](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const double go = 2.0 * self.grad[0] / n;
    for (size_t k = 0; k < 2; ++k) {
      Node& target = k == 0 ? na : nb;
      if (!target.requires_grad) continue;
      const double sign_flip = k == 0 ? 1.0 : -1.0;
      auto& g = target.GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) {
        g[i] += sign_flip * (na.value[i] - nb.value[i]) * go;
      }
    }
  });
}

Tensor Reshape(const Tensor& a, const Shape& shape) {
  Require(NumElements(shape) == a.numel(),
          "Reshape: cannot view " + ShapeToString(a.shape()) + " as " +
              ShapeToString(shape));
  return MakeResult(shape, a.values(), {a}, [](Node& self) {
    auto& g = self.inputs[0]->GradBuffer();
    for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Tensor Matmul(const Tensor& a, const Tensor& b) {
  RequireRank(a, 2, "Matmul");
  RequireRank(b, 2, "Matmul");
  const int64_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Require(b.dim(0) == k, "Matmul: inner dimensions differ " +
                             ShapeToString(a.shape()) + " x " +
                             ShapeToString(b.shape()));
  const double* av = a.values().data();
  const double* bv = b.values().data();
  std::vector<double> y(static_cast<size_t>(m * n), 0.0);
  for (int64_t i = 0; i < m; ++i) {
    double* yrow = &y[static_cast<size_t>(i * n)];
    for (int64_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = bv + p * n;
      for (int64_t j = 0; j < n; ++j) yrow[j] += aip * brow[j];
    }
  }
  return MakeResult({m, n}, std::move(y), {a, b}, [m, k, n](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const double* g = self.grad.data();
    if (na.requires_grad) {
      auto& ga = na.GradBuffer();
      for (int64_t i = 0; i < m; ++i) {
        const double* grow = g + i * n;
        for (int64_t p = 0; p < k; ++p) {
          const double* brow = nb.value.data() + p * n;
          double acc = 0.0;
          for (int64_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
          ga[static_cast<size_t>(i * k + p)] += acc;
        }
      }
    }
    if (nb.requires_grad) {
      auto& gb = nb.GradBuffer();
      for (int64_t i = 0; i < m; ++i) {
        const double* grow = g + i * n;
        for (int64_t p = 0; p < k; ++p) {
          const double aip = na.value[static_cast<size_t>(i * k + p)];
          if (aip == 0.0) continue;
          double* gbrow = gb.data() + p * n;
          for (int64_t j = 0; j < n; ++j) gbrow[j] += aip * grow[j];
        }
      }
    }
  });
}

Tensor Transpose(const Tensor& a) {
  RequireRank(a, 2, "Transpose");
  const int64_t r = a.dim(0), c = a.dim(1);
  const auto& av = a.values();
  std::vector<double> y(av.size());
  for (int64_t i = 0; i < r; ++i)
    for (int64_t j = 0; j < c; ++j)
      y[static_cast<size_t>(j * r + i)] = av[static_cast<size_t>(i * c + j)];
  return MakeResult({c, r}, std::move(y), {a}, [r, c](Node& self) {
    auto& g = self.inputs[0]->GradBuffer();
    for (int64_t i = 0; i < r; ++i)
      for (int64_t j = 0; j < c; ++j)
        g[static_cast<size_t>(i * c + j)] += self.grad[static_cast<size_t>(j * r + i)];
  });
}

Tensor AddRowBias(const Tensor& x, const Tensor& bias) {
  RequireRank(x, 2, "AddRowBias");
  RequireRank(bias, 1, "AddRowBias");
  const int64_t n = x.dim(0), d = x.dim(1);
  Require(bias.dim(0) == d, "AddRowBias: bias length mismatch");
  std::vector<double> y(x.values());
  const auto& bv = bias.values();
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < d; ++j) y[static_cast<size_t>(i * d + j)] += bv[static_cast<size_t>(j)];
  return MakeResult(x.shape(), std::move(y), {x, bias}, [n, d](Node& self) {
    if (NeedsGrad(self, 0)) {
      auto& g = self.inputs[0]->GradBuffer();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (NeedsGrad(self, 1)) {
      auto& g = self.inputs[1]->GradBuffer();
      for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < d; ++j) g[static_cast<size_t>(j)] += self.grad[static_cast<size_t>(i * d + j)];
    }
  });
}

Tensor SliceCols(const Tensor& x, int64_t start, int64_t count) {
  RequireRank(x, 2, "SliceCols");
  const int64_t n = x.dim(0), d = x.dim(1);
  Require(start >= 0 && count >= 0 && start + count <= d,
          "SliceCols: range out of bounds");
  const auto& xv = x.values();
  std::vector<double> y(static_cast<size_t>(n * count));
  for (int64_t i = 0; i < n; ++i)
    std::copy_n(xv.begin() + i * d + start, count, y.begin() + i * count);
  return MakeResult({n, count}, std::move(y), {x},
                    [n, d, start, count](Node& self) {
                      auto& g = self.inputs[0]->GradBuffer();
                      for (int64_t i = 0; i < n; ++i)
                        for (int64_t j = 0; j < count; ++j)
                          g[static_cast<size_t>(i * d + start + j)] +=
                              self.grad[static_cast<size_t>(i * count + j)];
                    });
}

Tensor ConcatCols(const std::vector<Tensor>& parts) {
  Require(!parts.empty(), "ConcatCols: no inputs");
  const int64_t n = parts[0].dim(0);
  int64_t total = 0;
  std::vector<int64_t> widths;
  for (const auto& p : parts) {
    RequireRank(p, 2, "ConcatCols");
    Require(p.dim(0) == n, "ConcatCols: row count mismatch");
    widths.push_back(p.dim(1));
    total += p.dim(1);
  }
  std::vector<double> y(static_cast<size_t>(n * total));
  int64_t offset = 0;
  for (size_t k = 0; k < parts.size(); ++k) {
    const auto& pv = parts[k].values();
    for (int64_t i = 0; i < n; ++i)
      std::copy_n(pv.begin() + i * widths[k], widths[k],
                  y.begin() + i * total + offset);
    offset += widths[k];
  }
  return MakeResult({n, total}, std::move(y), parts,
                    [n, total, widths](Node& self) {
                      int64_t off = 0;
                      for (size_t k = 0; k < widths.size(); ++k) {
                        if (NeedsGrad(self, k)) {
                          auto& g = self.inputs[k]->GradBuffer();
                          for (int64_t i = 0; i < n; ++i)
                            for (int64_t j = 0; j < widths[k]; ++j)
                              g[static_cast<size_t>(i * widths[k] + j)] +=
                                  self.grad[static_cast<size_t>(i * total + off + j)];
                        }
                        off += widths[k];
                      }
                    });
}

Tensor IndexRows(const Tensor& x, const std::vector<int64_t>& index) {
  RequireRank(x, 2, "IndexRows");
  const int64_t n = x.dim(0), d = x.dim(1);
  const auto m = static_cast<int64_t>(index.size());
  const auto& xv = x.values();
  std::vector<double> y(static_cast<size_t>(m * d));
  for (int64_t i = 0; i < m; ++i) {
    const int64_t r = index[static_cast<size_t>(i)];
    Require(r >= 0 && r < n, "IndexRows: index " + std::to_string(r) +
                                 " out of range [0, " + std::to_string(n) + ")");
    std::copy_n(xv.begin() + r * d, d, y.begin() + i * d);
  }
  return MakeResult({m, d}, std::move(y), {x}, [index, d](Node& self) {
    auto& g = self.inputs[0]->GradBuffer();
    for (size_t i = 0; i < index.size(); ++i) {
      double* grow = g.data() + index[i] * d;
      const double* src = self.grad.data() + static_cast<int64_t>(i) * d;
      for (int64_t j = 0; j < d; ++j) grow[j] += src[j];
    }
  });
}

Tensor SoftmaxRows(const Tensor& x) {
  RequireRank(x, 2, "SoftmaxRows");
  const int64_t n = x.dim(0), d = x.dim(1);
  const auto& xv = x.values();
  std::vector<double> y(xv.size());
  for (int64_t i = 0; i < n; ++i) {
    const double* row = xv.data() + i * d;
    double* out = y.data() + i * d;
    const double mx = *std::max_element(row, row + d);
    double z = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      out[j] = std::exp(row[j] - mx);
      z += out[j];
    }
    for (int64_t j = 0; j < d; ++j) out[j] /= z;
  }
  return MakeResult(x.shape(), std::move(y), {x}, [n, d](Node& self) {
    auto& g = self.inputs[0]->GradBuffer();
    for (int64_t i = 0; i < n; ++i) {
      const double* yr = self.value.data() + i * d;
      const double* gr = self.grad.data() + i * d;
      double dot = 0.0;
      for (int64_t j = 0; j < d; ++j) dot += yr[j] * gr[j];
      for (int64_t j = 0; j < d; ++j) g[static_cast<size_t>(i * d + j)] += yr[j] * (gr[j] - dot);
    }
  });
}

Tensor LayerNormRows(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                     double eps) {
  RequireRank(x, 2, "LayerNormRows");
  const int64_t n = x.dim(0), d = x.dim(1);
  Require(gamma.numel() == d && beta.numel() == d,
          "LayerNormRows: affine parameter size mismatch");
  const auto& xv = x.values();
  const auto& gv = gamma.values();
  const auto& bv = beta.values();
  std::vector<double> y(xv.size());
  std::vector<double> xhat(xv.size());
  std::vector<double> inv_std(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const double* row = xv.data() + i * d;
    double mean = 0.0;
    for (int64_t j = 0; j < d; ++j) mean += row[j];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (int64_t j = 0; j < d; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<size_t>(i)] = is;
    for (int64_t j = 0; j < d; ++j) {
      const size_t idx = static_cast<size_t>(i * d + j);
      xhat[idx] = (row[j] - mean) * is;
      y[idx] = xhat[idx] * gv[static_cast<size_t>(j)] + bv[static_cast<size_t>(j)];
    }
  }
  return MakeResult(
      x.shape(), std::move(y), {x, gamma, beta},
      [n, d, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
        Node& nx = *self.inputs[0];
        Node& ng = *self.inputs[1];
        Node& nb = *self.inputs[2];
        const double* g = self.grad.data();
        if (ng.requires_grad) {
          auto& gg = ng.GradBuffer();
          for (int64_t i = 0; i < n; ++i)
            for (int64_t j = 0; j < d; ++j)
              gg[static_cast<size_t>(j)] += g[i * d + j] * xhat[static_cast<size_t>(i * d + j)];
        }
        if (nb.requires_grad) {
          auto& gb = nb.GradBuffer();
          for (int64_t i = 0; i < n; ++i)
            for (int64_t j = 0; j < d; ++j) gb[static_cast<size_t>(j)] += g[i * d + j];
        }
        if (nx.requires_grad) {
          auto& gx = nx.GradBuffer();
          std::vector<double> dxhat(static_cast<size_t>(d));
          for (int64_t i = 0; i < n; ++i) {
            double mean_d = 0.0, mean_dx = 0.0;
            for (int64_t j = 0; j < d; ++j) {
              dxhat[static_cast<size_t>(j)] = g[i * d + j] * ng.value[static_cast<size_t>(j)];
              mean_d += dxhat[static_cast<size_t>(j)];
              mean_dx += dxhat[static_cast<size_t>(j)] * xhat[static_cast<size_t>(i * d + j)];
            }
            mean_d /= static_cast<double>(d);
            mean_dx /= static_cast<double>(d);
            const double is = inv_std[static_cast<size_t>(i)];
            for (int64_t j = 0; j < d; ++j) {
              const size_t idx = static_cast<size_t>(i * d + j);
              gx[idx] += is * (dxhat[static_cast<size_t>(j)] - mean_d - xhat[idx] * mean_dx);
            }
          }
        }
      });
}

Tensor Conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias,
              const Conv1dOptions& opt) {
  RequireRank(x, 3, "Conv1d");
  RequireRank(weight, 3, "Conv1d weight");
  const int64_t batch = x.dim(0), c_in = x.dim(1), t_in = x.dim(2);
  const int64_t c_out = weight.dim(0), cig = weight.dim(1), k = weight.dim(2);
  const int64_t groups = opt.groups, s = opt.stride, p = opt.padding,
                dil = opt.dilation;
  Require(groups >= 1 && s >= 1 && dil >= 1 && p >= 0,
          "Conv1d: invalid options");
  Require(c_in % groups == 0 && c_out % groups == 0 && cig == c_in / groups,
          "Conv1d: channel/group mismatch, input " + ShapeToString(x.shape()) +
              " weight " + ShapeToString(weight.shape()));
  const bool has_bias = bias.defined();
  if (has_bias) Require(bias.numel() == c_out, "Conv1d: bias size mismatch");
  const int64_t span = dil * (k - 1) + 1;
  Require(t_in + 2 * p >= span, "Conv1d: input of length " +
                                    std::to_string(t_in) +
                                    " shorter than kernel span");
  const int64_t t_out = (t_in + 2 * p - span) / s + 1;
  const int64_t cog = c_out / groups;

  const double* xv = x.values().data();
  const double* wv = weight.values().data();
  std::vector<double> y(static_cast<size_t>(batch * c_out * t_out), 0.0);
  for (int64_t b = 0; b < batch; ++b) {
    for (int64_t co = 0; co < c_out; ++co) {
      const int64_t g = co / cog;
      double* orow = y.data() + (b * c_out + co) * t_out;
      if (has_bias) std::fill_n(orow, t_out, bias.values()[static_cast<size_t>(co)]);
      for (int64_t cl = 0; cl < cig; ++cl) {
        const double* xrow = xv + (b * c_in + g * cig + cl) * t_in;
        const double* wrow = wv + (co * cig + cl) * k;
        for (int64_t kk = 0; kk < k; ++kk) {
          const double w = wrow[kk];
          const int64_t off = kk * dil - p;
          int64_t lo, hi;
          ValidRange(off, s, t_in, t_out, &lo, &hi);
          if (s == 1) {
            const double* xs = xrow + off;
            for (int64_t t = lo; t < hi; ++t) orow[t] += w * xs[t];
          } else {
            for (int64_t t = lo; t < hi; ++t) orow[t] += w * xrow[t * s + off];
          }
        }
      }
    }
  }

  std::vector<Tensor> inputs{x, weight};
  if (has_bias) inputs.push_back(bias);
  return MakeResult(
      {batch, c_out, t_out}, std::move(y), inputs,
      [=](Node& self) {
        Node& nx = *self.inputs[0];
        Node& nw = *self.inputs[1];
        const double* gy = self.grad.data();
        if (has_bias && self.inputs[2]->requires_grad) {
          auto& gb = self.inputs[2]->GradBuffer();
          for (int64_t b = 0; b < batch; ++b)
            for (int64_t co = 0; co < c_out; ++co) {
              const double* grow = gy + (b * c_out + co) * t_out;
              double acc = 0.0;
              for (int64_t t = 0; t < t_out; ++t) acc += grow[t];
              gb[static_cast<size_t>(co)] += acc;
            }
        }
        double* gx = nx.requires_grad ? nx.GradBuffer().data() : nullptr;
        double* gw = nw.requires_grad ? nw.GradBuffer().data() : nullptr;
        const double* xv2 = nx.value.data();
        const double* wv2 = nw.value.data();
        for (int64_t b = 0; b < batch; ++b) {
          for (int64_t co = 0; co < c_out; ++co) {
            const int64_t g = co / cog;
            const double* grow = gy + (b * c_out + co) * t_out;
            for (int64_t cl = 0; cl < cig; ++cl) {
              const int64_t xoff = (b * c_in + g * cig + cl) * t_in;
              const double* xrow = xv2 + xoff;
              const int64_t woff = (co * cig + cl) * k;
              for (int64_t kk = 0; kk < k; ++kk) {
                const int64_t off = kk * dil - p;
                int64_t lo, hi;
                ValidRange(off, s, t_in, t_out, &lo, &hi);
                if (gw != nullptr) {
                  double acc = 0.0;
                  for (int64_t t = lo; t < hi; ++t) acc += grow[t] * xrow[t * s + off];
                  gw[woff + kk] += acc;
                }
                if (gx != nullptr) {
                  const double w = wv2[woff + kk];
                  double* gxrow = gx + xoff;
                  for (int64_t t = lo; t < hi; ++t) gxrow[t * s + off] += w * grow[t];
                }
              }
            }
          }
        }
      });
}

Tensor ConvTranspose1d(const Tensor& x, const Tensor& weight,
                       const Tensor& bias, int stride, int padding) {
  RequireRank(x, 3, "ConvTranspose1d");
  RequireRank(weight, 3, "ConvTranspose1d weight");
  const int64_t batch = x.dim(0), c_in = x.dim(1), t_in = x.dim(2);
  const int64_t c_out = weight.dim(1), k = weight.dim(2);
  const int64_t s = stride, p = padding;
  Require(weight.dim(0) == c_in, "ConvTranspose1d: input channel mismatch");
  Require(s >= 1 && p >= 0, "ConvTranspose1d: invalid options");
  const bool has_bias = bias.defined();
  if (has_bias) Require(bias.numel() == c_out, "ConvTranspose1d: bias size");
  const int64_t t_out = (t_in - 1) * s - 2 * p + k;
  Require(t_out > 0, "ConvTranspose1d: empty output");

  const double* xv = x.values().data();
  const double* wv = weight.values().data();
  std::vector<double> y(static_cast<size_t>(batch * c_out * t_out), 0.0);
  for (int64_t b = 0; b < batch; ++b) {
    for (int64_t co = 0; co < c_out; ++co) {
      double* orow = y.data() + (b * c_out + co) * t_out;
      if (has_bias) std::fill_n(orow, t_out, bias.values()[static_cast<size_t>(co)]);
      for (int64_t ci = 0; ci < c_in; ++ci) {
        const double* xrow = xv + (b * c_in + ci) * t_in;
        const double* wrow = wv + (ci * c_out + co) * k;
        for (int64_t kk = 0; kk < k; ++kk) {
          const double w = wrow[kk];
          const int64_t off = kk - p;
          int64_t lo, hi;
          ValidRange(off, s, t_out, t_in, &lo, &hi);
          for (int64_t t = lo; t < hi; ++t) orow[t * s + off] += w * xrow[t];
        }
      }
    }
  }
  std::vector<Tensor> inputs{x, weight};
  if (has_bias) inputs.push_back(bias);
  return MakeResult(
      {batch, c_out, t_out}, std::move(y), inputs, [=](Node& self) {
        Node& nx = *self.inputs[0];
        Node& nw = *self.inputs[1];
        const double* gy = self.grad.data();
        if (has_bias && self.inputs[2]->requires_grad) {
          auto& gb = self.inputs[2]->GradBuffer();
          for (int64_t b = 0; b < batch; ++b)
            for (int64_t co = 0; co < c_out; ++co) {
              const double* grow = gy + (b * c_out + co) * t_out;
              double acc = 0.0;
              for (int64_t t = 0; t < t_out; ++t) acc += grow[t];
              gb[static_cast<size_t>(co)] += acc;
            }
        }
        double* gx = nx.requires_grad ? nx.GradBuffer().data() : nullptr;
        double* gw = nw.requires_grad ? nw.GradBuffer().data() : nullptr;
        for (int64_t b = 0; b < batch; ++b) {
          for (int64_t co = 0; co < c_out; ++co) {
            const double* grow = gy + (b * c_out + co) * t_out;
            for (int64_t ci = 0; ci < c_in; ++ci) {
              const int64_t xoff = (b * c_in + ci) * t_in;
              const double* xrow = nx.value.data() + xoff;
              const int64_t woff = (ci * c_out + co) * k;
              for (int64_t kk = 0; kk < k; ++kk) {
                const int64_t off = kk - p;
                int64_t lo, hi;
                ValidRange(off, s, t_out, t_in, &lo, &hi);
                if (gw != nullptr) {
                  double acc = 0.0;
                  for (int64_t t = lo; t < hi; ++t) acc += xrow[t] * grow[t * s + off];
                  gw[woff + kk] += acc;
                }
                if (gx != nullptr) {
                  const double w = nw.value[static_cast<size_t>(woff + kk)];
                  double* gxrow = gx + xoff;
                  for (int64_t t = lo; t < hi; ++t) gxrow[t] += w * grow[t * s + off];
                }
              }
            }
          }
        }
      });
}

Tensor AvgPool1d(const Tensor& x, int kernel, int stride, int padding) {
  RequireRank(x, 3, "AvgPool1d");
  const int64_t rows = x.dim(0) * x.dim(1), t_in = x.dim(2);
  Require(kernel >= 1 && stride >= 1 && padding >= 0, "AvgPool1d: options");
  Require(t_in + 2 * padding >= kernel, "AvgPool1d: input too short");
  const int64_t t_out = (t_in + 2 * padding - kernel) / stride + 1;
  const double inv = 1.0 / kernel;
  const auto& xv = x.values();
  std::vector<double> y(static_cast<size_t>(rows * t_out), 0.0);
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t t = 0; t < t_out; ++t) {
      double acc = 0.0;
      for (int64_t kk = 0; kk < kernel; ++kk) {
        const int64_t i = t * stride + kk - padding;
        if (i >= 0 && i < t_in) acc += xv[static_cast<size_t>(r * t_in + i)];
      }
      y[static_cast<size_t>(r * t_out + t)] = acc * inv;
    }
  }
  return MakeResult({x.dim(0), x.dim(1), t_out}, std::move(y), {x},
                    [=](Node& self) {
                      auto& g = self.inputs[0]->GradBuffer();
                      for (int64_t r = 0; r < rows; ++r)
                        for (int64_t t = 0; t < t_out; ++t) {
                          const double go = self.grad[static_cast<size_t>(r * t_out + t)] * inv;
                          for (int64_t kk = 0; kk < kernel; ++kk) {
                            const int64_t i = t * stride + kk - padding;
                            if (i >= 0 && i < t_in) g[static_cast<size_t>(r * t_in + i)] += go;
                          }
                        }
                    });
}

Tensor PadReflect(const Tensor& x, int left, int right) {
  RequireRank(x, 3, "PadReflect");
  Require(left >= 0 && right >= 0, "PadReflect: negative padding");
  const int64_t rows = x.dim(0) * x.dim(1), t_in = x.dim(2);
  Require(t_in > 0, "PadReflect: empty input");
  const int64_t t_out = t_in + left + right;
  std::vector<size_t> src(static_cast<size_t>(t_out));
  for (int64_t i = 0; i < t_out; ++i) src[static_cast<size_t>(i)] = Reflect(i - left, t_in);
  const auto& xv = x.values();
  std::vector<double> y(static_cast<size_t>(rows * t_out));
  for (int64_t r = 0; r < rows; ++r)
    for (int64_t i = 0; i < t_out; ++i)
      y[static_cast<size_t>(r * t_out + i)] = xv[static_cast<size_t>(r * t_in) + src[static_cast<size_t>(i)]];
  return MakeResult({x.dim(0), x.dim(1), t_out}, std::move(y), {x},
                    [rows, t_in, t_out, src = std::move(src)](Node& self) {
                      auto& g = self.inputs[0]->GradBuffer();
                      for (int64_t r = 0; r < rows; ++r)
                        for (int64_t i = 0; i < t_out; ++i)
                          g[static_cast<size_t>(r * t_in) + src[static_cast<size_t>(i)]] +=
                              self.grad[static_cast<size_t>(r * t_out + i)];
                    });
}

Tensor PeriodFold(const Tensor& x, int period) {
  RequireRank(x, 3, "PeriodFold");
  const int64_t batch = x.dim(0), c = x.dim(1), t = x.dim(2);
  Require(period >= 1 && t % period == 0,
          "PeriodFold: length must be a multiple of the period");
  const int64_t h = t / period;
  const auto& xv = x.values();
  std::vector<double> y(xv.size());
  // out index ((b * P + j) * C + ch) * H + hh  <-  (b * C + ch) * T + hh * P + j
  auto map = [=](int64_t b, int64_t j, int64_t ch, int64_t hh) {
    return std::pair<size_t, size_t>(
        static_cast<size_t>(((b * period + j) * c + ch) * h + hh),
        static_cast<size_t>((b * c + ch) * t + hh * period + j));
  };
  for (int64_t b = 0; b < batch; ++b)
    for (int64_t j = 0; j < period; ++j)
      for (int64_t ch = 0; ch < c; ++ch)
        for (int64_t hh = 0; hh < h; ++hh) {
          auto [o, i] = map(b, j, ch, hh);
          y[o] = xv[i];
        }
  return MakeResult({batch * period, c, h}, std::move(y), {x},
                    [=](Node& self) {
                      auto& g = self.inputs[0]->GradBuffer();
                      for (int64_t b = 0; b < batch; ++b)
                        for (int64_t j = 0; j < period; ++j)
                          for (int64_t ch = 0; ch < c; ++ch)
                            for (int64_t hh = 0; hh < h; ++hh) {
                              auto [o, i] = map(b, j, ch, hh);
                              g[i] += self.grad[o];
                            }
                    });
}

Tensor FrameSignal(const Tensor& x, int fft_size, int hop_size) {
  RequireRank(x, 2, "FrameSignal");
  Require(fft_size > 0 && hop_size > 0, "FrameSignal: invalid sizes");
  const int64_t batch = x.dim(0), t = x.dim(1);
  Require(t > 0, "FrameSignal: empty signal");
  const int64_t frames = (t + hop_size - 1) / hop_size;
  const int64_t half = fft_size / 2;
  std::vector<size_t> src(static_cast<size_t>(frames * fft_size));
  for (int64_t f = 0; f < frames; ++f)
    for (int64_t i = 0; i < fft_size; ++i)
      src[static_cast<size_t>(f * fft_size + i)] = Reflect(f * hop_size - half + i, t);
  const auto& xv = x.values();
  std::vector<double> y(static_cast<size_t>(batch * frames * fft_size));
  for (int64_t b = 0; b < batch; ++b)
    for (size_t i = 0; i < src.size(); ++i)
      y[static_cast<size_t>(b) * src.size() + i] = xv[static_cast<size_t>(b * t) + src[i]];
  return MakeResult({batch * frames, fft_size}, std::move(y), {x},
                    [batch, t, src = std::move(src)](Node& self) {
                      auto& g = self.inputs[0]->GradBuffer();
                      for (int64_t b = 0; b < batch; ++b)
                        for (size_t i = 0; i < src.size(); ++i)
                          g[static_cast<size_t>(b * t) + src[i]] +=
                              self.grad[static_cast<size_t>(b) * src.size() + i];
                    });
}

Tensor ComplexMagnitude(const Tensor& x) {
  RequireRank(x, 2, "ComplexMagnitude");
  const int64_t n = x.dim(0), two_k = x.dim(1);
  Require(two_k % 2 == 0, "ComplexMagnitude: odd column count");
  const int64_t k = two_k / 2;
  const auto& xv = x.values();
  std::vector<double> y(static_cast<size_t>(n * k));
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < k; ++j) {
      const double re = xv[static_cast<size_t>(i * two_k + j)];
      const double im = xv[static_cast<size_t>(i * two_k + k + j)];
      y[static_cast<size_t>(i * k + j)] = std::sqrt(re * re + im * im);
    }
  return MakeResult({n, k}, std::move(y), {x}, [n, k, two_k](Node& self) {
    Node& in = *self.inputs[0];
    auto& g = in.GradBuffer();
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < k; ++j) {
        const double mag = self.value[static_cast<size_t>(i * k + j)];
        if (mag == 0.0) continue;
        const double go = self.grad[static_cast<size_t>(i * k + j)] / mag;
        g[static_cast<size_t>(i * two_k + j)] += go * in.value[static_cast<size_t>(i * two_k + j)];
        g[static_cast<size_t>(i * two_k + k + j)] += go * in.value[static_cast<size_t>(i * two_k + k + j)];
      }
  });
}

}  // namespace r2w::nn
