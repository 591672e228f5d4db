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

#include "r2w/vocoder/losses.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "r2w/nn/ops.h"
#include "r2w/util/error.h"

namespace r2w::vocoder {

using nn::Tensor;

namespace {

Tensor Accumulate(const Tensor& acc, const Tensor& term) {
  return acc.defined() ? nn::Add(acc, term) : term;
}

}  // namespace

Tensor AdvLossD(const std::vector<Tensor>& real_scores,
                const std::vector<Tensor>& fake_scores) {
  if (real_scores.empty() || real_scores.size() != fake_scores.size()) {
    throw std::invalid_argument("AdvLossD: real/fake score lists differ");
  }
  Tensor total;
  for (size_t k = 0; k < real_scores.size(); ++k) {
    if (real_scores[k].shape() != fake_scores[k].shape()) {
      throw std::invalid_argument("AdvLossD: score map " + std::to_string(k) +
                                  " shapes differ");
    }
    Tensor r = nn::Mean(nn::Square(nn::AddScalar(real_scores[k], -1.0)));
    Tensor f = nn::Mean(nn::Square(fake_scores[k]));
    total = Accumulate(total, nn::Add(r, f));
  }
  return total;
}

Tensor AdvLossG(const std::vector<Tensor>& fake_scores) {
  if (fake_scores.empty()) throw std::invalid_argument("AdvLossG: no score maps");
  Tensor total;
  for (const auto& f : fake_scores) {
    total = Accumulate(total, nn::Mean(nn::Square(nn::AddScalar(f, -1.0))));
  }
  return total;
}

Tensor FeatureMatchingLoss(const std::vector<std::vector<Tensor>>& real,
                           const std::vector<std::vector<Tensor>>& fake) {
  if (real.empty() || real.size() != fake.size()) {
    throw std::invalid_argument("FeatureMatchingLoss: structure mismatch");
  }
  Tensor total;
  for (size_t k = 0; k < real.size(); ++k) {
    if (real[k].size() != fake[k].size() || real[k].empty()) {
      throw std::invalid_argument("FeatureMatchingLoss: layer count mismatch");
    }
    for (size_t l = 0; l < real[k].size(); ++l) {
      total = Accumulate(total, nn::L1Loss(real[k][l], fake[k][l]));
    }
  }
  return total;
}

MelTransform::MelTransform(const signal::SpectralConfig& config) : config_(config) {
  config_.Validate();
  const int n = config_.fft_size;
  const int bins = config_.n_bins();
  const auto window = signal::PaddedHannWindow(config_.window_size, n);
  std::vector<double> basis(static_cast<size_t>(n) * 2 * bins);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < bins; ++k) {
      // Reduce the phase index mod n before scaling to keep it exact.
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>((static_cast<int64_t>(i) * k) % n) / n;
      basis[static_cast<size_t>(i) * 2 * bins + k] = window[i] * std::cos(angle);
      basis[static_cast<size_t>(i) * 2 * bins + bins + k] = -window[i] * std::sin(angle);
    }
  }
  basis_ = Tensor::FromVector({n, 2 * bins}, std::move(basis));
  const auto fb = signal::MelFilterbank(config_);  // [n_mels, bins]
  std::vector<double> fbt(fb.size());
  for (int m = 0; m < config_.n_mels; ++m) {
    for (int k = 0; k < bins; ++k) {
      fbt[static_cast<size_t>(k) * config_.n_mels + m] = fb[static_cast<size_t>(m) * bins + k];
    }
  }
  filterbank_ = Tensor::FromVector({bins, config_.n_mels}, std::move(fbt));
}

Tensor MelTransform::Forward(const Tensor& wave) const {
  Tensor x = wave;
  if (x.rank() == 3) {
    if (x.dim(1) != 1) throw std::invalid_argument("MelTransform: expected one channel");
    x = nn::Reshape(x, {x.dim(0), x.dim(2)});
  }
  if (x.rank() != 2) throw std::invalid_argument("MelTransform: expected [b, t]");
  Tensor frames = nn::FrameSignal(x, config_.fft_size, config_.hop_size);
  Tensor mag = nn::ComplexMagnitude(nn::Matmul(frames, basis_));
  return nn::LogClampMin(nn::Matmul(mag, filterbank_), config_.log_floor);
}

double MelLoss(const signal::Waveform& real, const signal::Waveform& fake,
               const signal::SpectralConfig& config) {
  if (real.size() != fake.size()) {
    throw std::invalid_argument("MelLoss: lengths differ (" + std::to_string(real.size()) +
                                " vs " + std::to_string(fake.size()) + ")");
  }
  const auto a = signal::ComputeMelSpectrogram(real, config);
  const auto b = signal::ComputeMelSpectrogram(fake, config);
  double acc = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) acc += std::abs(a.values[i] - b.values[i]);
  return acc / static_cast<double>(a.values.size());
}

LossBreakdown TotalGeneratorLoss(double adv_g, double fm, double mel,
                                 const LossWeights& weights) {
  if (!std::isfinite(adv_g) || !std::isfinite(fm) || !std::isfinite(mel)) {
    throw NumericError("non-finite generator loss component (adv_g " + std::to_string(adv_g) +
                       ", fm " + std::to_string(fm) + ", mel " + std::to_string(mel) + ")");
  }
  LossBreakdown out;
  out.adv_g = adv_g;
  out.fm = fm;
  out.mel = mel;
  out.alpha = weights.alpha;
  out.beta = weights.beta;
  out.total_g = adv_g + weights.alpha * fm + weights.beta * mel;
  return out;
}

Tensor TotalGeneratorLoss(const Tensor& adv_g, const Tensor& fm, const Tensor& mel,
                          const LossWeights& weights) {
  return nn::Add(nn::Add(adv_g, nn::MulScalar(fm, weights.alpha)),
                 nn::MulScalar(mel, weights.beta));
}

}  // namespace r2w::vocoder
