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

// GAN vocoder objectives. Reduction rule: within a sub-discriminator, the
// mean over elements; across sub-discriminators, the sum.

#ifndef R2W_VOCODER_LOSSES_H_
#define R2W_VOCODER_LOSSES_H_

#include <vector>

#include "r2w/nn/tensor.h"
#include "r2w/signal/spectral.h"
#include "r2w/signal/waveform.h"
#include "r2w/vocoder/config.h"

namespace r2w::vocoder {

// sum_k mean((real_k - 1)^2) + mean(fake_k^2).
nn::Tensor AdvLossD(const std::vector<nn::Tensor>& real_scores,
                    const std::vector<nn::Tensor>& fake_scores);
// sum_k mean((fake_k - 1)^2).
nn::Tensor AdvLossG(const std::vector<nn::Tensor>& fake_scores);
// sum_k sum_l mean|real_kl - fake_kl|.
nn::Tensor FeatureMatchingLoss(const std::vector<std::vector<nn::Tensor>>& real,
                               const std::vector<std::vector<nn::Tensor>>& fake);

// Differentiable log-mel: framing, a fixed windowed DFT basis, exact
// magnitudes, the mel filterbank and the log floor. Matches
// signal::ComputeMelSpectrogram for the same config.
class MelTransform {
 public:
  explicit MelTransform(const signal::SpectralConfig& config);

  // wave: [b, 1, t] or [b, t] -> [b * n_frames, n_mels], utterance-major.
  nn::Tensor Forward(const nn::Tensor& wave) const;
  const signal::SpectralConfig& config() const { return config_; }

 private:
  signal::SpectralConfig config_;
  nn::Tensor basis_;       // [fft, 2 * n_bins]
  nn::Tensor filterbank_;  // [n_bins, n_mels]
};

// Mean |log-mel(real) - log-mel(fake)| over all cells. std::invalid_argument
// on length mismatch.
double MelLoss(const signal::Waveform& real, const signal::Waveform& fake,
               const signal::SpectralConfig& config);

struct LossBreakdown {
  double adv_d = 0.0;
  double adv_g = 0.0;
  double fm = 0.0;
  double mel = 0.0;
  double total_g = 0.0;
  double alpha = 2.0;
  double beta = 45.0;
};

// total_g = adv_g + alpha * fm + beta * mel. NumericError on a non-finite
// component.
LossBreakdown TotalGeneratorLoss(double adv_g, double fm, double mel,
                                 const LossWeights& weights = {});
nn::Tensor TotalGeneratorLoss(const nn::Tensor& adv_g, const nn::Tensor& fm,
                              const nn::Tensor& mel, const LossWeights& weights);

}  // namespace r2w::vocoder

#endif  // R2W_VOCODER_LOSSES_H_
