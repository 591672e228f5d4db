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

#ifndef R2W_ACOUSTIC_LOSS_H_
#define R2W_ACOUSTIC_LOSS_H_

#include <vector>

#include "r2w/acoustic/config.h"
#include "r2w/acoustic/model.h"
#include "r2w/nn/tensor.h"

namespace r2w::acoustic {

// Regression targets in the units the predictors emit.
struct VarianceTargets {
  std::vector<double> log_duration;
  std::vector<double> pitch;   // normalized
  std::vector<double> energy;  // normalized
};

// DataError unless `seq` carries durations, pitch and energy.
VarianceTargets MakeVarianceTargets(const PhonemeSequence& seq, const VarianceStats& stats);

struct AcousticLossBreakdown {
  double rep_l1 = 0.0;
  double dur_mse = 0.0;
  double pitch_mse = 0.0;
  double energy_mse = 0.0;
  double total = 0.0;
};

struct AcousticLossTerms {
  nn::Tensor rep_l1, dur_mse, pitch_mse, energy_mse, total;
  AcousticLossBreakdown values() const;
};

// Weighted sum of the representation L1 and the three variance MSEs.
// invalid_argument when frame counts or phoneme counts disagree.
AcousticLossTerms AcousticLoss(const nn::Tensor& predicted_rep, const nn::Tensor& target_rep,
                               const nn::Tensor& log_duration, const nn::Tensor& pitch,
                               const nn::Tensor& energy, const VarianceTargets& targets,
                               const AcousticLossWeights& weights = {});

}  // namespace r2w::acoustic

#endif  // R2W_ACOUSTIC_LOSS_H_
