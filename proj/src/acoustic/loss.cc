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

#include "r2w/acoustic/loss.h"

#include <stdexcept>

#include "r2w/nn/ops.h"
#include "r2w/util/error.h"

namespace r2w::acoustic {

using nn::Tensor;

VarianceTargets MakeVarianceTargets(const PhonemeSequence& seq, const VarianceStats& stats) {
  const size_t n = seq.size();
  if (seq.durations.size() != n || seq.pitch.size() != n || seq.energy.size() != n) {
    throw DataError("training sequences need duration, pitch and energy targets");
  }
  VarianceTargets t;
  for (size_t i = 0; i < n; ++i) {
    t.log_duration.push_back(LogDurationTarget(seq.durations[i]));
    t.pitch.push_back((seq.pitch[i] - stats.pitch_mean) / stats.pitch_std);
    t.energy.push_back((seq.energy[i] - stats.energy_mean) / stats.energy_std);
  }
  return t;
}

AcousticLossBreakdown AcousticLossTerms::values() const {
  return {rep_l1.item(), dur_mse.item(), pitch_mse.item(), energy_mse.item(), total.item()};
}

AcousticLossTerms AcousticLoss(const Tensor& predicted_rep, const Tensor& target_rep,
                               const Tensor& log_duration, const Tensor& pitch,
                               const Tensor& energy, const VarianceTargets& targets,
                               const AcousticLossWeights& weights) {
  if (predicted_rep.shape() != target_rep.shape()) {
    throw std::invalid_argument("AcousticLoss: predicted " +
                                nn::ShapeToString(predicted_rep.shape()) + " vs target " +
                                nn::ShapeToString(target_rep.shape()));
  }
  const auto n = static_cast<int64_t>(targets.log_duration.size());
  if (log_duration.numel() != n || pitch.numel() != n || energy.numel() != n ||
      static_cast<int64_t>(targets.pitch.size()) != n ||
      static_cast<int64_t>(targets.energy.size()) != n) {
    throw std::invalid_argument("AcousticLoss: variance lengths disagree");
  }
  AcousticLossTerms t;
  t.rep_l1 = nn::L1Loss(predicted_rep, target_rep);
  t.dur_mse = nn::MseLoss(log_duration, Tensor::FromVector({n}, targets.log_duration));
  t.pitch_mse = nn::MseLoss(pitch, Tensor::FromVector({n}, targets.pitch));
  t.energy_mse = nn::MseLoss(energy, Tensor::FromVector({n}, targets.energy));
  t.total = nn::Add(nn::Add(nn::MulScalar(t.rep_l1, weights.representation),
                            nn::MulScalar(t.dur_mse, weights.duration)),
                    nn::Add(nn::MulScalar(t.pitch_mse, weights.pitch),
                            nn::MulScalar(t.energy_mse, weights.energy)));
  return t;
}

}  // namespace r2w::acoustic
