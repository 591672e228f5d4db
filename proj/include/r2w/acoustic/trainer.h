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

#ifndef R2W_ACOUSTIC_TRAINER_H_
#define R2W_ACOUSTIC_TRAINER_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "r2w/acoustic/config.h"
#include "r2w/acoustic/loss.h"
#include "r2w/acoustic/model.h"
#include "r2w/nn/optim.h"
#include "r2w/representation/sequence.h"
#include "r2w/signal/waveform.h"

namespace r2w::acoustic {

struct AcousticExample {
  std::string id;
  PhonemeSequence phonemes;  // with durations, pitch (Hz) and energy
  rep::RepresentationSequence target;
};

// Builds a training example from phoneme ids, optional aligner durations
// (empty: uniform split), the enhanced 24 kHz audio and its extracted
// representation. Durations are reconciled to the target frame count;
// pitch and energy are phoneme averages of frame-level estimates on the
// 20 ms grid. DataError when the alignment is off by more than 2 frames.
AcousticExample MakeAcousticExample(std::string id, std::vector<int64_t> ids,
                                    std::vector<int> durations, const signal::Waveform& audio,
                                    rep::RepresentationSequence target);

// Single-threaded, seed-determined training on teacher-forced sequences.
class AcousticTrainer {
 public:
  AcousticTrainer(const AcousticConfig& config, std::string layer_tag);

  // One optimizer update on the mean loss over `batch`.
  AcousticLossBreakdown Step(const std::vector<const AcousticExample*>& batch);
  // Mean loss over `data` without updating anything.
  AcousticLossBreakdown Evaluate(const std::vector<AcousticExample>& data) const;

  // Fits the variance statistics on `data` unless resumed, then runs until
  // step() == config.train.steps. Writes loss_log.csv and checkpoints into
  // `out_dir` like the vocoder trainer.
  void Train(const std::vector<AcousticExample>& data, const std::filesystem::path& out_dir);

  void SaveCheckpoint(const std::filesystem::path& path) const;
  void LoadCheckpoint(const std::filesystem::path& path);

  int64_t step() const { return step_; }
  AcousticModel& model() { return *model_; }
  const AcousticConfig& config() const { return config_; }

 private:
  AcousticLossTerms ExampleLoss(const AcousticExample& ex) const;
  void CheckExample(const AcousticExample& ex) const;

  AcousticConfig config_;
  std::string layer_tag_;
  nn::Rng rng_;
  std::unique_ptr<AcousticModel> model_;
  std::unique_ptr<nn::Adam> opt_;
  int64_t step_ = 0;
  bool resumed_ = false;
};

struct LoadedAcousticModel {
  std::unique_ptr<AcousticModel> model;
  std::string layer_tag;
  int64_t step = 0;
};
LoadedAcousticModel LoadAcousticModel(const std::filesystem::path& path);

}  // namespace r2w::acoustic

#endif  // R2W_ACOUSTIC_TRAINER_H_
