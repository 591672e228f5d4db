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

#ifndef R2W_VOCODER_TRAINER_H_
#define R2W_VOCODER_TRAINER_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "r2w/nn/optim.h"
#include "r2w/representation/sequence.h"
#include "r2w/signal/waveform.h"
#include "r2w/vocoder/config.h"
#include "r2w/vocoder/discriminator.h"
#include "r2w/vocoder/generator.h"
#include "r2w/vocoder/losses.h"

namespace r2w::vocoder {

// Frame features paired with the audio they came from. The audio is
// zero-padded or truncated to exactly n_frames * 480 samples.
struct TrainingPair {
  std::string id;
  rep::RepresentationSequence features;
  signal::Waveform audio;
};

TrainingPair MakeTrainingPair(std::string id, rep::RepresentationSequence features,
                              signal::Waveform audio);

// Alternating discriminator / generator optimization. Single-threaded and
// fully determined by the config seed.
class VocoderTrainer {
 public:
  // `layer_tag` names the feature space (a LayerSpec tag, or "mel") and is
  // stamped into every checkpoint.
  VocoderTrainer(const VocoderConfig& config, std::string layer_tag);

  // Random grid-aligned crops of a batch, plus the generator output once
  // computed.
  struct Crops {
    nn::Tensor input;     // [b, input_dim, frames]
    nn::Tensor real;      // [b, 1, frames * hop]
    nn::Tensor real_mel;  // no history
    nn::Tensor fake;      // set by UpdateDiscriminator
  };
  Crops SampleCrops(const std::vector<const TrainingPair*>& batch);
  // Minimizes the discriminator loss; generator parameters are untouched.
  double UpdateDiscriminator(Crops& crops);
  // Minimizes the generator loss against the frozen discriminator.
  LossBreakdown UpdateGenerator(Crops& crops);

  // SampleCrops, UpdateDiscriminator, UpdateGenerator; advances step().
  LossBreakdown Step(const std::vector<const TrainingPair*>& batch);

  // Runs until step() == config.train.steps, sampling batches from `data`.
  // Writes a loss log row per step and checkpoints into `out_dir`
  // (step_<n>.ckpt every checkpoint_every steps, and final.ckpt). A resumed
  // trainer keeps the log rows up to its current step.
  void Train(const std::vector<TrainingPair>& data, const std::filesystem::path& out_dir);

  void SaveCheckpoint(const std::filesystem::path& path) const;
  // Restores a full training state written by SaveCheckpoint. ConfigError if
  // the architecture or feature space differs.
  void LoadCheckpoint(const std::filesystem::path& path);

  int64_t step() const { return step_; }
  Generator& generator() { return *generator_; }
  Discriminator& discriminator() { return *discriminator_; }
  const VocoderConfig& config() const { return config_; }

 private:
  int64_t epoch_of_step() const;

  VocoderConfig config_;
  std::string layer_tag_;
  nn::Rng rng_;
  std::unique_ptr<Generator> generator_;
  std::unique_ptr<Discriminator> discriminator_;
  std::unique_ptr<nn::Adam> opt_g_;
  std::unique_ptr<nn::Adam> opt_d_;
  MelTransform mel_;
  int64_t step_ = 0;
  int64_t dataset_size_ = 1;  // sets the epoch length for the lr decay
  bool resumed_ = false;
};

// A generator restored from a vocoder checkpoint for inference.
struct LoadedGenerator {
  std::unique_ptr<Generator> generator;
  std::string layer_tag;
  int64_t step = 0;
};
LoadedGenerator LoadGenerator(const std::filesystem::path& path);

}  // namespace r2w::vocoder

#endif  // R2W_VOCODER_TRAINER_H_
