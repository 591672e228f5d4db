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

#ifndef R2W_PIPELINE_STAGES_H_
#define R2W_PIPELINE_STAGES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "r2w/acoustic/trainer.h"
#include "r2w/evaluation/report.h"
#include "r2w/pipeline/config.h"
#include "r2w/pipeline/features.h"
#include "r2w/pipeline/prepare.h"
#include "r2w/vocoder/trainer.h"

namespace r2w::pipeline {

// Which recordings the acoustic model learns from.
enum class AcousticSource { kEnhanced, kClean };

// final.ckpt if present, else the step_<n>.ckpt with the largest n, else
// nullopt.
std::optional<std::filesystem::path> LatestCheckpoint(const std::filesystem::path& dir);

// <output_dir>/vocoder/<tag>.
std::filesystem::path VocoderDir(const ExperimentConfig& config, const FeatureSpace& space);
// <output_dir>/acoustic/<tag>, with a "-clean" suffix for the clean source.
std::filesystem::path AcousticDir(const ExperimentConfig& config, const FeatureSpace& space,
                                  AcousticSource source = AcousticSource::kEnhanced);

// Trains (or resumes) the vocoder on clean speech of the vocoder manifest in
// `space`, single-instance per directory. Returns the final checkpoint.
std::filesystem::path TrainVocoderStage(const ExperimentConfig& config, const FeatureSpace& space);

// Trains (or resumes) the acoustic model on the training split of the
// prepared corpus. Returns the final checkpoint.
std::filesystem::path TrainAcousticStage(const ExperimentConfig& config, const FeatureSpace& space,
                                         AcousticSource source = AcousticSource::kEnhanced);

// Text-to-waveform inference through a compatible model pair.
class Synthesizer {
 public:
  // ConfigError if the checkpoints disagree on feature space or dimension.
  Synthesizer(const std::filesystem::path& acoustic_checkpoint,
              const std::filesystem::path& vocoder_checkpoint);

  // `durations`, if given, override the duration predictor. The result has
  // exactly (predicted frames) * 480 samples. DataError on unknown or
  // out-of-range phonemes.
  signal::Waveform Synthesize(const std::vector<int64_t>& phoneme_ids,
                              const std::vector<int>& durations = {},
                              std::vector<int>* durations_used = nullptr) const;
  signal::Waveform Synthesize(const std::string& phonemes,
                              const std::vector<int>& durations = {}) const;

  const std::string& layer_tag() const { return layer_tag_; }

 private:
  acoustic::LoadedAcousticModel acoustic_;
  vocoder::LoadedGenerator vocoder_;
  std::string layer_tag_;
};

struct SweepOptions {
  // false: every per-space checkpoint must already exist.
  bool train = true;
};

// For every feature space: obtain the vocoder and acoustic model (training
// with the configured preset, or loading), synthesize the test split and
// score it against the clean recordings. Writes under <output_dir>/sweep:
// report_long.csv / report_wide.csv (one condition per space), the vocoder
// resynthesis of the noisy mixtures in vocoder/report_*.csv, synthesized
// audio per space, and figure.png (clean on top, then each space).
// ConfigError on an empty list; DataError on missing artifacts.
eval::EvalReport RunLayerSweep(const ExperimentConfig& config,
                               const std::vector<FeatureSpace>& spaces,
                               const SweepOptions& options = {});

// Scores directories of <id>.wav files (one per condition label) against
// the clean recordings of the test split. Writes report CSVs and a figure
// of the first test utterance under `out_dir`.
eval::EvalReport EvaluateDirectories(const ExperimentConfig& config,
                                     const std::vector<std::pair<std::string, std::filesystem::path>>& conditions,
                                     const std::filesystem::path& out_dir);

}  // namespace r2w::pipeline

#endif  // R2W_PIPELINE_STAGES_H_
