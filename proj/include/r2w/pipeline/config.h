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

#ifndef R2W_PIPELINE_CONFIG_H_
#define R2W_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "r2w/acoustic/config.h"
#include "r2w/pipeline/features.h"
#include "r2w/representation/backend.h"
#include "r2w/vocoder/config.h"

namespace r2w::pipeline {

struct EvaluationSettings {
  std::vector<std::string> metrics = {"snr_db", "speaker_similarity"};
  // Command for mos_lqo; empty disables that metric.
  std::string quality_tool;
  // Manifest split whose utterances are synthesized and scored.
  std::string test_split = "test";
};

// Everything one experiment needs. Loaded from JSON; relative paths are
// resolved against the config file's directory.
struct ExperimentConfig {
  std::filesystem::path output_dir = "runs/r2w";
  // Text/speech corpus for the acoustic model.
  std::filesystem::path tts_manifest;
  // Clean multi-speaker corpus for the vocoder.
  std::filesystem::path vocoder_manifest;
  // Directory of noise WAV files.
  std::filesystem::path noise_root;
  // Empty: $R2W_CACHE_DIR, else <output_dir>/cache.
  std::filesystem::path cache_dir;
  double mix_snr_db = 5.0;
  nlohmann::json enhancer = {{"kind", "spectral_subtraction"}};
  // {"kind": "mock", "seed", "num_layers", "dim"} or
  // {"kind": "external", "command", "checkpoint", "num_layers", "dim"}.
  nlohmann::json backend = {{"kind", "mock"}, {"seed", 1}, {"num_layers", 12}, {"dim", 768}};
  // Feature space used by the single-model commands.
  std::string features = "layer12";
  // Feature spaces compared by the sweep.
  std::vector<std::string> sweep = {"mel",    "layer0",  "layer1", "layer3",
                                    "layer5", "layer12", "average"};
  // Only "rep_aligned" (hop 480 = 20 ms at 24 kHz) is consistent with the
  // representation grid.
  std::string spectral_preset = "rep_aligned";
  // Base model sizes: "tiny" (smoke tests), "toy" or "full";
  // "vocoder"/"acoustic" overlay it.
  std::string preset = "toy";
  nlohmann::json vocoder = nlohmann::json::object();
  nlohmann::json acoustic = nlohmann::json::object();
  // Noise selection and, unless an overlay sets one, both training seeds.
  uint64_t seed = 1234;
  int workers = 1;
  double max_failure_fraction = 0.1;
  EvaluationSettings evaluation;

  // ConfigError on any inconsistency, including a layer beyond the backend.
  void Validate() const;
  std::filesystem::path CacheRoot() const;
  FeatureSpace Features() const { return FeatureSpace::Parse(features); }
  std::vector<FeatureSpace> SweepSpaces() const;
  // Preset plus overlay, with the feature dimension filled in.
  vocoder::VocoderConfig VocoderFor(int input_dim) const;
  acoustic::AcousticConfig AcousticFor(int output_dim) const;
};

nlohmann::json ToJson(const ExperimentConfig& c);
// Strict: unknown keys raise ConfigError. `base_dir` anchors relative paths.
ExperimentConfig ExperimentConfigFromJson(const nlohmann::json& j,
                                          const std::filesystem::path& base_dir = {});

// "a.b.c=value": value is parsed as JSON when possible, else taken as a
// string. Intermediate objects are created. ConfigError on a malformed
// override.
void ApplyOverride(nlohmann::json& j, const std::string& assignment);

// Reads a JSON config file, applies overrides in order, validates.
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      const std::vector<std::string>& overrides = {});

std::unique_ptr<rep::RepresentationBackend> MakeBackend(const nlohmann::json& spec);

// Config echo for an artifact directory. Writes experiment.json (the full
// config) and stage.json (`fingerprint`, the settings that determine this
// directory's contents). A directory whose stage.json differs was produced
// by another configuration: ConfigError.
void EchoConfig(const std::filesystem::path& dir, const ExperimentConfig& config,
                const nlohmann::json& fingerprint);

}  // namespace r2w::pipeline

#endif  // R2W_PIPELINE_CONFIG_H_
