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

#ifndef R2W_PIPELINE_PREPARE_H_
#define R2W_PIPELINE_PREPARE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "r2w/pipeline/config.h"
#include "r2w/pipeline/features.h"
#include "r2w/pipeline/manifest.h"
#include "r2w/signal/snr.h"

namespace r2w::pipeline {

struct PreparedUtterance {
  UtteranceRecord source;  // source.audio is the clean recording
  std::filesystem::path noisy_audio;
  std::filesystem::path enhanced_audio;
  std::string noise;
  double achieved_snr_db = 0.0;
};

struct PrepareRow {
  std::string id;
  std::string noise;
  double achieved_snr_db = 0.0;
  signal::Snr noisy_estimate = signal::Snr::Unmeasurable();
  signal::Snr enhanced_estimate = signal::Snr::Unmeasurable();
  // Mixing and enhancement were skipped because inputs were unchanged.
  bool reused = false;
  int feature_hits = 0;
  int feature_misses = 0;
  std::string error;  // empty on success
};

struct PreparedCorpus {
  std::filesystem::path dir;
  std::vector<PreparedUtterance> utterances;  // successful ones, manifest order
  std::vector<PrepareRow> rows;               // every utterance, manifest order
  int failed = 0;
  int reused = 0;
};

// Index of the noise clip for `utterance_id` among `n_clips`, and the seed
// of its circular offset, both from a SHA-256 of the seed and id.
struct NoiseChoice {
  size_t index = 0;
  uint64_t offset_seed = 0;
};
NoiseChoice ChooseNoise(uint64_t seed, const std::string& utterance_id, size_t n_clips);

// For every utterance of the TTS manifest: mix with its noise clip at
// mix_snr_db, enhance once, and cache features of the enhanced audio for
// each of `spaces`. Writes under <output_dir>/prepared: noisy/ and
// enhanced/ WAVs, manifest.jsonl, report.csv and audit.csv (one line per
// utterance: "enhance" or "reuse"). Per-utterance failures are recorded;
// DataError if more than max_failure_fraction of utterances fail or the
// noise corpus is empty (checked before any work).
PreparedCorpus PrepareData(const ExperimentConfig& config, const std::vector<FeatureSpace>& spaces);

// Reads a corpus written by PrepareData. DataError if absent.
PreparedCorpus LoadPreparedCorpus(const ExperimentConfig& config);

// Report CSV for the rows, byte-deterministic.
std::string PrepareReportCsv(const std::vector<PrepareRow>& rows);

}  // namespace r2w::pipeline

#endif  // R2W_PIPELINE_PREPARE_H_
