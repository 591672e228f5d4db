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

#ifndef R2W_PIPELINE_TOY_CORPUS_H_
#define R2W_PIPELINE_TOY_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "r2w/signal/waveform.h"

namespace r2w::pipeline {

// Formant-style rendering of a phoneme sequence at 24 kHz: voiced phonemes
// are harmonics of f0 weighted by two phoneme-specific resonances,
// obstruents are noise bursts, "sil"/"sp" are silent. Each phoneme lasts
// durations[i] * 480 samples. Deterministic in all arguments.
signal::Waveform SynthesizeToySpeech(const std::vector<int64_t>& ids,
                                     const std::vector<int>& durations, double f0_hz,
                                     uint64_t seed);

struct ToyCorpusOptions {
  int tts_utterances = 20;
  // The last `test_utterances` get split "test".
  int test_utterances = 4;
  int vocoder_utterances = 8;
  int vocoder_speakers = 4;
  int noise_clips = 4;
  double noise_seconds = 3.0;
  // White noise added to every clean recording.
  double noise_floor = 1e-3;
  uint64_t seed = 7;
};

struct ToyCorpusPaths {
  std::filesystem::path tts_manifest;
  std::filesystem::path vocoder_manifest;
  std::filesystem::path noise_root;
};

// Writes tts/, vocoder/ and noise/ WAV directories plus tts.jsonl and
// vocoder.jsonl (with aligner durations) under `dir`.
ToyCorpusPaths GenerateToyCorpus(const std::filesystem::path& dir,
                                 const ToyCorpusOptions& options = {});

}  // namespace r2w::pipeline

#endif  // R2W_PIPELINE_TOY_CORPUS_H_
