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

#ifndef R2W_PIPELINE_FEATURES_H_
#define R2W_PIPELINE_FEATURES_H_

#include <filesystem>
#include <optional>
#include <string>

#include "r2w/representation/backend.h"
#include "r2w/representation/extract.h"
#include "r2w/representation/sequence.h"
#include "r2w/signal/spectral.h"
#include "r2w/signal/waveform.h"

namespace r2w::pipeline {

// The intermediate a vocoder/acoustic model pair works in: 80-band log-mel
// on the 20 ms grid (the baseline) or a representation layer choice.
class FeatureSpace {
 public:
  static FeatureSpace Mel();
  static FeatureSpace Representation(const rep::LayerSpec& spec);
  // "mel", "layer<k>" or "average". ConfigError otherwise.
  static FeatureSpace Parse(const std::string& tag);

  bool is_mel() const { return mel_; }
  const rep::LayerSpec& layer() const { return layer_; }
  // Stamped into checkpoints; two models are compatible only when equal.
  std::string Tag() const;
  bool operator==(const FeatureSpace&) const = default;

 private:
  FeatureSpace(bool mel, rep::LayerSpec layer) : mel_(mel), layer_(layer) {}
  bool mel_;
  rep::LayerSpec layer_;
};

// Mel tensor file: 8-byte magic "R2WMEL1\0", uint32 dtype (1 = float32),
// uint32 n_frames, uint32 n_mels, uint32 hop_size, uint32 sample_rate, then
// n_frames * n_mels float32 log-mel values, frame-major.
inline constexpr size_t kMelHeaderBytes = 28;
void SaveMel(const signal::MelSpectrogram& mel, const std::filesystem::path& path);
// DataError on a bad magic, dtype or truncation. The returned config carries
// the stored hop and rate; other fields keep their defaults.
signal::MelSpectrogram LoadMel(const std::filesystem::path& path);

// Log-mel frames as a sequence on the 20 ms grid. std::invalid_argument
// unless the mel hop is 20 ms.
rep::RepresentationSequence MelAsSequence(const signal::MelSpectrogram& mel);

// Feature extraction with a content-addressed disk cache for both spaces.
// Not thread-safe; use one per worker.
class FeatureExtractor {
 public:
  // `backend` may be null when only the mel space is used.
  FeatureExtractor(const rep::RepresentationBackend* backend, std::filesystem::path cache_root);

  // Frame count always equals rep::ExpectedFrames of the input.
  rep::RepresentationSequence Extract(const signal::Waveform& wav, const FeatureSpace& space);
  int Dim(const FeatureSpace& space) const;

  int hits() const;
  int misses() const;

 private:
  const rep::RepresentationBackend* backend_;
  std::filesystem::path mel_root_;
  rep::RepresentationCache rep_cache_;
  int mel_hits_ = 0;
  int mel_misses_ = 0;
};

}  // namespace r2w::pipeline

#endif  // R2W_PIPELINE_FEATURES_H_
