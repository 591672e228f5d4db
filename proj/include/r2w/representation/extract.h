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

#ifndef R2W_REPRESENTATION_EXTRACT_H_
#define R2W_REPRESENTATION_EXTRACT_H_

#include <filesystem>
#include <optional>
#include <string>

#include "r2w/representation/backend.h"
#include "r2w/representation/sequence.h"
#include "r2w/signal/waveform.h"

namespace r2w::rep {

// Runs the backend on `wav` (resampled to the backend rate when needed) and
// reduces its layers per `spec`. The output has ExpectedFrames(wav) frames on
// the 20 ms grid of the input: the backend's frames are truncated, or the
// last frame repeated, to match.
//
// Throws ConfigError when the layer index exceeds the backend, DataError
// (with the backend id) when the backend fails or returns ragged layers.
RepresentationSequence Extract(const signal::Waveform& wav,
                               const LayerSpec& spec,
                               const RepresentationBackend& backend);

// Reduction step of Extract, exposed for tests.
RepresentationSequence ReduceLayers(
    const std::vector<RepresentationSequence>& layers, const LayerSpec& spec);

// Fixed-size binary file: 8-byte magic "R2WREP1\0", then uint32 dtype
// (1 = float32), uint32 n_frames, uint32 dim, float32 frame_shift_ms,
// uint32 source_rate, then n_frames * dim float32 values.
inline constexpr size_t kRepHeaderBytes = 28;

void SaveRepresentation(const RepresentationSequence& seq,
                        const std::filesystem::path& path);
// DataError on a bad magic, truncated file or, when given, a dim mismatch.
RepresentationSequence LoadRepresentation(
    const std::filesystem::path& path,
    std::optional<int> expected_dim = std::nullopt);

// Disk cache of extracted sequences keyed by SHA-256 over the audio content,
// backend id and layer tag. Writes are atomic, so concurrent fillers are
// safe.
class RepresentationCache {
 public:
  explicit RepresentationCache(std::filesystem::path root);

  // Root from $R2W_CACHE_DIR, else `fallback`.
  static std::filesystem::path DefaultRoot(const std::filesystem::path& fallback);

  std::filesystem::path PathFor(const signal::Waveform& wav,
                                const LayerSpec& spec,
                                const RepresentationBackend& backend) const;

  RepresentationSequence GetOrExtract(const signal::Waveform& wav,
                                      const LayerSpec& spec,
                                      const RepresentationBackend& backend);

  int hits() const { return hits_; }
  int misses() const { return misses_; }

 private:
  std::filesystem::path root_;
  int hits_ = 0;
  int misses_ = 0;
};

}  // namespace r2w::rep

#endif  // R2W_REPRESENTATION_EXTRACT_H_
