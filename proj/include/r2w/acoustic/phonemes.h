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

#ifndef R2W_ACOUSTIC_PHONEMES_H_
#define R2W_ACOUSTIC_PHONEMES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace r2w::acoustic {

// ARPAbet without stress marks, plus "sil" and "sp".
const std::vector<std::string>& PhonemeInventory();
int64_t InventorySize();
// DataError for unknown symbols.
int64_t PhonemeId(const std::string& symbol);
// Whitespace-separated symbols -> ids.
std::vector<int64_t> ParsePhonemes(const std::string& text);

// Phoneme ids with optional per-phoneme targets. Durations count 20 ms
// representation frames; pitch is in Hz (0 where unvoiced) and energy is
// frame RMS, both averaged over the phoneme's frames.
struct PhonemeSequence {
  std::vector<int64_t> ids;
  std::vector<int> durations;
  std::vector<double> pitch;
  std::vector<double> energy;

  size_t size() const { return ids.size(); }
  bool has_targets() const { return !durations.empty(); }
  int total_frames() const;
};

// DataError on an empty sequence, ids outside [0, inventory_size),
// target vectors of the wrong length, negative durations or non-finite
// targets.
void ValidatePhonemes(const PhonemeSequence& seq, int64_t inventory_size);

// Test aligner: total frames split evenly, remainder to the last phoneme.
std::vector<int> UniformSplitDurations(size_t n_phonemes, int total_frames);

// Moves the last phoneme's duration so the sum equals `target_frames`.
// DataError if the gap exceeds `max_gap` or the last duration would go
// negative.
std::vector<int> ReconcileDurations(std::vector<int> durations, int target_frames,
                                    int max_gap = 2);

// Per-phoneme mean of frame-level values. With `skip_zeros`, zero frames
// (unvoiced pitch) are left out, and a phoneme without nonzero frames gets
// 0. Zero-duration phonemes get 0. Requires sum(durations) <= frames.size().
std::vector<double> PhonemeAverages(const std::vector<double>& frames,
                                    const std::vector<int>& durations, bool skip_zeros);

}  // namespace r2w::acoustic

#endif  // R2W_ACOUSTIC_PHONEMES_H_
