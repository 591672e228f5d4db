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

#include "r2w/acoustic/phonemes.h"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "r2w/util/error.h"

namespace r2w::acoustic {

const std::vector<std::string>& PhonemeInventory() {
  static const std::vector<std::string> kSymbols = {
      "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH", "EH",
      "ER", "EY", "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M",
      "N",  "NG", "OW", "OY", "P",  "R",  "S",  "SH", "T",  "TH", "UH",
      "UW", "V",  "W",  "Y",  "Z",  "ZH", "sil", "sp"};
  return kSymbols;
}

int64_t InventorySize() { return static_cast<int64_t>(PhonemeInventory().size()); }

int64_t PhonemeId(const std::string& symbol) {
  const auto& inv = PhonemeInventory();
  for (size_t i = 0; i < inv.size(); ++i) {
    if (inv[i] == symbol) return static_cast<int64_t>(i);
  }
  throw DataError("unknown phoneme '" + symbol + "'");
}

std::vector<int64_t> ParsePhonemes(const std::string& text) {
  std::istringstream in(text);
  std::vector<int64_t> ids;
  std::string sym;
  while (in >> sym) ids.push_back(PhonemeId(sym));
  return ids;
}

int PhonemeSequence::total_frames() const {
  return std::accumulate(durations.begin(), durations.end(), 0);
}

void ValidatePhonemes(const PhonemeSequence& seq, int64_t inventory_size) {
  if (seq.ids.empty()) throw DataError("empty phoneme sequence");
  for (int64_t id : seq.ids) {
    if (id < 0 || id >= inventory_size) {
      throw DataError("phoneme id " + std::to_string(id) + " outside inventory of " +
                      std::to_string(inventory_size));
    }
  }
  const size_t n = seq.ids.size();
  auto check_len = [n](size_t len, const char* what) {
    if (len != 0 && len != n) {
      throw DataError(std::string(what) + " has " + std::to_string(len) + " entries for " +
                      std::to_string(n) + " phonemes");
    }
  };
  check_len(seq.durations.size(), "durations");
  check_len(seq.pitch.size(), "pitch");
  check_len(seq.energy.size(), "energy");
  for (int d : seq.durations) {
    if (d < 0) throw DataError("negative phoneme duration");
  }
  for (double v : seq.pitch) {
    if (!std::isfinite(v)) throw DataError("non-finite pitch target");
  }
  for (double v : seq.energy) {
    if (!std::isfinite(v)) throw DataError("non-finite energy target");
  }
}

std::vector<int> UniformSplitDurations(size_t n_phonemes, int total_frames) {
  if (n_phonemes == 0) throw std::invalid_argument("UniformSplitDurations: no phonemes");
  if (total_frames < 0) throw std::invalid_argument("UniformSplitDurations: negative frames");
  const int n = static_cast<int>(n_phonemes);
  std::vector<int> d(n_phonemes, total_frames / n);
  d.back() += total_frames % n;
  return d;
}

std::vector<int> ReconcileDurations(std::vector<int> durations, int target_frames,
                                    int max_gap) {
  if (durations.empty()) throw DataError("no durations to reconcile");
  const int sum = std::accumulate(durations.begin(), durations.end(), 0);
  const int gap = target_frames - sum;
  if (std::abs(gap) > max_gap) {
    throw DataError("durations sum to " + std::to_string(sum) + " frames but the target has " +
                    std::to_string(target_frames));
  }
  durations.back() += gap;
  if (durations.back() < 0) {
    throw DataError("reconciling durations would make the last one negative");
  }
  return durations;
}

std::vector<double> PhonemeAverages(const std::vector<double>& frames,
                                    const std::vector<int>& durations, bool skip_zeros) {
  std::vector<double> out(durations.size(), 0.0);
  size_t pos = 0;
  for (size_t i = 0; i < durations.size(); ++i) {
    if (durations[i] < 0) throw std::invalid_argument("PhonemeAverages: negative duration");
    const auto d = static_cast<size_t>(durations[i]);
    if (pos + d > frames.size()) {
      throw std::invalid_argument("PhonemeAverages: durations exceed frame count");
    }
    double sum = 0.0;
    int count = 0;
    for (size_t t = pos; t < pos + d; ++t) {
      if (skip_zeros && frames[t] == 0.0) continue;
      sum += frames[t];
      ++count;
    }
    out[i] = count > 0 ? sum / count : 0.0;
    pos += d;
  }
  return out;
}

}  // namespace r2w::acoustic
