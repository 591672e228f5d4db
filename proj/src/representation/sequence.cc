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

#include "r2w/representation/sequence.h"

#include <cmath>
#include <stdexcept>

#include "r2w/util/error.h"

namespace r2w::rep {

int RepresentationSequence::hop_samples() const {
  return static_cast<int>(std::lround(source_rate * frame_shift_ms / 1000.0));
}

void ValidateSequence(const RepresentationSequence& seq) {
  if (seq.n_frames < 0 || seq.dim <= 0) {
    throw std::invalid_argument("representation: bad shape");
  }
  if (seq.frames.size() != static_cast<size_t>(seq.n_frames) * seq.dim) {
    throw std::invalid_argument("representation: frames size " +
                                std::to_string(seq.frames.size()) +
                                " != n_frames * dim");
  }
  for (float v : seq.frames) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("representation: non-finite value");
    }
  }
}

int ExpectedFrames(size_t num_samples, int sample_rate) {
  const auto hop = static_cast<size_t>(
      std::lround(sample_rate * kFrameShiftMs / 1000.0));
  if (hop == 0) throw std::invalid_argument("ExpectedFrames: bad rate");
  return static_cast<int>((num_samples + hop - 1) / hop);
}

LayerSpec LayerSpec::Single(int layer) {
  if (layer < 0) throw ConfigError("layer index must be >= 0");
  return LayerSpec(false, layer);
}

LayerSpec LayerSpec::AverageAll() { return LayerSpec(true, 0); }

LayerSpec LayerSpec::Parse(const std::string& tag) {
  if (tag == "average") return AverageAll();
  if (tag.rfind("layer", 0) == 0 && tag.size() > 5) {
    size_t used = 0;
    int k = -1;
    try {
      k = std::stoi(tag.substr(5), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == tag.size() - 5 && k >= 0) return Single(k);
  }
  throw ConfigError("unknown layer spec '" + tag +
                    "' (expected layer<k> or average)");
}

std::string LayerSpec::Tag() const {
  return average_ ? "average" : "layer" + std::to_string(layer_);
}

std::vector<LayerSpec> SweepLayerSpecs() {
  return {LayerSpec::Single(0), LayerSpec::Single(1), LayerSpec::Single(3),
          LayerSpec::Single(5), LayerSpec::Single(12), LayerSpec::AverageAll()};
}

}  // namespace r2w::rep
