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

#ifndef R2W_REPRESENTATION_SEQUENCE_H_
#define R2W_REPRESENTATION_SEQUENCE_H_

#include <cstddef>
#include <string>
#include <vector>

namespace r2w::rep {

inline constexpr int kDefaultRepDim = 768;
inline constexpr double kFrameShiftMs = 20.0;

// Frame-level feature matrix, row-major [n_frames, dim].
struct RepresentationSequence {
  int n_frames = 0;
  int dim = kDefaultRepDim;
  double frame_shift_ms = kFrameShiftMs;
  int source_rate = 24000;
  std::vector<float> frames;

  float at(int frame, int d) const {
    return frames[static_cast<size_t>(frame) * dim + d];
  }
  float& at(int frame, int d) {
    return frames[static_cast<size_t>(frame) * dim + d];
  }
  // Samples per frame at source_rate (480 at 24 kHz).
  int hop_samples() const;
};

// Throws std::invalid_argument on inconsistent sizes or non-finite cells.
void ValidateSequence(const RepresentationSequence& seq);

// ceil(num_samples / samples_per_20ms); the frame count every extraction
// produces for audio of that length.
int ExpectedFrames(size_t num_samples, int sample_rate);

// Which backend layer feeds the pipeline. Layer 0 is the convolutional
// front end; layers 1..L are the transformer blocks.
class LayerSpec {
 public:
  static LayerSpec Single(int layer);
  static LayerSpec AverageAll();
  // Accepts the forms produced by Tag(): "layer<k>" or "average".
  static LayerSpec Parse(const std::string& tag);

  bool is_average() const { return average_; }
  int layer() const { return layer_; }
  std::string Tag() const;
  bool operator==(const LayerSpec&) const = default;

 private:
  LayerSpec(bool average, int layer) : average_(average), layer_(layer) {}
  bool average_ = false;
  int layer_ = 0;
};

// The layer choices compared in the layer sweep.
std::vector<LayerSpec> SweepLayerSpecs();

}  // namespace r2w::rep

#endif  // R2W_REPRESENTATION_SEQUENCE_H_
