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

#ifndef R2W_EVALUATION_FIGURE_H_
#define R2W_EVALUATION_FIGURE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "r2w/signal/spectral.h"
#include "r2w/signal/waveform.h"

namespace r2w::eval {

// 8-bit RGB, row-major, top row first.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;

  const uint8_t* pixel(int x, int y) const {
    return &rgb[(static_cast<size_t>(y) * width + x) * 3];
  }
};

struct PanelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

// Pixels inside `rect`, row by row.
std::vector<uint8_t> Crop(const Image& image, const PanelRect& rect);

struct LabeledAudio {
  std::string label;
  signal::Waveform audio;
};

struct FigureOptions {
  signal::SpectralConfig spectral = signal::SpectralConfig::RepAligned();
  int pixels_per_frame = 2;
  int pixels_per_mel = 2;
};

struct SpectrogramFigure {
  Image image;
  // Spectrogram area of each panel, in input order. Every panel spans the
  // longest clip; shorter clips leave background to their right.
  std::vector<PanelRect> panels;
  // Shared color scale in log-mel units: the log floor maps to the darkest
  // color and the loudest cell across all panels to the brightest.
  double scale_min = 0.0;
  double scale_max = 0.0;
};

// Log-mel panels stacked top to bottom, each under its label, low
// frequencies at the bottom. DataError on no panels or empty audio.
SpectrogramFigure RenderSpectrogramFigure(const std::vector<LabeledAudio>& panels,
                                          const FigureOptions& options = {});

// PNG bytes of `image`.
std::string EncodePng(const Image& image);

// Renders and writes a PNG. IoError if the file cannot be written.
SpectrogramFigure WriteSpectrogramFigure(const std::vector<LabeledAudio>& panels,
                                         const std::filesystem::path& out_path,
                                         const FigureOptions& options = {});

}  // namespace r2w::eval

#endif  // R2W_EVALUATION_FIGURE_H_
