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

#include "r2w/evaluation/figure.h"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>

#include "r2w/signal/resample.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::eval {

std::vector<uint8_t> Crop(const Image& image, const PanelRect& rect) {
  if (rect.x < 0 || rect.y < 0 || rect.x + rect.width > image.width ||
      rect.y + rect.height > image.height) {
    throw std::invalid_argument("crop rectangle outside the image");
  }
  std::vector<uint8_t> out;
  out.reserve(static_cast<size_t>(rect.width) * rect.height * 3);
  for (int y = rect.y; y < rect.y + rect.height; ++y) {
    const uint8_t* row = image.pixel(rect.x, y);
    out.insert(out.end(), row, row + static_cast<size_t>(rect.width) * 3);
  }
  return out;
}

namespace {

constexpr int kMargin = 4;
constexpr int kGlyphScale = 2;
constexpr int kLabelHeight = 7 * kGlyphScale + 6;

using Glyph = std::array<uint8_t, 7>;

// 5x7 glyphs, one byte per row, bit 4 leftmost. Lowercase renders as
// uppercase; anything else renders as a box.
Glyph GlyphFor(char c) {
  c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (c >= 'A' && c <= 'Z') {
    static constexpr Glyph kLetters[26] = {
        {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}, {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},
        {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}, {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E},
        {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}, {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},
        {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}, {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},
        {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}, {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},
        {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}, {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},
        {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}, {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11},
        {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},
        {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}, {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},
        {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}, {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},
        {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},
        {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}, {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11},
        {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},
    };
    return kLetters[c - 'A'];
  }
  if (c >= '0' && c <= '9') {
    static constexpr Glyph kDigits[10] = {
        {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}, {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
        {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}, {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
        {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}, {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
        {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
        {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}, {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
    };
    return kDigits[c - '0'];
  }
  switch (c) {
    case ' ':
      return {0, 0, 0, 0, 0, 0, 0};
    case '-':
      return {0, 0, 0, 0x1F, 0, 0, 0};
    case '_':
      return {0, 0, 0, 0, 0, 0, 0x1F};
    case '.':
      return {0, 0, 0, 0, 0, 0x0C, 0x0C};
    case ':':
      return {0, 0x0C, 0x0C, 0, 0x0C, 0x0C, 0};
    case '(':
      return {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02};
    case ')':
      return {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08};
    case '/':
      return {0, 0x01, 0x02, 0x04, 0x08, 0x10, 0};
    default:
      return {0x1F, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1F};
  }
}

void SetPixel(Image& image, int x, int y, const std::array<uint8_t, 3>& color) {
  if (x < 0 || y < 0 || x >= image.width || y >= image.height) return;
  uint8_t* p = &image.rgb[(static_cast<size_t>(y) * image.width + x) * 3];
  p[0] = color[0];
  p[1] = color[1];
  p[2] = color[2];
}

void DrawText(Image& image, int x0, int y0, const std::string& text) {
  const std::array<uint8_t, 3> ink = {0, 0, 0};
  int x = x0;
  for (char c : text) {
    const Glyph g = GlyphFor(c);
    for (int row = 0; row < 7; ++row) {
      for (int col = 0; col < 5; ++col) {
        if (!(g[row] & (0x10 >> col))) continue;
        for (int dy = 0; dy < kGlyphScale; ++dy) {
          for (int dx = 0; dx < kGlyphScale; ++dx) {
            SetPixel(image, x + col * kGlyphScale + dx, y0 + row * kGlyphScale + dy, ink);
          }
        }
      }
    }
    x += 6 * kGlyphScale;
  }
}

// Piecewise-linear through five viridis anchors; t in [0, 1].
std::array<uint8_t, 3> Colormap(double t) {
  static constexpr double kAnchors[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  std::array<uint8_t, 3> out;
  for (int k = 0; k < 3; ++k) {
    out[k] = static_cast<uint8_t>(
        std::lround(kAnchors[i][k] + f * (kAnchors[i + 1][k] - kAnchors[i][k])));
  }
  return out;
}

}  // namespace

SpectrogramFigure RenderSpectrogramFigure(const std::vector<LabeledAudio>& panels,
                                          const FigureOptions& options) {
  if (panels.empty()) throw DataError("spectrogram figure needs at least one panel");
  if (options.pixels_per_frame < 1 || options.pixels_per_mel < 1) {
    throw ConfigError("figure pixel scales must be >= 1");
  }
  options.spectral.Validate();
  std::vector<signal::MelSpectrogram> mels;
  int max_frames = 0;
  for (const auto& p : panels) {
    if (p.audio.empty()) throw DataError("panel '" + p.label + "' has no audio");
    const signal::Waveform x = p.audio.sample_rate == options.spectral.sample_rate
                                   ? p.audio
                                   : signal::Resample(p.audio, options.spectral.sample_rate);
    mels.push_back(signal::ComputeMelSpectrogram(x, options.spectral));
    max_frames = std::max(max_frames, mels.back().n_frames);
  }

  SpectrogramFigure fig;
  fig.scale_min = std::log(options.spectral.log_floor);
  fig.scale_max = fig.scale_min;
  for (const auto& m : mels) {
    for (double v : m.values) fig.scale_max = std::max(fig.scale_max, v);
  }
  const double range = fig.scale_max > fig.scale_min ? fig.scale_max - fig.scale_min : 1.0;

  const int n_mels = options.spectral.n_mels;
  const int panel_w = max_frames * options.pixels_per_frame;
  const int panel_h = n_mels * options.pixels_per_mel;
  Image& img = fig.image;
  img.width = panel_w + 2 * kMargin;
  img.height = static_cast<int>(panels.size()) * (kLabelHeight + panel_h + kMargin) + kMargin;
  img.rgb.assign(static_cast<size_t>(img.width) * img.height * 3, 255);

  int y = kMargin;
  for (size_t i = 0; i < panels.size(); ++i) {
    DrawText(img, kMargin, y + 2, panels[i].label);
    y += kLabelHeight;
    const PanelRect rect{kMargin, y, panel_w, panel_h};
    fig.panels.push_back(rect);
    const auto& m = mels[i];
    for (int t = 0; t < m.n_frames; ++t) {
      for (int b = 0; b < n_mels; ++b) {
        const auto color = Colormap((m.at(t, b) - fig.scale_min) / range);
        const int top = rect.y + (n_mels - 1 - b) * options.pixels_per_mel;
        for (int dy = 0; dy < options.pixels_per_mel; ++dy) {
          for (int dx = 0; dx < options.pixels_per_frame; ++dx) {
            SetPixel(img, rect.x + t * options.pixels_per_frame + dx, top + dy, color);
          }
        }
      }
    }
    y += panel_h + kMargin;
  }
  return fig;
}

namespace {

void AppendBytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void NoFlush(png_structp) {}

}  // namespace

std::string EncodePng(const Image& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.rgb.size() != static_cast<size_t>(image.width) * image.height * 3) {
    throw std::invalid_argument("EncodePng: malformed image");
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  std::string out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed while encoding");
  }
  png_set_write_fn(png, &out, AppendBytes, NoFlush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(image.pixel(0, y)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

SpectrogramFigure WriteSpectrogramFigure(const std::vector<LabeledAudio>& panels,
                                         const std::filesystem::path& out_path,
                                         const FigureOptions& options) {
  SpectrogramFigure fig = RenderSpectrogramFigure(panels, options);
  AtomicWriteFile(out_path, EncodePng(fig.image));
  return fig;
}

}  // namespace r2w::eval
