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

#include "r2w/signal/spectral.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace r2w::signal {

namespace {

std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

constexpr double kMelBreakHz = 1000.0;
constexpr double kMelLinearStep = 200.0 / 3.0;
constexpr double kMelBreak = kMelBreakHz / kMelLinearStep;  // 15
const double kMelLogStep = std::log(6.4) / 27.0;

}  // namespace

void SpectralConfig::Validate() const {
  if (fft_size <= 0 || hop_size <= 0 || window_size <= 0 || n_mels <= 0 ||
      sample_rate <= 0) {
    throw std::invalid_argument("SpectralConfig: sizes must be positive");
  }
  if (window_size > fft_size)
    throw std::invalid_argument("SpectralConfig: window_size > fft_size");
  if (hop_size > window_size)
    throw std::invalid_argument("SpectralConfig: hop_size > window_size");
  if (!(fmin >= 0.0 && fmax > fmin && fmax <= sample_rate / 2.0))
    throw std::invalid_argument("SpectralConfig: invalid mel band edges");
  if (!(log_floor > 0.0))
    throw std::invalid_argument("SpectralConfig: log_floor must be positive");
}

SpectralConfig SpectralConfig::Baseline() {
  SpectralConfig c;
  c.hop_size = 240;
  return c;
}

SpectralConfig SpectralConfig::RepAligned() { return SpectralConfig{}; }

int NumFrames(size_t length, int fft_size, int hop_size, bool center) {
  if (hop_size <= 0) throw std::invalid_argument("NumFrames: hop <= 0");
  if (center) {
    return static_cast<int>((length + static_cast<size_t>(hop_size) - 1) /
                            static_cast<size_t>(hop_size));
  }
  if (length < static_cast<size_t>(fft_size)) {
    throw std::invalid_argument(
        "signal shorter than one analysis frame with padding disabled");
  }
  return 1 + static_cast<int>((length - static_cast<size_t>(fft_size)) /
                              static_cast<size_t>(hop_size));
}

size_t ReflectIndex(long long index, size_t length) {
  if (length == 1) return 0;
  const long long period = 2 * (static_cast<long long>(length) - 1);
  long long m = index % period;
  if (m < 0) m += period;
  if (m >= static_cast<long long>(length)) m = period - m;
  return static_cast<size_t>(m);
}

std::vector<double> PaddedHannWindow(int window_size, int fft_size) {
  std::vector<double> w(static_cast<size_t>(fft_size), 0.0);
  const int offset = (fft_size - window_size) / 2;
  for (int i = 0; i < window_size; ++i) {
    w[static_cast<size_t>(offset + i)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / window_size);
  }
  return w;
}

double HzToMel(double hz) {
  if (hz < kMelBreakHz) return hz / kMelLinearStep;
  return kMelBreak + std::log(hz / kMelBreakHz) / kMelLogStep;
}

double MelToHz(double mel) {
  if (mel < kMelBreak) return mel * kMelLinearStep;
  return kMelBreakHz * std::exp(kMelLogStep * (mel - kMelBreak));
}

std::vector<double> MelFilterbank(const SpectralConfig& config) {
  config.Validate();
  const int n_bins = config.n_bins();
  const double mel_lo = HzToMel(config.fmin);
  const double mel_hi = HzToMel(config.fmax);
  std::vector<double> edges(static_cast<size_t>(config.n_mels) + 2);
  for (size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    (config.n_mels + 1));
  }
  std::vector<double> fb(static_cast<size_t>(config.n_mels) * n_bins, 0.0);
  for (int m = 0; m < config.n_mels; ++m) {
    const double lo = edges[m];
    const double mid = edges[m + 1];
    const double hi = edges[m + 2];
    const double norm = 2.0 / (hi - lo);
    for (int k = 0; k < n_bins; ++k) {
      const double f =
          static_cast<double>(k) * config.sample_rate / config.fft_size;
      const double rise = (f - lo) / (mid - lo);
      const double fall = (hi - f) / (hi - mid);
      const double w = std::max(0.0, std::min(rise, fall));
      fb[static_cast<size_t>(m) * n_bins + k] = w * norm;
    }
  }
  return fb;
}

void ExtractFrame(std::span<const double> signal, const SpectralConfig& config,
                  int frame, std::span<const double> window,
                  std::span<double> out) {
  const long long start =
      static_cast<long long>(frame) * config.hop_size -
      (config.center ? config.fft_size / 2 : 0);
  const size_t n = signal.size();
  for (int i = 0; i < config.fft_size; ++i) {
    if (window[static_cast<size_t>(i)] == 0.0) {
      out[static_cast<size_t>(i)] = 0.0;
      continue;
    }
    const long long idx = start + i;
    const double s = (idx >= 0 && idx < static_cast<long long>(n))
                         ? signal[static_cast<size_t>(idx)]
                         : signal[ReflectIndex(idx, n)];
    out[static_cast<size_t>(i)] = s * window[static_cast<size_t>(i)];
  }
}

RealFft::RealFft(int size) : size_(size) {
  if (size <= 0) throw std::invalid_argument("RealFft: size must be positive");
  std::lock_guard<std::mutex> lock(PlannerMutex());
  real_buf_ = fftw_alloc_real(static_cast<size_t>(size));
  auto* cbuf = fftw_alloc_complex(static_cast<size_t>(size / 2 + 1));
  complex_buf_ = cbuf;
  forward_plan_ =
      fftw_plan_dft_r2c_1d(size, real_buf_, cbuf, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(size, cbuf, real_buf_,
                                       FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_buf_);
  fftw_free(complex_buf_);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::memcpy(real_buf_, in.data(), sizeof(double) * size_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const auto* c = static_cast<const fftw_complex*>(complex_buf_);
  for (int k = 0; k <= size_ / 2; ++k) {
    out[static_cast<size_t>(k)] = {c[k][0], c[k][1]};
  }
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  auto* c = static_cast<fftw_complex*>(complex_buf_);
  for (int k = 0; k <= size_ / 2; ++k) {
    c[k][0] = in[static_cast<size_t>(k)].real();
    c[k][1] = in[static_cast<size_t>(k)].imag();
  }
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  const double scale = 1.0 / size_;
  for (int i = 0; i < size_; ++i) out[static_cast<size_t>(i)] = real_buf_[i] * scale;
}

Stft ComputeStft(std::span<const double> signal, const SpectralConfig& config) {
  config.Validate();
  if (signal.empty()) throw std::invalid_argument("ComputeStft: empty signal");
  Stft stft;
  stft.n_frames = NumFrames(signal.size(), config.fft_size, config.hop_size,
                            config.center);
  stft.n_bins = config.n_bins();
  stft.bins.resize(static_cast<size_t>(stft.n_frames) * stft.n_bins);
  const auto window = PaddedHannWindow(config.window_size, config.fft_size);
  RealFft fft(config.fft_size);
  std::vector<double> frame(static_cast<size_t>(config.fft_size));
  for (int t = 0; t < stft.n_frames; ++t) {
    ExtractFrame(signal, config, t, window, frame);
    fft.Forward(frame, std::span(stft.bins).subspan(
                           static_cast<size_t>(t) * stft.n_bins, stft.n_bins));
  }
  return stft;
}

std::vector<double> InverseStft(const Stft& stft, const SpectralConfig& config,
                                size_t length) {
  if (!config.center)
    throw std::invalid_argument("InverseStft: only center framing supported");
  const auto window = PaddedHannWindow(config.window_size, config.fft_size);
  std::vector<double> acc(length, 0.0);
  std::vector<double> norm(length, 0.0);
  RealFft fft(config.fft_size);
  std::vector<double> frame(static_cast<size_t>(config.fft_size));
  const long long half = config.fft_size / 2;
  for (int t = 0; t < stft.n_frames; ++t) {
    fft.Inverse(std::span(stft.bins).subspan(
                    static_cast<size_t>(t) * stft.n_bins, stft.n_bins),
                frame);
    const long long start = static_cast<long long>(t) * config.hop_size - half;
    for (int i = 0; i < config.fft_size; ++i) {
      const long long idx = start + i;
      if (idx < 0 || idx >= static_cast<long long>(length)) continue;
      const double w = window[static_cast<size_t>(i)];
      acc[static_cast<size_t>(idx)] += frame[static_cast<size_t>(i)] * w;
      norm[static_cast<size_t>(idx)] += w * w;
    }
  }
  for (size_t i = 0; i < length; ++i) {
    if (norm[i] > 1e-8) acc[i] /= norm[i];
  }
  return acc;
}

MelSpectrogram ComputeMelSpectrogram(const Waveform& wav,
                                     const SpectralConfig& config) {
  config.Validate();
  if (wav.sample_rate != config.sample_rate) {
    throw std::invalid_argument("mel_spectrogram: sample rate " +
                                std::to_string(wav.sample_rate) +
                                " does not match config rate " +
                                std::to_string(config.sample_rate));
  }
  if (wav.empty()) throw std::invalid_argument("mel_spectrogram: empty input");

  const Stft stft = ComputeStft(wav.samples, config);
  const auto fb = MelFilterbank(config);
  const int n_bins = stft.n_bins;
  MelSpectrogram mel;
  mel.n_frames = stft.n_frames;
  mel.n_mels = config.n_mels;
  mel.config = config;
  mel.values.resize(static_cast<size_t>(mel.n_frames) * mel.n_mels);
  std::vector<double> mag(static_cast<size_t>(n_bins));
  const double log_floor = std::log(config.log_floor);
  for (int t = 0; t < mel.n_frames; ++t) {
    for (int k = 0; k < n_bins; ++k) {
      mag[static_cast<size_t>(k)] =
          std::abs(stft.bins[static_cast<size_t>(t) * n_bins + k]);
    }
    for (int m = 0; m < mel.n_mels; ++m) {
      const double* row = &fb[static_cast<size_t>(m) * n_bins];
      double e = 0.0;
      for (int k = 0; k < n_bins; ++k) e += row[k] * mag[static_cast<size_t>(k)];
      mel.values[static_cast<size_t>(t) * mel.n_mels + m] =
          e > config.log_floor ? std::log(e) : log_floor;
    }
  }
  return mel;
}

}  // namespace r2w::signal
