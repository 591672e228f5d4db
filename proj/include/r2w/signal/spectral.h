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

#ifndef R2W_SIGNAL_SPECTRAL_H_
#define R2W_SIGNAL_SPECTRAL_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "r2w/signal/waveform.h"

namespace r2w::signal {

// STFT and mel analysis settings.
//
// With `center` set, the signal is reflection-padded by fft_size / 2 on the
// left and frame t covers padded samples [t * hop, t * hop + fft_size); the
// frame count is ceil(length / hop). Without `center`, frames start at
// t * hop of the raw signal and the count is 1 + (length - fft_size) / hop.
struct SpectralConfig {
  int fft_size = 1024;
  int hop_size = 480;
  int window_size = 960;
  int n_mels = 80;
  int sample_rate = kPipelineSampleRate;
  double fmin = 0.0;
  double fmax = 12000.0;
  double log_floor = 1e-5;
  bool center = true;

  int n_bins() const { return fft_size / 2 + 1; }
  // Throws std::invalid_argument when the invariants do not hold.
  void Validate() const;
  bool operator==(const SpectralConfig&) const = default;

  // Mel-feature baseline: hop 240 (10 ms at 24 kHz).
  static SpectralConfig Baseline();
  // Aligned with the 20 ms representation grid: hop 480.
  static SpectralConfig RepAligned();
};

// Log-mel matrix, row-major n_frames x n_mels.
struct MelSpectrogram {
  int n_frames = 0;
  int n_mels = 0;
  std::vector<double> values;
  SpectralConfig config;

  double at(int frame, int mel) const {
    return values[static_cast<size_t>(frame) * n_mels + mel];
  }
};

// Frame count of the framing rule; throws std::invalid_argument when
// `center` is false and the signal is shorter than one FFT frame.
int NumFrames(size_t length, int fft_size, int hop_size, bool center);

// Index into a signal of `length` samples after symmetric reflection (the
// edge sample is not repeated). Reflection repeats as often as needed, so
// any offset is valid.
size_t ReflectIndex(long long index, size_t length);

// Periodic Hann window of `window_size` zero-padded (centered) to `fft_size`.
std::vector<double> PaddedHannWindow(int window_size, int fft_size);

// Slaney-style mel scale (linear below 1 kHz, logarithmic above).
double HzToMel(double hz);
double MelToHz(double mel);

// Area-normalized triangular filters, row-major n_mels x n_bins.
std::vector<double> MelFilterbank(const SpectralConfig& config);

// Extracts the windowed analysis frame t (fft_size samples).
void ExtractFrame(std::span<const double> signal, const SpectralConfig& config,
                  int frame, std::span<const double> window,
                  std::span<double> out);

// Real FFT of a fixed size. Not thread-safe per instance; plan creation is
// serialized internally.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  // in: size samples; out: size / 2 + 1 bins.
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out);
  // in: size / 2 + 1 bins; out: size samples, scaled by 1 / size.
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out);

 private:
  int size_;
  double* real_buf_;
  void* complex_buf_;
  void* forward_plan_;
  void* inverse_plan_;
};

// Complex STFT, row-major n_frames x n_bins.
struct Stft {
  int n_frames = 0;
  int n_bins = 0;
  std::vector<std::complex<double>> bins;
};

Stft ComputeStft(std::span<const double> signal, const SpectralConfig& config);

// Weighted overlap-add inverse of ComputeStft (center framing only).
std::vector<double> InverseStft(const Stft& stft, const SpectralConfig& config,
                                size_t length);

// Log of floor-clamped mel magnitudes. Throws std::invalid_argument on a
// sample-rate mismatch or empty input.
MelSpectrogram ComputeMelSpectrogram(const Waveform& wav,
                                     const SpectralConfig& config);

}  // namespace r2w::signal

#endif  // R2W_SIGNAL_SPECTRAL_H_
