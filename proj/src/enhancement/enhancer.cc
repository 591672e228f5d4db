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

#include "r2w/enhancement/enhancer.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>

#include <fmt/format.h>

#include "r2w/signal/resample.h"
#include "r2w/signal/snr.h"
#include "r2w/signal/spectral.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"
#include "r2w/util/json_util.h"

namespace r2w::enhance {

namespace fs = std::filesystem;

void SpectralSubtractionConfig::Validate() const {
  if (fft_size < 2 || window_size < 1 || window_size > fft_size || hop_size < 1 ||
      hop_size > window_size) {
    throw ConfigError("spectral_subtraction: need hop <= window <= fft");
  }
  if (noise_percentile < 0.0 || noise_percentile > 100.0 || oversubtraction < 0.0 ||
      floor < 0.0 || floor > 1.0) {
    throw ConfigError("spectral_subtraction: percentile, oversubtraction or floor out of range");
  }
}

SpectralSubtractionEnhancer::SpectralSubtractionEnhancer(const SpectralSubtractionConfig& config)
    : config_(config) {
  config_.Validate();
}

std::string SpectralSubtractionEnhancer::id() const {
  return fmt::format("spectral_subtraction:fft={}:win={}:hop={}:p={}:o={}:f={}", config_.fft_size,
                     config_.window_size, config_.hop_size, config_.noise_percentile,
                     config_.oversubtraction, config_.floor);
}

signal::Waveform SpectralSubtractionEnhancer::Enhance(const signal::Waveform& wav) const {
  if (wav.size() < static_cast<size_t>(config_.window_size)) {
    throw std::invalid_argument("spectral subtraction needs at least one window of input (" +
                                std::to_string(config_.window_size) + " samples)");
  }
  signal::SpectralConfig sc;
  sc.fft_size = config_.fft_size;
  sc.window_size = config_.window_size;
  sc.hop_size = config_.hop_size;
  sc.sample_rate = wav.sample_rate;
  sc.fmax = wav.sample_rate / 2.0;
  signal::Stft stft = signal::ComputeStft(wav.samples, sc);

  std::vector<double> column(static_cast<size_t>(stft.n_frames));
  for (int k = 0; k < stft.n_bins; ++k) {
    for (int t = 0; t < stft.n_frames; ++t) {
      column[t] = std::abs(stft.bins[static_cast<size_t>(t) * stft.n_bins + k]);
    }
    const double noise = signal::Percentile(column, config_.noise_percentile);
    for (int t = 0; t < stft.n_frames; ++t) {
      auto& c = stft.bins[static_cast<size_t>(t) * stft.n_bins + k];
      const double mag = column[t];
      if (mag <= 0.0) continue;
      const double target =
          std::max(mag - config_.oversubtraction * noise, config_.floor * mag);
      c *= target / mag;
    }
  }
  signal::Waveform out;
  out.sample_rate = wav.sample_rate;
  out.samples = signal::InverseStft(stft, sc, wav.size());
  return out;
}

ExternalEnhancer::ExternalEnhancer(std::string command, int tool_rate)
    : command_(std::move(command)), tool_rate_(tool_rate) {
  if (command_.empty() || !ExecutableExists(command_)) {
    throw ConfigError("enhancement tool not found: " + command_);
  }
  if (tool_rate_ <= 0) throw ConfigError("enhancement tool_rate must be positive");
}

std::string ExternalEnhancer::id() const {
  return "external:" + command_ + ":rate=" + std::to_string(tool_rate_);
}

signal::Waveform ExternalEnhancer::Enhance(const signal::Waveform& wav) const {
  std::lock_guard<std::mutex> lock(mu_);
  static std::atomic<int> counter{0};
  const fs::path work = fs::temp_directory_path() /
                        ("r2w_enh_" + std::to_string(::getpid()) + "_" +
                         std::to_string(counter++));
  fs::create_directories(work);
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{work};

  const signal::Waveform tool_in = signal::Resample(wav, tool_rate_);
  const fs::path in_path = work / "in.wav";
  const fs::path out_path = work / "out.wav";
  signal::WriteWav(in_path, tool_in, signal::WavEncoding::kFloat32);
  const auto result = RunProcess({command_, in_path.string(), out_path.string()});
  if (result.exit_code != 0) {
    throw DataError("enhancement tool exited with " + std::to_string(result.exit_code));
  }
  if (!fs::exists(out_path)) throw DataError("enhancement tool wrote no output");
  signal::Waveform tool_out = signal::ReadWav(out_path);
  if (tool_out.sample_rate != tool_rate_) {
    throw DataError("enhancement tool returned " + std::to_string(tool_out.sample_rate) +
                    " Hz audio, expected " + std::to_string(tool_rate_));
  }
  const long slack = std::lround(0.02 * tool_rate_);
  const long diff = static_cast<long>(tool_out.size()) - static_cast<long>(tool_in.size());
  if (std::labs(diff) > slack) {
    throw DataError("enhancement tool returned " + std::to_string(tool_out.size()) +
                    " samples for " + std::to_string(tool_in.size()));
  }
  signal::Waveform out = signal::Resample(tool_out, wav.sample_rate);
  out.samples.resize(wav.size(), 0.0);
  for (double s : out.samples) {
    if (!std::isfinite(s)) throw DataError("enhancement tool returned non-finite samples");
  }
  return out;
}

std::unique_ptr<Enhancer> MakeEnhancer(const nlohmann::json& config) {
  const std::string where = "enhancer";
  if (!config.is_object() || !config.contains("kind")) {
    throw ConfigError(where + ": expected an object with a 'kind'");
  }
  std::string kind;
  ReadOptional(config, "kind", kind, where);
  if (kind == "identity") {
    CheckKeys(config, where, {"kind"});
    return std::make_unique<IdentityEnhancer>();
  }
  if (kind == "spectral_subtraction") {
    CheckKeys(config, where, {"kind", "fft_size", "window_size", "hop_size", "noise_percentile",
                              "oversubtraction", "floor"});
    SpectralSubtractionConfig c;
    ReadOptional(config, "fft_size", c.fft_size, where);
    ReadOptional(config, "window_size", c.window_size, where);
    ReadOptional(config, "hop_size", c.hop_size, where);
    ReadOptional(config, "noise_percentile", c.noise_percentile, where);
    ReadOptional(config, "oversubtraction", c.oversubtraction, where);
    ReadOptional(config, "floor", c.floor, where);
    return std::make_unique<SpectralSubtractionEnhancer>(c);
  }
  if (kind == "external") {
    CheckKeys(config, where, {"kind", "command", "tool_rate"});
    std::string command;
    int rate = 16000;
    ReadOptional(config, "command", command, where);
    ReadOptional(config, "tool_rate", rate, where);
    return std::make_unique<ExternalEnhancer>(command, rate);
  }
  throw ConfigError(where + ": unknown kind '" + kind + "'");
}

}  // namespace r2w::enhance
