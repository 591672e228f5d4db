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

#include "r2w/representation/backend.h"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "r2w/representation/extract.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::rep {

namespace fs = std::filesystem;

namespace {

double StandardNormal(std::mt19937_64& rng) {
  auto uniform = [&] {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  };
  const double u1 = uniform(), u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

MockBackend::MockBackend(uint64_t seed, int num_layers, int dim)
    : seed_(seed), num_layers_(num_layers), dim_(dim) {
  if (num_layers < 1) throw ConfigError("mock backend needs >= 1 layer");
  if (dim < 1) throw ConfigError("mock backend needs dim >= 1");
  mel_config_.fft_size = 1024;
  mel_config_.hop_size = 320;
  mel_config_.window_size = 640;
  mel_config_.n_mels = 80;
  mel_config_.sample_rate = 16000;
  mel_config_.fmin = 0.0;
  mel_config_.fmax = 8000.0;
  const int n_mels = mel_config_.n_mels;
  const double w_scale = 1.0 / std::sqrt(static_cast<double>(n_mels));
  for (int k = 0; k <= num_layers; ++k) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::vector<double> w(static_cast<size_t>(n_mels) * dim);
    for (double& x : w) x = w_scale * StandardNormal(rng);
    std::vector<double> b(static_cast<size_t>(dim));
    for (double& x : b) x = 0.1 * StandardNormal(rng);
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
}

std::string MockBackend::id() const {
  return "mock:seed=" + std::to_string(seed_) +
         ":layers=" + std::to_string(num_layers_) + ":dim=" + std::to_string(dim_);
}

std::vector<RepresentationSequence> MockBackend::Forward(
    const signal::Waveform& wav) const {
  if (wav.sample_rate != sample_rate()) {
    throw std::invalid_argument("mock backend expects 16 kHz input");
  }
  const auto mel = signal::ComputeMelSpectrogram(wav, mel_config_);
  const int n_mels = mel.n_mels;
  std::vector<RepresentationSequence> layers;
  for (int k = 0; k <= num_layers_; ++k) {
    RepresentationSequence out;
    out.n_frames = mel.n_frames;
    out.dim = dim_;
    out.source_rate = wav.sample_rate;
    out.frames.resize(static_cast<size_t>(mel.n_frames) * dim_);
    const auto& w = weights_[static_cast<size_t>(k)];
    const auto& b = biases_[static_cast<size_t>(k)];
    std::vector<double> row(static_cast<size_t>(dim_));
    for (int t = 0; t < mel.n_frames; ++t) {
      row.assign(b.begin(), b.end());
      for (int m = 0; m < n_mels; ++m) {
        const double x = mel.at(t, m);
        const double* wr = &w[static_cast<size_t>(m) * dim_];
        for (int d = 0; d < dim_; ++d) row[static_cast<size_t>(d)] += x * wr[d];
      }
      for (int d = 0; d < dim_; ++d) out.at(t, d) = static_cast<float>(row[static_cast<size_t>(d)]);
    }
    layers.push_back(std::move(out));
  }
  return layers;
}

ExternalBackend::ExternalBackend(std::string command, fs::path checkpoint,
                                 int num_layers, int dim)
    : command_(std::move(command)),
      checkpoint_(std::move(checkpoint)),
      num_layers_(num_layers),
      dim_(dim) {
  if (!ExecutableExists(command_)) {
    throw ConfigError("representation tool not found: " + command_);
  }
  if (!fs::exists(checkpoint_)) {
    throw ConfigError("representation checkpoint not found: " +
                      checkpoint_.string());
  }
}

std::string ExternalBackend::id() const {
  return "external:" + command_ + ":" + fs::absolute(checkpoint_).string() +
         ":layers=" + std::to_string(num_layers_);
}

std::vector<RepresentationSequence> ExternalBackend::Forward(
    const signal::Waveform& wav) const {
  static std::atomic<int> counter{0};
  const fs::path work = fs::temp_directory_path() /
                        ("r2w_rep_" + std::to_string(::getpid()) + "_" +
                         std::to_string(counter++));
  fs::create_directories(work);
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{work};

  const fs::path input = work / "input.wav";
  const fs::path out_dir = work / "layers";
  fs::create_directories(out_dir);
  signal::WriteWav(input, wav, signal::WavEncoding::kFloat32);
  auto result = RunProcess({command_, checkpoint_.string(), input.string(),
                            out_dir.string()});
  if (result.exit_code != 0) {
    throw DataError("representation tool exited with " +
                    std::to_string(result.exit_code) + ": " +
                    result.stdout_text);
  }
  std::vector<RepresentationSequence> layers;
  for (int k = 0; k <= num_layers_; ++k) {
    layers.push_back(LoadRepresentation(
        out_dir / ("layer_" + std::to_string(k) + ".rep"), dim_));
  }
  return layers;
}

}  // namespace r2w::rep
