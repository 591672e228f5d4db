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

#include "r2w/evaluation/metrics.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "r2w/signal/resample.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::eval {

namespace fs = std::filesystem;

MockSpeakerEmbedder::MockSpeakerEmbedder(const signal::SpectralConfig& config)
    : config_(config) {
  config_.Validate();
}

std::vector<double> MockSpeakerEmbedder::Embed(const signal::Waveform& wav) const {
  if (wav.empty()) throw DataError("cannot embed empty audio");
  const signal::Waveform x =
      wav.sample_rate == config_.sample_rate ? wav : signal::Resample(wav, config_.sample_rate);
  const signal::MelSpectrogram mel = signal::ComputeMelSpectrogram(x, config_);
  std::vector<double> v(static_cast<size_t>(mel.n_mels), 0.0);
  for (int t = 0; t < mel.n_frames; ++t) {
    for (int m = 0; m < mel.n_mels; ++m) v[m] += mel.at(t, m);
  }
  double mean = 0.0;
  for (double& e : v) {
    e /= mel.n_frames;
    mean += e;
  }
  mean /= static_cast<double>(v.size());
  double norm = 0.0;
  for (double& e : v) {
    e -= mean;
    norm += e * e;
  }
  norm = std::sqrt(norm);
  if (!(norm > 1e-12)) throw DataError("flat spectrum: no speaker information to embed");
  for (double& e : v) e /= norm;
  return v;
}

double SpeakerSimilarity(const signal::Waveform& a, const signal::Waveform& b,
                         const SpeakerEmbedder& embedder) {
  if (a.empty() || b.empty()) throw DataError("speaker similarity of empty audio");
  const std::vector<double> ea = embedder.Embed(a);
  const std::vector<double> eb = embedder.Embed(b);
  if (ea.size() != eb.size()) {
    throw NumericError("embedder " + embedder.id() + " returned vectors of different sizes");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < ea.size(); ++i) {
    dot += ea[i] * eb[i];
    na += ea[i] * ea[i];
    nb += eb[i] * eb[i];
  }
  if (std::abs(std::sqrt(na) - 1.0) > 1e-6 || std::abs(std::sqrt(nb) - 1.0) > 1e-6) {
    throw NumericError("embedder " + embedder.id() + " returned a non-unit vector");
  }
  return std::clamp(dot, -1.0, 1.0);
}

namespace {

bool ParseNumber(const std::string& text, double& out) {
  std::istringstream in(text);
  double v;
  if (!(in >> v)) return false;
  std::string rest;
  if (in >> rest) return false;
  out = v;
  return true;
}

}  // namespace

double ParseMosLqo(const std::string& tool_output) {
  double value = 0.0;
  bool found = false;
  std::istringstream lines(tool_output);
  std::string line;
  while (std::getline(lines, line)) {
    const auto pos = line.find("MOS-LQO:");
    if (pos == std::string::npos) continue;
    found = ParseNumber(line.substr(pos + 8), value) || found;
  }
  if (!found) found = ParseNumber(tool_output, value);
  if (!found) throw DataError("no MOS-LQO value in quality tool output: '" + tool_output + "'");
  if (!(value >= kMosLqoMin && value <= kMosLqoMax)) {
    throw DataError("MOS-LQO " + std::to_string(value) + " outside [1, 4.75]");
  }
  return value;
}

ExternalQualityTool::ExternalQualityTool(std::string command) : command_(std::move(command)) {
  if (command_.empty() || !ExecutableExists(command_)) {
    throw ConfigError("quality tool not found: " + command_);
  }
}

double ExternalQualityTool::Score(const signal::Waveform& reference,
                                  const signal::Waveform& test) const {
  std::lock_guard<std::mutex> lock(mu_);
  static std::atomic<int> counter{0};
  const fs::path work = fs::temp_directory_path() /
                        ("r2w_quality_" + std::to_string(::getpid()) + "_" +
                         std::to_string(counter++));
  fs::create_directories(work);
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{work};
  signal::WriteWav(work / "reference.wav", reference);
  signal::WriteWav(work / "test.wav", test);
  const auto result =
      RunProcess({command_, (work / "reference.wav").string(), (work / "test.wav").string()});
  if (result.exit_code != 0) {
    throw DataError("quality tool exited with " + std::to_string(result.exit_code));
  }
  return ParseMosLqo(result.stdout_text);
}

}  // namespace r2w::eval
