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

#include "r2w/pipeline/toy_corpus.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "r2w/acoustic/phonemes.h"
#include "r2w/pipeline/manifest.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/error.h"

namespace r2w::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr int kRate = 24000;
constexpr int kHop = 480;

// std distributions are implementation-defined, so draw from the raw
// engine output.
class Draw {
 public:
  explicit Draw(uint64_t seed) : rng_(seed) {}
  double Uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  int Int(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<uint64_t>(hi - lo + 1)); }
  double Gaussian() {
    const double u1 = 1.0 - Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

bool IsSilence(const std::string& s) { return s == "sil" || s == "sp"; }

bool IsObstruent(const std::string& s) {
  static const std::set<std::string> kSet = {"B", "CH", "D",  "DH", "F", "G", "HH", "JH", "K",
                                             "P", "S",  "SH", "T",  "TH", "V", "Z",  "ZH"};
  return kSet.count(s) > 0;
}

double Resonance(double f, double center, double bandwidth) {
  const double d = (f - center) / bandwidth;
  return std::exp(-0.5 * d * d);
}

}  // namespace

signal::Waveform SynthesizeToySpeech(const std::vector<int64_t>& ids,
                                     const std::vector<int>& durations, double f0_hz,
                                     uint64_t seed) {
  if (ids.size() != durations.size()) {
    throw std::invalid_argument("SynthesizeToySpeech: ids and durations differ in length");
  }
  const auto& inventory = acoustic::PhonemeInventory();
  Draw draw(seed);
  signal::Waveform w;
  w.sample_rate = kRate;
  double phase = 0.0;
  size_t total = 0;
  for (int d : durations) total += static_cast<size_t>(std::max(0, d)) * kHop;
  w.samples.reserve(total);
  for (size_t p = 0; p < ids.size(); ++p) {
    if (ids[p] < 0 || ids[p] >= static_cast<int64_t>(inventory.size())) {
      throw DataError("SynthesizeToySpeech: phoneme id out of range");
    }
    const std::string& sym = inventory[static_cast<size_t>(ids[p])];
    const size_t n = static_cast<size_t>(std::max(0, durations[p])) * kHop;
    const double f1 = 300.0 + static_cast<double>((ids[p] * 137) % 500);
    const double f2 = 900.0 + static_cast<double>((ids[p] * 311) % 1600);
    const double fric_center = 2500.0 + static_cast<double>((ids[p] * 577) % 4000);
    double lp = 0.0;
    for (size_t i = 0; i < n; ++i) {
      // 5 ms raised-cosine edges.
      const double edge = std::min({1.0, static_cast<double>(i) / 120.0,
                                    static_cast<double>(n - 1 - i) / 120.0});
      const double env = 0.5 - 0.5 * std::cos(std::numbers::pi * edge);
      const double t = static_cast<double>(w.samples.size()) / kRate;
      const double f0 = f0_hz * (1.0 + 0.08 * std::sin(2.0 * std::numbers::pi * 1.3 * t));
      phase += 2.0 * std::numbers::pi * f0 / kRate;
      double s = 0.0;
      if (IsSilence(sym)) {
        s = 0.0;
      } else if (IsObstruent(sym)) {
        // One-pole high-passed noise, tilted by the phoneme's band.
        const double x = draw.Gaussian();
        lp += (x - lp) * (fric_center / kRate);
        s = 0.12 * (x - lp);
      } else {
        for (int h = 1; h * f0 < 5000.0; ++h) {
          const double f = h * f0;
          const double g = 0.15 + Resonance(f, f1, 120.0) + 0.7 * Resonance(f, f2, 180.0);
          s += g * std::sin(h * phase) / std::sqrt(static_cast<double>(h));
        }
        s *= 0.06;
      }
      w.samples.push_back(env * s);
    }
  }
  return w;
}

ToyCorpusPaths GenerateToyCorpus(const fs::path& dir, const ToyCorpusOptions& options) {
  if (options.tts_utterances < 1 || options.vocoder_utterances < 1 || options.noise_clips < 1 ||
      options.vocoder_speakers < 1 || options.test_utterances < 0 ||
      options.test_utterances >= options.tts_utterances || !(options.noise_seconds > 0.0)) {
    throw ConfigError("toy corpus: bad sizes");
  }
  const auto& inventory = acoustic::PhonemeInventory();
  std::vector<int64_t> speech_ids;
  for (size_t i = 0; i < inventory.size(); ++i) {
    if (!IsSilence(inventory[i])) speech_ids.push_back(static_cast<int64_t>(i));
  }
  const int64_t sil = acoustic::PhonemeId("sil");

  auto make_utterance = [&](const std::string& id, const fs::path& wav_path, double f0,
                            uint64_t seed, const std::string& speaker,
                            const std::string& split) {
    Draw draw(seed);
    std::vector<int64_t> ids = {sil};
    std::vector<int> durations = {draw.Int(3, 6)};
    const int n = draw.Int(5, 9);
    for (int k = 0; k < n; ++k) {
      ids.push_back(speech_ids[static_cast<size_t>(draw.Int(0, static_cast<int>(speech_ids.size()) - 1))]);
      durations.push_back(draw.Int(3, 8));
    }
    ids.push_back(sil);
    durations.push_back(draw.Int(3, 6));
    auto wav = SynthesizeToySpeech(ids, durations, f0, seed ^ 0x5eedULL);
    for (double& s : wav.samples) s += options.noise_floor * draw.Gaussian();
    signal::WriteWav(wav_path, wav);
    UtteranceRecord r;
    r.id = id;
    r.audio = fs::relative(wav_path, dir);
    std::string text;
    for (int64_t p : ids) text += (text.empty() ? "" : " ") + inventory[static_cast<size_t>(p)];
    r.transcript = text;
    r.phonemes = text;
    r.durations = durations;
    r.speaker = speaker;
    r.split = split;
    return r;
  };

  fs::create_directories(dir / "tts");
  fs::create_directories(dir / "vocoder");
  fs::create_directories(dir / "noise");

  std::vector<UtteranceRecord> tts;
  for (int i = 0; i < options.tts_utterances; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "tts_%04d", i);
    const bool test = i >= options.tts_utterances - options.test_utterances;
    tts.push_back(make_utterance(id, dir / "tts" / (std::string(id) + ".wav"), 160.0,
                                 options.seed * 1000003ULL + static_cast<uint64_t>(i), "spk_tts",
                                 test ? "test" : "train"));
  }
  std::vector<UtteranceRecord> voc;
  for (int i = 0; i < options.vocoder_utterances; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "voc_%04d", i);
    const int spk = i % options.vocoder_speakers;
    const double f0 = 100.0 + 120.0 * spk / std::max(1, options.vocoder_speakers - 1);
    voc.push_back(make_utterance(id, dir / "vocoder" / (std::string(id) + ".wav"), f0,
                                 options.seed * 2000003ULL + static_cast<uint64_t>(i),
                                 "spk_" + std::to_string(spk), "train"));
  }
  SaveManifest(tts, dir / "tts.jsonl");
  SaveManifest(voc, dir / "vocoder.jsonl");

  const auto n_noise = static_cast<size_t>(std::llround(options.noise_seconds * kRate));
  for (int k = 0; k < options.noise_clips; ++k) {
    Draw draw(options.seed * 3000017ULL + static_cast<uint64_t>(k));
    signal::Waveform noise;
    noise.samples.resize(n_noise);
    double b0 = 0.0, b1 = 0.0, b2 = 0.0, brown = 0.0;
    for (size_t i = 0; i < n_noise; ++i) {
      const double x = draw.Gaussian();
      double s = 0.0;
      switch (k % 4) {
        case 0:  // white
          s = x;
          break;
        case 1:  // pink, three-pole approximation
          b0 = 0.99765 * b0 + x * 0.0990460;
          b1 = 0.96300 * b1 + x * 0.2965164;
          b2 = 0.57000 * b2 + x * 1.0526913;
          s = (b0 + b1 + b2 + x * 0.1848) * 0.3;
          break;
        case 2:  // brown, leaky
          brown = 0.995 * brown + 0.1 * x;
          s = brown;
          break;
        default: {  // mains hum with harmonics over a little hiss
          const double t = static_cast<double>(i) / kRate;
          for (int h = 1; h <= 6; ++h) s += std::sin(2.0 * std::numbers::pi * 50.0 * h * t) / h;
          s += 0.2 * x;
          break;
        }
      }
      noise.samples[i] = 0.05 * s;
    }
    char name[32];
    std::snprintf(name, sizeof(name), "noise_%02d.wav", k);
    signal::WriteWav(dir / "noise" / name, noise);
  }
  return {dir / "tts.jsonl", dir / "vocoder.jsonl", dir / "noise"};
}

}  // namespace r2w::pipeline
