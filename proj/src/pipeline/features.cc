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

#include "r2w/pipeline/features.h"

#include <cmath>
#include <stdexcept>

#include "r2w/signal/resample.h"
#include "r2w/util/binary_io.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr char kMelMagic[8] = {'R', '2', 'W', 'M', 'E', 'L', '1', '\0'};
constexpr uint32_t kFloat32 = 1;

}  // namespace

FeatureSpace FeatureSpace::Mel() { return FeatureSpace(true, rep::LayerSpec::Single(0)); }

FeatureSpace FeatureSpace::Representation(const rep::LayerSpec& spec) {
  return FeatureSpace(false, spec);
}

FeatureSpace FeatureSpace::Parse(const std::string& tag) {
  if (tag == "mel") return Mel();
  return Representation(rep::LayerSpec::Parse(tag));
}

std::string FeatureSpace::Tag() const { return mel_ ? "mel" : layer_.Tag(); }

void SaveMel(const signal::MelSpectrogram& mel, const fs::path& path) {
  if (mel.values.size() != static_cast<size_t>(mel.n_frames) * mel.n_mels) {
    throw std::invalid_argument("SaveMel: inconsistent mel matrix");
  }
  ByteWriter w;
  w.PutBytes(std::string_view(kMelMagic, sizeof(kMelMagic)));
  w.Put<uint32_t>(kFloat32);
  w.Put<uint32_t>(static_cast<uint32_t>(mel.n_frames));
  w.Put<uint32_t>(static_cast<uint32_t>(mel.n_mels));
  w.Put<uint32_t>(static_cast<uint32_t>(mel.config.hop_size));
  w.Put<uint32_t>(static_cast<uint32_t>(mel.config.sample_rate));
  std::vector<float> values(mel.values.begin(), mel.values.end());
  w.PutArray(values);
  AtomicWriteFile(path, w.bytes());
}

signal::MelSpectrogram LoadMel(const fs::path& path) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r(bytes, "mel file " + path.string());
  if (r.GetBytes(sizeof(kMelMagic)) != std::string_view(kMelMagic, sizeof(kMelMagic))) {
    r.Fail("bad magic");
  }
  if (r.Get<uint32_t>() != kFloat32) r.Fail("unsupported dtype");
  signal::MelSpectrogram mel;
  mel.n_frames = static_cast<int>(r.Get<uint32_t>());
  mel.n_mels = static_cast<int>(r.Get<uint32_t>());
  mel.config.hop_size = static_cast<int>(r.Get<uint32_t>());
  mel.config.sample_rate = static_cast<int>(r.Get<uint32_t>());
  mel.config.n_mels = mel.n_mels;
  if (mel.n_mels <= 0 || mel.config.hop_size <= 0 || mel.config.sample_rate <= 0) {
    r.Fail("bad dimensions");
  }
  const auto values = r.GetArray<float>(static_cast<size_t>(mel.n_frames) * mel.n_mels);
  if (r.remaining() != 0) r.Fail("trailing bytes");
  mel.values.assign(values.begin(), values.end());
  return mel;
}

rep::RepresentationSequence MelAsSequence(const signal::MelSpectrogram& mel) {
  if (mel.config.hop_size * 1000 != static_cast<int>(rep::kFrameShiftMs) * mel.config.sample_rate) {
    throw std::invalid_argument("mel hop is not 20 ms; use the representation-aligned preset");
  }
  rep::RepresentationSequence seq;
  seq.n_frames = mel.n_frames;
  seq.dim = mel.n_mels;
  seq.source_rate = mel.config.sample_rate;
  seq.frames.assign(mel.values.begin(), mel.values.end());
  return seq;
}

FeatureExtractor::FeatureExtractor(const rep::RepresentationBackend* backend, fs::path cache_root)
    : backend_(backend), mel_root_(cache_root / "mel"), rep_cache_(cache_root / "rep") {}

int FeatureExtractor::Dim(const FeatureSpace& space) const {
  if (space.is_mel()) return signal::SpectralConfig::RepAligned().n_mels;
  if (backend_ == nullptr) throw ConfigError("representation features need a backend");
  return backend_->dim();
}

rep::RepresentationSequence FeatureExtractor::Extract(const signal::Waveform& wav,
                                                      const FeatureSpace& space) {
  if (!space.is_mel()) {
    if (backend_ == nullptr) throw ConfigError("representation features need a backend");
    return rep_cache_.GetOrExtract(wav, space.layer(), *backend_);
  }
  const signal::SpectralConfig config = signal::SpectralConfig::RepAligned();
  ByteWriter key;
  key.PutBytes("r2w-mel-cache-1\n");
  key.Put<int32_t>(wav.sample_rate);
  key.PutArray(wav.samples);
  const std::string digest = Sha256Hex(key.bytes());
  const fs::path path = mel_root_ / digest.substr(0, 2) / (digest + ".mel");
  const int expected = rep::ExpectedFrames(wav.size(), wav.sample_rate);
  if (fs::exists(path)) {
    try {
      auto mel = LoadMel(path);
      if (mel.n_frames == expected && mel.n_mels == config.n_mels) {
        ++mel_hits_;
        mel.config = config;
        return MelAsSequence(mel);
      }
    } catch (const DataError&) {
      // Corrupt entry; rebuilt below.
    }
  }
  ++mel_misses_;
  const signal::Waveform x =
      wav.sample_rate == config.sample_rate ? wav : signal::Resample(wav, config.sample_rate);
  signal::MelSpectrogram mel = signal::ComputeMelSpectrogram(x, config);
  if (mel.n_frames != expected) {
    throw DataError("mel frame count " + std::to_string(mel.n_frames) + " off the 20 ms grid (" +
                    std::to_string(expected) + ")");
  }
  SaveMel(mel, path);
  return MelAsSequence(mel);
}

int FeatureExtractor::hits() const { return rep_cache_.hits() + mel_hits_; }
int FeatureExtractor::misses() const { return rep_cache_.misses() + mel_misses_; }

}  // namespace r2w::pipeline
