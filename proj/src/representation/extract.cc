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

#include "r2w/representation/extract.h"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "r2w/signal/resample.h"
#include "r2w/util/binary_io.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::rep {

namespace fs = std::filesystem;

namespace {

constexpr char kRepMagic[8] = {'R', '2', 'W', 'R', 'E', 'P', '1', '\0'};
constexpr uint32_t kDtypeFloat32 = 1;

// Maps `seq` onto exactly n frames: extra frames are dropped, missing ones
// copy the last frame.
RepresentationSequence Regrid(RepresentationSequence seq, int n) {
  if (seq.n_frames == n) return seq;
  if (seq.n_frames == 0) throw DataError("backend returned zero frames");
  const size_t dim = static_cast<size_t>(seq.dim);
  const std::vector<float> last(seq.frames.end() - static_cast<long>(dim),
                                seq.frames.end());
  seq.frames.resize(static_cast<size_t>(std::min(seq.n_frames, n)) * dim);
  for (int t = seq.n_frames; t < n; ++t) {
    seq.frames.insert(seq.frames.end(), last.begin(), last.end());
  }
  seq.n_frames = n;
  return seq;
}

}  // namespace

RepresentationSequence ReduceLayers(
    const std::vector<RepresentationSequence>& layers, const LayerSpec& spec) {
  if (layers.empty()) throw DataError("backend returned no layers");
  const auto& first = layers.front();
  for (const auto& l : layers) {
    if (l.n_frames != first.n_frames || l.dim != first.dim ||
        l.frames.size() != first.frames.size()) {
      throw DataError("backend returned layers of different shapes");
    }
  }
  if (!spec.is_average()) {
    if (spec.layer() >= static_cast<int>(layers.size())) {
      throw ConfigError("layer " + std::to_string(spec.layer()) +
                        " out of range; backend has layers 0.." +
                        std::to_string(layers.size() - 1));
    }
    return layers[static_cast<size_t>(spec.layer())];
  }
  RepresentationSequence out = first;
  std::vector<double> acc(first.frames.size(), 0.0);
  for (const auto& l : layers) {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += l.frames[i];
  }
  const double inv = 1.0 / static_cast<double>(layers.size());
  for (size_t i = 0; i < acc.size(); ++i) {
    out.frames[i] = static_cast<float>(acc[i] * inv);
  }
  return out;
}

RepresentationSequence Extract(const signal::Waveform& wav,
                               const LayerSpec& spec,
                               const RepresentationBackend& backend) {
  if (wav.empty()) throw std::invalid_argument("Extract: empty waveform");
  if (!spec.is_average() && spec.layer() > backend.num_layers()) {
    throw ConfigError("layer " + std::to_string(spec.layer()) +
                      " exceeds backend " + backend.id() + " with " +
                      std::to_string(backend.num_layers()) + " layers");
  }
  std::vector<RepresentationSequence> layers;
  try {
    if (wav.sample_rate == backend.sample_rate()) {
      layers = backend.Forward(wav);
    } else {
      layers = backend.Forward(signal::Resample(wav, backend.sample_rate()));
    }
  } catch (const std::exception& e) {
    throw DataError("backend " + backend.id() + " failed: " + e.what());
  }
  if (static_cast<int>(layers.size()) != backend.num_layers() + 1) {
    throw DataError("backend " + backend.id() + " returned " +
                    std::to_string(layers.size()) + " layers, expected " +
                    std::to_string(backend.num_layers() + 1));
  }
  RepresentationSequence reduced = ReduceLayers(layers, spec);
  reduced = Regrid(std::move(reduced), ExpectedFrames(wav.size(), wav.sample_rate));
  reduced.source_rate = wav.sample_rate;
  reduced.frame_shift_ms = kFrameShiftMs;
  try {
    ValidateSequence(reduced);
  } catch (const std::invalid_argument& e) {
    throw DataError("backend " + backend.id() + ": " + e.what());
  }
  return reduced;
}

void SaveRepresentation(const RepresentationSequence& seq,
                        const fs::path& path) {
  ValidateSequence(seq);
  ByteWriter w;
  w.PutBytes(std::string_view(kRepMagic, sizeof(kRepMagic)));
  w.Put<uint32_t>(kDtypeFloat32);
  w.Put<uint32_t>(static_cast<uint32_t>(seq.n_frames));
  w.Put<uint32_t>(static_cast<uint32_t>(seq.dim));
  w.Put<float>(static_cast<float>(seq.frame_shift_ms));
  w.Put<uint32_t>(static_cast<uint32_t>(seq.source_rate));
  w.PutArray(seq.frames);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  AtomicWriteFile(path, w.bytes());
}

RepresentationSequence LoadRepresentation(const fs::path& path,
                                          std::optional<int> expected_dim) {
  const std::string bytes = ReadFileBytes(path);
  ByteReader r(bytes, "representation file " + path.string());
  if (r.GetBytes(sizeof(kRepMagic)) != std::string_view(kRepMagic, sizeof(kRepMagic))) {
    r.Fail("bad magic");
  }
  if (r.Get<uint32_t>() != kDtypeFloat32) r.Fail("unsupported dtype");
  RepresentationSequence seq;
  seq.n_frames = static_cast<int>(r.Get<uint32_t>());
  seq.dim = static_cast<int>(r.Get<uint32_t>());
  seq.frame_shift_ms = r.Get<float>();
  seq.source_rate = static_cast<int>(r.Get<uint32_t>());
  if (seq.dim <= 0 || seq.n_frames < 0) r.Fail("bad dimensions");
  if (expected_dim && seq.dim != *expected_dim) {
    r.Fail("dim " + std::to_string(seq.dim) + " but expected " +
           std::to_string(*expected_dim));
  }
  const size_t count = static_cast<size_t>(seq.n_frames) * seq.dim;
  seq.frames = r.GetArray<float>(count);
  if (r.remaining() != 0) r.Fail("trailing bytes");
  for (float v : seq.frames) {
    if (!std::isfinite(v)) r.Fail("non-finite value");
  }
  return seq;
}

RepresentationCache::RepresentationCache(fs::path root) : root_(std::move(root)) {}

fs::path RepresentationCache::DefaultRoot(const fs::path& fallback) {
  const char* env = std::getenv("R2W_CACHE_DIR");
  if (env != nullptr && *env != '\0') return fs::path(env);
  return fallback;
}

fs::path RepresentationCache::PathFor(const signal::Waveform& wav,
                                      const LayerSpec& spec,
                                      const RepresentationBackend& backend) const {
  ByteWriter key;
  key.PutBytes("r2w-rep-cache-1\n");
  key.PutBytes(backend.id());
  key.PutBytes("\n");
  key.PutBytes(spec.Tag());
  key.PutBytes("\n");
  key.Put<int32_t>(wav.sample_rate);
  key.PutArray(wav.samples);
  const std::string digest = Sha256Hex(key.bytes());
  return root_ / digest.substr(0, 2) / (digest + ".rep");
}

RepresentationSequence RepresentationCache::GetOrExtract(
    const signal::Waveform& wav, const LayerSpec& spec,
    const RepresentationBackend& backend) {
  const fs::path path = PathFor(wav, spec, backend);
  if (fs::exists(path)) {
    try {
      auto seq = LoadRepresentation(path, backend.dim());
      if (seq.n_frames == ExpectedFrames(wav.size(), wav.sample_rate)) {
        ++hits_;
        return seq;
      }
    } catch (const DataError&) {
      // Corrupt entry; fall through and rebuild it.
    }
  }
  ++misses_;
  auto seq = Extract(wav, spec, backend);
  SaveRepresentation(seq, path);
  return seq;
}

}  // namespace r2w::rep
