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

#include "r2w/signal/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "r2w/signal/resample.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::signal {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLe(std::string_view bytes, size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void AppendLe(std::string* out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out->append(buf, sizeof(T));
}

}  // namespace

Waveform DecodeWav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" ||
      bytes.substr(8, 4) != "WAVE") {
    throw DataError("not a RIFF/WAVE file");
  }
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t rate = 0;
  uint16_t bits = 0;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::string_view id = bytes.substr(pos, 4);
    uint32_t size = ReadLe<uint32_t>(bytes, pos + 4);
    size_t body = pos + 8;
    size_t avail = bytes.size() - body;
    if (id == "fmt ") {
      if (size < 16 || avail < 16) throw DataError("truncated fmt chunk");
      format = ReadLe<uint16_t>(bytes, body);
      channels = ReadLe<uint16_t>(bytes, body + 2);
      rate = ReadLe<uint32_t>(bytes, body + 4);
      bits = ReadLe<uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (size < 26 || avail < 26)
          throw DataError("truncated extensible fmt chunk");
        format = ReadLe<uint16_t>(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      // Some writers leave the size field unset; clamp to what is there.
      data = bytes.substr(body, std::min<size_t>(size, avail));
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || !have_data) throw DataError("missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw DataError("invalid fmt chunk");

  int bytes_per_sample = 0;
  if (format == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == kFormatFloat && bits == 32) {
    bytes_per_sample = 4;
  } else {
    throw DataError("unsupported WAV encoding (format " +
                    std::to_string(format) + ", " + std::to_string(bits) +
                    " bits)");
  }
  const size_t frame_bytes = static_cast<size_t>(bytes_per_sample) * channels;
  const size_t n = data.size() / frame_bytes;
  if (n == 0) throw DataError("WAV file holds no audio");

  Waveform wav;
  wav.sample_rate = static_cast<int>(rate);
  wav.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (uint16_t c = 0; c < channels; ++c) {
      size_t off = i * frame_bytes + static_cast<size_t>(c) * bytes_per_sample;
      if (bytes_per_sample == 2) {
        acc += ReadLe<int16_t>(data, off) / 32768.0;
      } else {
        acc += static_cast<double>(ReadLe<float>(data, off));
      }
    }
    wav.samples[i] = channels == 1 ? acc : acc / channels;
    if (!std::isfinite(wav.samples[i]))
      throw DataError("WAV file holds non-finite samples");
  }
  return wav;
}

std::string EncodeWav(const Waveform& wav, WavEncoding encoding) {
  ValidateWaveform(wav);
  const bool pcm = encoding == WavEncoding::kPcm16;
  const uint16_t bits = pcm ? 16 : 32;
  const uint32_t block = bits / 8;
  const uint32_t data_size = static_cast<uint32_t>(wav.size() * block);

  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  AppendLe<uint32_t>(&out, 36 + data_size);
  out.append("WAVE");
  out.append("fmt ");
  AppendLe<uint32_t>(&out, 16);
  AppendLe<uint16_t>(&out, pcm ? kFormatPcm : kFormatFloat);
  AppendLe<uint16_t>(&out, 1);
  AppendLe<uint32_t>(&out, static_cast<uint32_t>(wav.sample_rate));
  AppendLe<uint32_t>(&out, static_cast<uint32_t>(wav.sample_rate) * block);
  AppendLe<uint16_t>(&out, static_cast<uint16_t>(block));
  AppendLe<uint16_t>(&out, bits);
  out.append("data");
  AppendLe<uint32_t>(&out, data_size);
  for (double s : wav.samples) {
    if (pcm) {
      double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32767.0);
      AppendLe<int16_t>(&out, static_cast<int16_t>(scaled));
    } else {
      AppendLe<float>(&out, static_cast<float>(s));
    }
  }
  return out;
}

Waveform ReadWav(const std::filesystem::path& path) {
  try {
    return DecodeWav(ReadFileBytes(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteWav(const std::filesystem::path& path, const Waveform& wav,
              WavEncoding encoding) {
  AtomicWriteFile(path, EncodeWav(wav, encoding));
}

Waveform LoadAudio(const std::filesystem::path& path, int target_rate) {
  Waveform wav = ReadWav(path);
  if (wav.sample_rate == target_rate) return wav;
  return Resample(wav, target_rate);
}

}  // namespace r2w::signal
