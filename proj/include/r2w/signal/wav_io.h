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

#ifndef R2W_SIGNAL_WAV_IO_H_
#define R2W_SIGNAL_WAV_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "r2w/signal/waveform.h"

namespace r2w::signal {

enum class WavEncoding { kPcm16, kFloat32 };

// Parses a RIFF/WAVE byte buffer holding 16-bit PCM or 32-bit float samples.
// Multi-channel audio is down-mixed by averaging channels.
// Throws r2w::DataError on malformed, unsupported or empty audio.
Waveform DecodeWav(std::string_view bytes);

std::string EncodeWav(const Waveform& wav, WavEncoding encoding);

Waveform ReadWav(const std::filesystem::path& path);

void WriteWav(const std::filesystem::path& path, const Waveform& wav,
              WavEncoding encoding = WavEncoding::kFloat32);

// Reads a WAV file and resamples it to `target_rate` when needed. A file
// already at the target rate is returned with its samples untouched.
Waveform LoadAudio(const std::filesystem::path& path,
                   int target_rate = kPipelineSampleRate);

}  // namespace r2w::signal

#endif  // R2W_SIGNAL_WAV_IO_H_
