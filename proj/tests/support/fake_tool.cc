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

// Stand-in for external enhancement and quality tools in tests.
//   fake_tool copy <in.wav> <out.wav>
//   fake_tool half <in.wav> <out.wav>     first half of the input
//   fake_tool garbage <in.wav> <out.wav>  non-WAV bytes
//   fake_tool fail ...                    exit 3
//   fake_tool score <value> <ref.wav> <test.wav>  prints "MOS-LQO: <value>"

#include <cstdio>
#include <cstring>
#include <exception>

#include "r2w/signal/wav_io.h"
#include "r2w/util/fs.h"

int main(int argc, char** argv) {
  if (argc < 2) return 2;
  const char* mode = argv[1];
  try {
    if (std::strcmp(mode, "fail") == 0) return 3;
    if (std::strcmp(mode, "score") == 0 && argc == 5) {
      r2w::signal::ReadWav(argv[3]);
      r2w::signal::ReadWav(argv[4]);
      std::printf("MOS-LQO: %s\n", argv[2]);
      return 0;
    }
    if (argc != 4) return 2;
    if (std::strcmp(mode, "garbage") == 0) {
      r2w::AtomicWriteFile(argv[3], "not audio");
      return 0;
    }
    auto wav = r2w::signal::ReadWav(argv[2]);
    if (std::strcmp(mode, "half") == 0) wav.samples.resize(wav.size() / 2);
    else if (std::strcmp(mode, "copy") != 0) return 2;
    r2w::signal::WriteWav(argv[3], wav);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 4;
  }
  return 0;
}
