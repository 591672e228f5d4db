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

#ifndef R2W_PIPELINE_MANIFEST_H_
#define R2W_PIPELINE_MANIFEST_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace r2w::pipeline {

// One line of a JSON-lines manifest:
//   {"id", "audio", "transcript", "phonemes": "HH AH L OW",
//    "durations": [..], "pitch": [..], "energy": [..], "speaker", "split"}
// Only id and audio are required. Durations count 20 ms frames.
struct UtteranceRecord {
  std::string id;
  std::filesystem::path audio;
  std::string transcript;
  std::string phonemes;
  std::vector<int> durations;
  std::vector<double> pitch;
  std::vector<double> energy;
  std::string speaker;
  std::string split = "train";
};

nlohmann::json ToJson(const UtteranceRecord& r);
UtteranceRecord UtteranceFromJson(const nlohmann::json& j, const std::string& where);

// Parses a manifest. Relative audio paths are resolved against the
// manifest's directory. DataError on malformed lines, duplicate ids, an
// empty manifest or (with check_files) missing audio.
std::vector<UtteranceRecord> LoadManifest(const std::filesystem::path& path,
                                          bool check_files = true);

// Writes one record per line, audio paths as given.
void SaveManifest(const std::vector<UtteranceRecord>& records,
                  const std::filesystem::path& path);

}  // namespace r2w::pipeline

#endif  // R2W_PIPELINE_MANIFEST_H_
