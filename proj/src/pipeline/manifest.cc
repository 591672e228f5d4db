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

#include "r2w/pipeline/manifest.h"

#include <set>
#include <sstream>

#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

json ToJson(const UtteranceRecord& r) {
  json j{{"id", r.id}, {"audio", r.audio.string()}};
  if (!r.transcript.empty()) j["transcript"] = r.transcript;
  if (!r.phonemes.empty()) j["phonemes"] = r.phonemes;
  if (!r.durations.empty()) j["durations"] = r.durations;
  if (!r.pitch.empty()) j["pitch"] = r.pitch;
  if (!r.energy.empty()) j["energy"] = r.energy;
  if (!r.speaker.empty()) j["speaker"] = r.speaker;
  j["split"] = r.split;
  return j;
}

UtteranceRecord UtteranceFromJson(const json& j, const std::string& where) {
  if (!j.is_object()) throw DataError(where + ": expected an object");
  static const std::set<std::string> kKeys = {"id",    "audio",  "transcript", "phonemes",
                                              "durations", "pitch", "energy", "speaker", "split"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw DataError(where + ": unknown key '" + key + "'");
  }
  UtteranceRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.audio = j.at("audio").get<std::string>();
    if (j.contains("transcript")) r.transcript = j["transcript"].get<std::string>();
    if (j.contains("phonemes")) r.phonemes = j["phonemes"].get<std::string>();
    if (j.contains("durations")) r.durations = j["durations"].get<std::vector<int>>();
    if (j.contains("pitch")) r.pitch = j["pitch"].get<std::vector<double>>();
    if (j.contains("energy")) r.energy = j["energy"].get<std::vector<double>>();
    if (j.contains("speaker")) r.speaker = j["speaker"].get<std::string>();
    if (j.contains("split")) r.split = j["split"].get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(where + ": " + e.what());
  }
  if (r.id.empty()) throw DataError(where + ": empty id");
  if (r.id.find_first_of("/\\,\n") != std::string::npos) {
    throw DataError(where + ": id '" + r.id + "' contains a path or CSV separator");
  }
  return r;
}

std::vector<UtteranceRecord> LoadManifest(const fs::path& path, bool check_files) {
  const std::string text = ReadFileBytes(path);
  const fs::path base = fs::absolute(path).parent_path();
  std::vector<UtteranceRecord> out;
  std::set<std::string> ids;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw DataError(where + ": invalid JSON");
    UtteranceRecord r = UtteranceFromJson(j, where);
    if (!ids.insert(r.id).second) throw DataError(where + ": duplicate id '" + r.id + "'");
    if (r.audio.is_relative()) r.audio = base / r.audio;
    if (check_files && !fs::exists(r.audio)) {
      throw DataError(where + ": audio file " + r.audio.string() + " does not exist");
    }
    out.push_back(std::move(r));
  }
  if (out.empty()) throw DataError("manifest " + path.string() + " is empty");
  return out;
}

void SaveManifest(const std::vector<UtteranceRecord>& records, const fs::path& path) {
  std::string text;
  for (const auto& r : records) text += ToJson(r).dump() + "\n";
  AtomicWriteFile(path, text);
}

}  // namespace r2w::pipeline
