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

#include "r2w/pipeline/config.h"

#include <cmath>

#include "r2w/acoustic/phonemes.h"
#include "r2w/evaluation/report.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"
#include "r2w/util/json_util.h"

namespace r2w::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int BackendLayers(const json& spec) {
  if (!spec.is_object() || !spec.contains("num_layers") || !spec["num_layers"].is_number_integer()) {
    throw ConfigError("backend.num_layers must be an integer");
  }
  return spec["num_layers"].get<int>();
}

void CheckSpace(const FeatureSpace& space, int num_layers) {
  if (!space.is_mel() && !space.layer().is_average() && space.layer().layer() > num_layers) {
    throw ConfigError("feature space " + space.Tag() + " exceeds the backend's " +
                      std::to_string(num_layers) + " layers");
  }
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  if (!std::isfinite(mix_snr_db)) throw ConfigError("mix_snr_db must be finite");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(max_failure_fraction >= 0.0 && max_failure_fraction < 1.0)) {
    throw ConfigError("max_failure_fraction must lie in [0, 1)");
  }
  if (!enhancer.is_object() || !enhancer.contains("kind")) {
    throw ConfigError("enhancer must be an object with a kind");
  }
  if (!backend.is_object() || !backend.contains("kind")) {
    throw ConfigError("backend must be an object with a kind");
  }
  const int layers = BackendLayers(backend);
  CheckSpace(Features(), layers);
  for (const auto& s : SweepSpaces()) CheckSpace(s, layers);
  if (spectral_preset != "rep_aligned") {
    throw ConfigError("spectral_preset '" + spectral_preset +
                      "' is not aligned with the 20 ms representation grid (hop 480 at 24 kHz); "
                      "use rep_aligned");
  }
  if (preset != "toy" && preset != "full" && preset != "tiny") {
    throw ConfigError("preset must be tiny, toy or full");
  }
  const auto v = VocoderFor(80);
  v.generator.Validate();
  v.discriminator.Validate();
  AcousticFor(80).model.Validate();
  bool wants_mos = false;
  for (const auto& m : evaluation.metrics) {
    wants_mos = wants_mos || eval::ParseMetric(m) == eval::Metric::kMosLqo;
  }
  if (wants_mos && evaluation.quality_tool.empty()) {
    throw ConfigError("metric mos_lqo needs evaluation.quality_tool");
  }
}

fs::path ExperimentConfig::CacheRoot() const {
  if (!cache_dir.empty()) return cache_dir;
  return rep::RepresentationCache::DefaultRoot(output_dir / "cache");
}

std::vector<FeatureSpace> ExperimentConfig::SweepSpaces() const {
  std::vector<FeatureSpace> out;
  for (const auto& tag : sweep) {
    const auto space = FeatureSpace::Parse(tag);
    for (const auto& s : out) {
      if (s == space) throw ConfigError("sweep lists " + tag + " twice");
    }
    out.push_back(space);
  }
  return out;
}

vocoder::VocoderConfig ExperimentConfig::VocoderFor(int input_dim) const {
  vocoder::VocoderConfig c = vocoder::VocoderConfig::Toy(input_dim);
  if (preset == "full") {
    c = vocoder::VocoderConfig{};
    c.generator = vocoder::GeneratorConfig::Full();
    c.discriminator = vocoder::DiscriminatorConfig::Full();
  } else if (preset == "tiny") {
    c.generator = vocoder::GeneratorConfig::Tiny(input_dim);
    c.discriminator = vocoder::DiscriminatorConfig::Tiny();
    c.train.steps = 20;
    c.train.crop_frames = 4;
  }
  c.train.seed = seed;
  from_json(vocoder, c);
  c.generator.input_dim = input_dim;
  return c;
}

acoustic::AcousticConfig ExperimentConfig::AcousticFor(int output_dim) const {
  acoustic::AcousticConfig c = acoustic::AcousticConfig::Toy(output_dim);
  if (preset == "full") {
    c = acoustic::AcousticConfig{};
    c.model = acoustic::AcousticModelConfig::Full();
  } else if (preset == "tiny") {
    c.model = acoustic::AcousticModelConfig::Tiny(output_dim);
    c.model.inventory_size = acoustic::InventorySize();
    c.train.steps = 20;
    c.train.warmup_steps = 10;
  }
  c.train.seed = seed;
  from_json(acoustic, c);
  c.model.output_dim = output_dim;
  return c;
}

json ToJson(const ExperimentConfig& c) {
  return json{{"output_dir", c.output_dir.string()},
              {"tts_manifest", c.tts_manifest.string()},
              {"vocoder_manifest", c.vocoder_manifest.string()},
              {"noise_root", c.noise_root.string()},
              {"cache_dir", c.cache_dir.string()},
              {"mix_snr_db", c.mix_snr_db},
              {"enhancer", c.enhancer},
              {"backend", c.backend},
              {"features", c.features},
              {"sweep", c.sweep},
              {"spectral_preset", c.spectral_preset},
              {"preset", c.preset},
              {"vocoder", c.vocoder},
              {"acoustic", c.acoustic},
              {"seed", c.seed},
              {"workers", c.workers},
              {"max_failure_fraction", c.max_failure_fraction},
              {"evaluation",
               {{"metrics", c.evaluation.metrics},
                {"quality_tool", c.evaluation.quality_tool},
                {"test_split", c.evaluation.test_split}}}};
}

namespace {

fs::path Anchor(const std::string& p, const fs::path& base) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

ExperimentConfig ExperimentConfigFromJson(const json& j, const fs::path& base_dir) {
  const std::string where = "config";
  CheckKeys(j, where,
            {"output_dir", "tts_manifest", "vocoder_manifest", "noise_root", "cache_dir",
             "mix_snr_db", "enhancer", "backend", "features", "sweep", "spectral_preset",
             "preset", "vocoder", "acoustic", "seed", "workers", "max_failure_fraction",
             "evaluation"});
  ExperimentConfig c;
  std::string output_dir = c.output_dir.string(), tts, voc, noise, cache;
  ReadOptional(j, "output_dir", output_dir, where);
  ReadOptional(j, "tts_manifest", tts, where);
  ReadOptional(j, "vocoder_manifest", voc, where);
  ReadOptional(j, "noise_root", noise, where);
  ReadOptional(j, "cache_dir", cache, where);
  c.output_dir = Anchor(output_dir, base_dir);
  c.tts_manifest = Anchor(tts, base_dir);
  c.vocoder_manifest = Anchor(voc, base_dir);
  c.noise_root = Anchor(noise, base_dir);
  c.cache_dir = Anchor(cache, base_dir);
  ReadOptional(j, "mix_snr_db", c.mix_snr_db, where);
  if (j.contains("enhancer")) c.enhancer = j["enhancer"];
  if (j.contains("backend")) c.backend = j["backend"];
  ReadOptional(j, "features", c.features, where);
  ReadOptional(j, "sweep", c.sweep, where);
  ReadOptional(j, "spectral_preset", c.spectral_preset, where);
  ReadOptional(j, "preset", c.preset, where);
  if (j.contains("vocoder")) c.vocoder = j["vocoder"];
  if (j.contains("acoustic")) c.acoustic = j["acoustic"];
  ReadOptional(j, "seed", c.seed, where);
  ReadOptional(j, "workers", c.workers, where);
  ReadOptional(j, "max_failure_fraction", c.max_failure_fraction, where);
  if (j.contains("evaluation")) {
    const json& e = j["evaluation"];
    CheckKeys(e, "config.evaluation", {"metrics", "quality_tool", "test_split"});
    ReadOptional(e, "metrics", c.evaluation.metrics, "config.evaluation");
    ReadOptional(e, "quality_tool", c.evaluation.quality_tool, "config.evaluation");
    ReadOptional(e, "test_split", c.evaluation.test_split, "config.evaluation");
  }
  if (c.backend.is_object() && c.backend.contains("checkpoint") &&
      c.backend["checkpoint"].is_string()) {
    c.backend["checkpoint"] = Anchor(c.backend["checkpoint"].get<std::string>(), base_dir).string();
  }
  return c;
}

void ApplyOverride(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "' has an empty key part");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override '" + assignment + "' descends into a value");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

ExperimentConfig LoadExperimentConfig(const fs::path& path,
                                      const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(ReadFileBytes(path));
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& o : overrides) ApplyOverride(j, o);
  ExperimentConfig c = ExperimentConfigFromJson(j, fs::absolute(path).parent_path());
  c.Validate();
  return c;
}

std::unique_ptr<rep::RepresentationBackend> MakeBackend(const json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    throw ConfigError("backend: expected an object with a string kind");
  }
  const std::string kind = spec["kind"];
  int num_layers = 12, dim = rep::kDefaultRepDim;
  ReadOptional(spec, "num_layers", num_layers, "backend");
  ReadOptional(spec, "dim", dim, "backend");
  if (num_layers < 0 || dim <= 0) throw ConfigError("backend: bad num_layers or dim");
  if (kind == "mock") {
    CheckKeys(spec, "backend", {"kind", "seed", "num_layers", "dim"});
    uint64_t seed = 1;
    ReadOptional(spec, "seed", seed, "backend");
    return std::make_unique<rep::MockBackend>(seed, num_layers, dim);
  }
  if (kind == "external") {
    CheckKeys(spec, "backend", {"kind", "command", "checkpoint", "num_layers", "dim"});
    std::string command, checkpoint;
    ReadOptional(spec, "command", command, "backend");
    ReadOptional(spec, "checkpoint", checkpoint, "backend");
    return std::make_unique<rep::ExternalBackend>(command, checkpoint, num_layers, dim);
  }
  throw ConfigError("backend: unknown kind '" + kind + "'");
}

void EchoConfig(const fs::path& dir, const ExperimentConfig& config, const json& fingerprint) {
  const fs::path stage = dir / "stage.json";
  const std::string text = fingerprint.dump(2) + "\n";
  if (fs::exists(stage)) {
    json existing;
    try {
      existing = json::parse(ReadFileBytes(stage));
    } catch (const json::exception&) {
      throw ConfigError(stage.string() + " is unreadable; remove the directory to start over");
    }
    if (existing != fingerprint) {
      throw ConfigError(dir.string() +
                        " was produced by a different configuration; compare stage.json or "
                        "choose another output_dir");
    }
  }
  AtomicWriteFile(stage, text);
  AtomicWriteFile(dir / "experiment.json", ToJson(config).dump(2) + "\n");
}

}  // namespace r2w::pipeline
