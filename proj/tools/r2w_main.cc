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

// r2w command-line driver. Exit codes: 0 success, 2 configuration,
// 3 data, 4 numeric, 5 file system, 1 anything else.

#include <fmt/core.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "r2w/pipeline/config.h"
#include "r2w/pipeline/prepare.h"
#include "r2w/pipeline/stages.h"
#include "r2w/pipeline/toy_corpus.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/csv_log.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace {

namespace fs = std::filesystem;
using namespace r2w;
using namespace r2w::pipeline;

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitIo = 5;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return kExitConfig;
    case ErrorKind::kData:
      return kExitData;
    case ErrorKind::kNumeric:
      return kExitNumeric;
    case ErrorKind::kIo:
      return kExitIo;
  }
  return kExitOther;
}

// Options shared by the config-driven verbs.
struct Common {
  std::string config;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App* cmd, Common& c, bool required = true) {
  auto* opt = cmd->add_option("--config", c.config, "experiment config (JSON)");
  if (required) opt->required();
  cmd->add_option("--set", c.overrides, "override a config value, e.g. --set mix_snr_db=0")
      ->allow_extra_args(false);
}

ExperimentConfig Load(const Common& c, std::vector<std::string> extra = {}) {
  std::vector<std::string> all = c.overrides;
  all.insert(all.end(), extra.begin(), extra.end());
  return LoadExperimentConfig(c.config, all);
}

std::vector<int> ParseDurations(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    try {
      size_t used = 0;
      const int d = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(d);
    } catch (const std::exception&) {
      throw ConfigError("--durations expects comma-separated integers, got '" + text + "'");
    }
    start = end + 1;
  }
  return out;
}

void PrintReport(const eval::EvalReport& report) {
  for (const auto& row : report.rows) {
    fmt::print("{:<14} {:<20} mean={} n={} excluded={}\n", row.condition,
               eval::MetricName(row.metric), FormatDouble(row.mean), row.count, row.excluded);
  }
}

std::string Quoted(const fs::path& p) { return fmt::format("'{}'", p.string()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"r2w: text-to-speech from noisy speech via learned representations"};
  app.require_subcommand(1);

  // make-toy-corpus
  auto* toy = app.add_subcommand("make-toy-corpus", "write a synthetic corpus and a config for it");
  std::string toy_out;
  ToyCorpusOptions toy_opt;
  toy->add_option("--out", toy_out, "output directory")->required();
  toy->add_option("--utterances", toy_opt.tts_utterances, "TTS utterances");
  toy->add_option("--test", toy_opt.test_utterances, "of which test split");
  toy->add_option("--vocoder-utterances", toy_opt.vocoder_utterances, "vocoder utterances");
  toy->add_option("--noise-clips", toy_opt.noise_clips, "noise clips");
  toy->add_option("--seed", toy_opt.seed, "generator seed");

  // prepare-data
  Common prep_c;
  auto* prep = app.add_subcommand("prepare-data", "mix, enhance and cache features");
  AddCommon(prep, prep_c);
  std::optional<int> workers;
  prep->add_option("--workers", workers, "parallel workers");
  std::string prep_spaces;
  prep->add_option("--spaces", prep_spaces,
                   "comma-separated feature spaces to cache (default: features and sweep)");

  // train-vocoder
  Common tv_c;
  auto* tv = app.add_subcommand("train-vocoder", "train or resume the vocoder");
  AddCommon(tv, tv_c);
  std::string tv_features;
  std::optional<int> tv_steps;
  tv->add_option("--features", tv_features, "feature space (mel, layer<k>, average)");
  tv->add_option("--steps", tv_steps, "total training steps");

  // train-acoustic
  Common ta_c;
  auto* ta = app.add_subcommand("train-acoustic", "train or resume the acoustic model");
  AddCommon(ta, ta_c);
  std::string ta_features, ta_source = "enhanced";
  std::optional<int> ta_steps;
  ta->add_option("--features", ta_features, "feature space (mel, layer<k>, average)");
  ta->add_option("--steps", ta_steps, "total training steps");
  ta->add_option("--source", ta_source, "training audio")
      ->check(CLI::IsMember({"enhanced", "clean"}));

  // synthesize
  Common sy_c;
  auto* sy = app.add_subcommand("synthesize", "phonemes to waveform");
  AddCommon(sy, sy_c, false);
  std::string phonemes, acoustic_ckpt, vocoder_ckpt, durations_text, sy_out;
  sy->add_option("--phonemes", phonemes, "space-separated phoneme symbols")->required();
  sy->add_option("--acoustic", acoustic_ckpt, "acoustic checkpoint (default: from --config)");
  sy->add_option("--vocoder", vocoder_ckpt, "vocoder checkpoint (default: from --config)");
  sy->add_option("--durations", durations_text, "comma-separated frame counts per phoneme");
  sy->add_option("--out", sy_out, "output WAV")->required();

  // evaluate
  Common ev_c;
  auto* ev = app.add_subcommand("evaluate", "score directories of synthesized audio");
  AddCommon(ev, ev_c);
  std::vector<std::string> conditions;
  std::string ev_out;
  ev->add_option("--condition", conditions, "label=dir with <id>.wav per test utterance")
      ->required();
  ev->add_option("--out", ev_out, "report directory")->required();

  // sweep-layers
  Common sw_c;
  auto* sw = app.add_subcommand("sweep-layers", "compare feature spaces end to end");
  AddCommon(sw, sw_c);
  std::string sw_layers;
  bool no_train = false;
  sw->add_option("--layers", sw_layers, "comma-separated feature spaces (default: config sweep)");
  sw->add_flag("--no-train", no_train, "require existing checkpoints");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  auto split = [](const std::string& text) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start < text.size()) {
      size_t end = text.find(',', start);
      if (end == std::string::npos) end = text.size();
      if (end > start) out.push_back(text.substr(start, end - start));
      start = end + 1;
    }
    return out;
  };

  try {
    if (toy->parsed()) {
      const auto paths = GenerateToyCorpus(toy_out, toy_opt);
      ExperimentConfig c;
      const nlohmann::json j = {{"output_dir", "runs"},
                                {"tts_manifest", fs::relative(paths.tts_manifest, toy_out).string()},
                                {"vocoder_manifest",
                                 fs::relative(paths.vocoder_manifest, toy_out).string()},
                                {"noise_root", fs::relative(paths.noise_root, toy_out).string()},
                                {"backend", c.backend},
                                {"enhancer", c.enhancer},
                                {"features", c.features},
                                {"sweep", c.sweep},
                                {"preset", c.preset}};
      AtomicWriteFile(fs::path(toy_out) / "experiment.json", j.dump(2) + "\n");
      fmt::print("wrote toy corpus and {}\n", Quoted(fs::path(toy_out) / "experiment.json"));
    } else if (prep->parsed()) {
      std::vector<std::string> extra;
      if (workers) extra.push_back("workers=" + std::to_string(*workers));
      const auto config = Load(prep_c, extra);
      std::vector<FeatureSpace> spaces;
      if (!prep_spaces.empty()) {
        for (const auto& t : split(prep_spaces)) spaces.push_back(FeatureSpace::Parse(t));
      } else {
        spaces = config.SweepSpaces();
        const auto f = config.Features();
        bool listed = false;
        for (const auto& s : spaces) listed = listed || s == f;
        if (!listed) spaces.push_back(f);
      }
      const auto corpus = PrepareData(config, spaces);
      fmt::print("prepared {} utterances ({} reused, {} failed) in {}\n", corpus.utterances.size(),
                 corpus.reused, corpus.failed, Quoted(corpus.dir));
    } else if (tv->parsed()) {
      std::vector<std::string> extra;
      if (!tv_features.empty()) extra.push_back("features=" + tv_features);
      if (tv_steps) extra.push_back("vocoder.train.steps=" + std::to_string(*tv_steps));
      const auto config = Load(tv_c, extra);
      const auto ckpt = TrainVocoderStage(config, config.Features());
      fmt::print("vocoder checkpoint {}\n", Quoted(ckpt));
    } else if (ta->parsed()) {
      std::vector<std::string> extra;
      if (!ta_features.empty()) extra.push_back("features=" + ta_features);
      if (ta_steps) extra.push_back("acoustic.train.steps=" + std::to_string(*ta_steps));
      const auto config = Load(ta_c, extra);
      const auto ckpt = TrainAcousticStage(
          config, config.Features(),
          ta_source == "clean" ? AcousticSource::kClean : AcousticSource::kEnhanced);
      fmt::print("acoustic checkpoint {}\n", Quoted(ckpt));
    } else if (sy->parsed()) {
      if (acoustic_ckpt.empty() || vocoder_ckpt.empty()) {
        if (sy_c.config.empty()) {
          throw ConfigError("synthesize needs --acoustic and --vocoder, or --config");
        }
        const auto config = Load(sy_c);
        auto latest = [](const fs::path& dir) {
          const auto p = LatestCheckpoint(dir);
          if (!p) throw DataError("no checkpoint in " + dir.string());
          return p->string();
        };
        if (acoustic_ckpt.empty()) acoustic_ckpt = latest(AcousticDir(config, config.Features()));
        if (vocoder_ckpt.empty()) vocoder_ckpt = latest(VocoderDir(config, config.Features()));
      }
      const Synthesizer synth(acoustic_ckpt, vocoder_ckpt);
      const auto wav = synth.Synthesize(phonemes, ParseDurations(durations_text));
      signal::WriteWav(sy_out, wav);
      fmt::print("wrote {} samples to {}\n", wav.size(), Quoted(sy_out));
    } else if (ev->parsed()) {
      const auto config = Load(ev_c);
      std::vector<std::pair<std::string, fs::path>> conds;
      for (const auto& c : conditions) {
        const size_t eq = c.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == c.size()) {
          throw ConfigError("--condition expects label=dir, got '" + c + "'");
        }
        conds.emplace_back(c.substr(0, eq), c.substr(eq + 1));
      }
      PrintReport(EvaluateDirectories(config, conds, ev_out));
    } else if (sw->parsed()) {
      const auto config = Load(sw_c);
      std::vector<FeatureSpace> spaces;
      if (!sw_layers.empty()) {
        for (const auto& t : split(sw_layers)) spaces.push_back(FeatureSpace::Parse(t));
      } else {
        spaces = config.SweepSpaces();
      }
      SweepOptions opt;
      opt.train = !no_train;
      PrintReport(RunLayerSweep(config, spaces, opt));
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "r2w: %s\n", e.what());
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "r2w: %s\n", e.what());
    return kExitOther;
  }
  return 0;
}
