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

#include "r2w/pipeline/stages.h"

#include <memory>
#include <stdexcept>

#include "r2w/acoustic/phonemes.h"
#include "r2w/evaluation/figure.h"
#include "r2w/evaluation/metrics.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<fs::path> LatestCheckpoint(const fs::path& dir) {
  if (!fs::is_directory(dir)) return std::nullopt;
  if (fs::exists(dir / "final.ckpt")) return dir / "final.ckpt";
  std::optional<fs::path> best;
  long long best_step = -1;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("step_", 0) != 0 || entry.path().extension() != ".ckpt") continue;
    const std::string digits = name.substr(5, name.size() - 5 - 5);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) continue;
    const long long step = std::stoll(digits);
    if (step > best_step) {
      best_step = step;
      best = entry.path();
    }
  }
  return best;
}

fs::path VocoderDir(const ExperimentConfig& config, const FeatureSpace& space) {
  return config.output_dir / "vocoder" / space.Tag();
}

fs::path AcousticDir(const ExperimentConfig& config, const FeatureSpace& space,
                     AcousticSource source) {
  return config.output_dir / "acoustic" /
         (space.Tag() + (source == AcousticSource::kClean ? "-clean" : ""));
}

namespace {

std::unique_ptr<rep::RepresentationBackend> BackendFor(const ExperimentConfig& config,
                                                       const std::vector<FeatureSpace>& spaces) {
  for (const auto& s : spaces) {
    if (!s.is_mel()) return MakeBackend(config.backend);
  }
  return nullptr;
}

// Step counts and checkpoint cadence may change between runs of the same
// directory (resume to a longer schedule); everything else may not.
json StableTrainConfig(json j) {
  j["train"].erase("steps");
  j["train"].erase("checkpoint_every");
  return j;
}

json FeatureFingerprint(const ExperimentConfig& config, const FeatureSpace& space) {
  json j{{"features", space.Tag()}};
  if (!space.is_mel()) j["backend"] = config.backend;
  return j;
}

}  // namespace

fs::path TrainVocoderStage(const ExperimentConfig& config, const FeatureSpace& space) {
  config.Validate();
  const auto backend = BackendFor(config, {space});
  FeatureExtractor extractor(backend.get(), config.CacheRoot());
  const vocoder::VocoderConfig vc = config.VocoderFor(extractor.Dim(space));

  const fs::path dir = VocoderDir(config, space);
  fs::create_directories(dir);
  json fingerprint = FeatureFingerprint(config, space);
  fingerprint["stage"] = "vocoder";
  fingerprint["vocoder_manifest"] = config.vocoder_manifest.string();
  fingerprint["config"] = StableTrainConfig(json(vc));
  EchoConfig(dir, config, fingerprint);
  FileLock lock(dir / ".lock");

  vocoder::VocoderTrainer trainer(vc, space.Tag());
  const auto latest = LatestCheckpoint(dir);
  if (latest) trainer.LoadCheckpoint(*latest);
  if (latest && latest->filename() == "final.ckpt" && trainer.step() >= vc.train.steps) {
    return *latest;
  }
  std::vector<vocoder::TrainingPair> pairs;
  for (const auto& r : LoadManifest(config.vocoder_manifest)) {
    const signal::Waveform wav = signal::LoadAudio(r.audio, signal::kPipelineSampleRate);
    pairs.push_back(vocoder::MakeTrainingPair(r.id, extractor.Extract(wav, space), wav));
  }
  trainer.Train(pairs, dir);
  return dir / "final.ckpt";
}

fs::path TrainAcousticStage(const ExperimentConfig& config, const FeatureSpace& space,
                            AcousticSource source) {
  config.Validate();
  const PreparedCorpus corpus = LoadPreparedCorpus(config);
  const auto backend = BackendFor(config, {space});
  FeatureExtractor extractor(backend.get(), config.CacheRoot());
  const acoustic::AcousticConfig ac = config.AcousticFor(extractor.Dim(space));

  const fs::path dir = AcousticDir(config, space, source);
  fs::create_directories(dir);
  json fingerprint = FeatureFingerprint(config, space);
  fingerprint["stage"] = "acoustic";
  fingerprint["source"] = source == AcousticSource::kClean ? "clean" : "enhanced";
  fingerprint["prepared"] = json::parse(ReadFileBytes(corpus.dir / "stage.json"));
  fingerprint["test_split"] = config.evaluation.test_split;
  fingerprint["config"] = StableTrainConfig(json(ac));
  EchoConfig(dir, config, fingerprint);
  FileLock lock(dir / ".lock");

  acoustic::AcousticTrainer trainer(ac, space.Tag());
  const auto latest = LatestCheckpoint(dir);
  if (latest) trainer.LoadCheckpoint(*latest);
  if (latest && latest->filename() == "final.ckpt" && trainer.step() >= ac.train.steps) {
    return *latest;
  }
  std::vector<acoustic::AcousticExample> examples;
  for (const auto& u : corpus.utterances) {
    if (u.source.split == config.evaluation.test_split) continue;
    if (u.source.phonemes.empty()) {
      throw DataError("utterance " + u.source.id + " has no phonemes");
    }
    const signal::Waveform audio = source == AcousticSource::kClean
                                       ? signal::LoadAudio(u.source.audio)
                                       : signal::ReadWav(u.enhanced_audio);
    examples.push_back(acoustic::MakeAcousticExample(
        u.source.id, acoustic::ParsePhonemes(u.source.phonemes), u.source.durations, audio,
        extractor.Extract(audio, space)));
  }
  trainer.Train(examples, dir);
  return dir / "final.ckpt";
}

Synthesizer::Synthesizer(const fs::path& acoustic_checkpoint, const fs::path& vocoder_checkpoint)
    : acoustic_(acoustic::LoadAcousticModel(acoustic_checkpoint)),
      vocoder_(vocoder::LoadGenerator(vocoder_checkpoint)) {
  if (acoustic_.layer_tag != vocoder_.layer_tag) {
    throw ConfigError("incompatible checkpoints: acoustic model " + acoustic_checkpoint.string() +
                      " predicts '" + acoustic_.layer_tag + "' features but vocoder " +
                      vocoder_checkpoint.string() + " was trained on '" + vocoder_.layer_tag +
                      "'");
  }
  const int out_dim = acoustic_.model->config().output_dim;
  const int in_dim = vocoder_.generator->config().input_dim;
  if (out_dim != in_dim) {
    throw ConfigError("incompatible checkpoints: acoustic output dim " + std::to_string(out_dim) +
                      " != vocoder input dim " + std::to_string(in_dim));
  }
  layer_tag_ = acoustic_.layer_tag;
}

signal::Waveform Synthesizer::Synthesize(const std::vector<int64_t>& phoneme_ids,
                                         const std::vector<int>& durations,
                                         std::vector<int>* durations_used) const {
  acoustic::PhonemeSequence seq;
  seq.ids = phoneme_ids;
  seq.durations = durations;
  acoustic::ValidatePhonemes(seq, acoustic_.model->config().inventory_size);
  const rep::RepresentationSequence rep = acoustic_.model->Synthesize(seq, durations_used);
  signal::Waveform wav = vocoder_.generator->Generate(rep);
  if (wav.size() != static_cast<size_t>(rep.n_frames) * 480) {
    throw std::logic_error("synthesized length breaks the 480-samples-per-frame law");
  }
  return wav;
}

signal::Waveform Synthesizer::Synthesize(const std::string& phonemes,
                                         const std::vector<int>& durations) const {
  return Synthesize(acoustic::ParsePhonemes(phonemes), durations);
}

namespace {

struct Scorers {
  std::vector<eval::Metric> metrics;
  eval::MockSpeakerEmbedder embedder;
  std::unique_ptr<eval::ExternalQualityTool> quality;

  explicit Scorers(const ExperimentConfig& config) {
    for (const auto& m : config.evaluation.metrics) metrics.push_back(eval::ParseMetric(m));
    if (!config.evaluation.quality_tool.empty()) {
      quality = std::make_unique<eval::ExternalQualityTool>(config.evaluation.quality_tool);
    }
  }

  eval::EvalOptions Options() const {
    eval::EvalOptions o;
    o.metrics = metrics;
    o.embedder = &embedder;
    o.quality_tool = quality.get();
    return o;
  }
};

fs::path RequireArtifact(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("missing per-layer artifact " + path.string());
  return path;
}

}  // namespace

eval::EvalReport RunLayerSweep(const ExperimentConfig& config,
                               const std::vector<FeatureSpace>& spaces,
                               const SweepOptions& options) {
  if (spaces.empty()) throw ConfigError("the layer sweep needs at least one feature space");
  for (size_t i = 0; i < spaces.size(); ++i) {
    for (size_t k = 0; k < i; ++k) {
      if (spaces[i] == spaces[k]) throw ConfigError("sweep lists " + spaces[i].Tag() + " twice");
    }
  }
  config.Validate();
  const PreparedCorpus corpus = LoadPreparedCorpus(config);
  std::vector<const PreparedUtterance*> test;
  for (const auto& u : corpus.utterances) {
    if (u.source.split == config.evaluation.test_split) test.push_back(&u);
  }
  if (test.empty()) {
    throw DataError("prepared corpus has no '" + config.evaluation.test_split + "' utterances");
  }
  const auto backend = BackendFor(config, spaces);
  FeatureExtractor extractor(backend.get(), config.CacheRoot());
  const Scorers scorers(config);
  const fs::path sweep_dir = config.output_dir / "sweep";

  std::vector<signal::Waveform> clean, noisy;
  for (const auto* u : test) {
    clean.push_back(signal::LoadAudio(u->source.audio));
    noisy.push_back(signal::ReadWav(u->noisy_audio));
  }

  std::vector<eval::EvalCondition> tts_conditions;
  eval::EvalCondition noisy_condition{"noisy_input", {}};
  for (size_t i = 0; i < test.size(); ++i) {
    noisy_condition.utterances.push_back({test[i]->source.id, noisy[i], clean[i]});
  }
  std::vector<eval::EvalCondition> vocoder_conditions = {noisy_condition};
  std::vector<eval::LabeledAudio> panels = {{"clean", clean[0]}};

  for (const auto& space : spaces) {
    fs::path voc_ckpt, ac_ckpt;
    if (options.train) {
      voc_ckpt = TrainVocoderStage(config, space);
      ac_ckpt = TrainAcousticStage(config, space);
    } else {
      voc_ckpt = RequireArtifact(VocoderDir(config, space) / "final.ckpt");
      ac_ckpt = RequireArtifact(AcousticDir(config, space) / "final.ckpt");
    }
    const Synthesizer synth(ac_ckpt, voc_ckpt);
    const auto generator = vocoder::LoadGenerator(voc_ckpt);
    eval::EvalCondition tts{space.Tag(), {}};
    eval::EvalCondition resynth{space.Tag(), {}};
    for (size_t i = 0; i < test.size(); ++i) {
      const std::string& id = test[i]->source.id;
      signal::Waveform wav = synth.Synthesize(test[i]->source.phonemes);
      signal::WriteWav(sweep_dir / space.Tag() / "tts" / (id + ".wav"), wav);
      tts.utterances.push_back({id, wav, clean[i]});
      signal::Waveform voc = generator.generator->Generate(extractor.Extract(noisy[i], space));
      signal::WriteWav(sweep_dir / space.Tag() / "vocoder_noisy" / (id + ".wav"), voc);
      resynth.utterances.push_back({id, voc, clean[i]});
    }
    panels.push_back({space.Tag(), tts.utterances[0].audio});
    tts_conditions.push_back(std::move(tts));
    vocoder_conditions.push_back(std::move(resynth));
  }

  const eval::EvalReport report = eval::EvaluateCorpus(tts_conditions, scorers.Options());
  eval::WriteReport(report, sweep_dir);
  eval::WriteReport(eval::EvaluateCorpus(vocoder_conditions, scorers.Options()),
                    sweep_dir / "vocoder");
  eval::WriteSpectrogramFigure(panels, sweep_dir / "figure.png");
  return report;
}

eval::EvalReport EvaluateDirectories(
    const ExperimentConfig& config,
    const std::vector<std::pair<std::string, fs::path>>& conditions, const fs::path& out_dir) {
  if (conditions.empty()) throw ConfigError("evaluate needs at least one condition");
  std::vector<UtteranceRecord> test;
  for (auto& r : LoadManifest(config.tts_manifest)) {
    if (r.split == config.evaluation.test_split) test.push_back(std::move(r));
  }
  if (test.empty()) {
    throw DataError("manifest has no '" + config.evaluation.test_split + "' utterances");
  }
  std::vector<signal::Waveform> clean;
  for (const auto& r : test) clean.push_back(signal::LoadAudio(r.audio));
  const Scorers scorers(config);

  std::vector<eval::EvalCondition> evs;
  std::vector<eval::LabeledAudio> panels = {{"clean", clean[0]}};
  for (const auto& [label, dir] : conditions) {
    eval::EvalCondition c{label, {}};
    for (size_t i = 0; i < test.size(); ++i) {
      const fs::path path = dir / (test[i].id + ".wav");
      if (!fs::exists(path)) throw DataError("condition " + label + " lacks " + path.string());
      c.utterances.push_back({test[i].id, signal::LoadAudio(path), clean[i]});
    }
    panels.push_back({label, c.utterances[0].audio});
    evs.push_back(std::move(c));
  }
  const eval::EvalReport report = eval::EvaluateCorpus(evs, scorers.Options());
  eval::WriteReport(report, out_dir);
  eval::WriteSpectrogramFigure(panels, out_dir / "figure.png");
  return report;
}

}  // namespace r2w::pipeline
