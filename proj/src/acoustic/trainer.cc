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

#include "r2w/acoustic/trainer.h"

#include <cmath>

#include "r2w/nn/checkpoint.h"
#include "r2w/nn/ops.h"
#include "r2w/signal/prosody.h"
#include "r2w/util/csv_log.h"
#include "r2w/util/error.h"

namespace r2w::acoustic {

namespace fs = std::filesystem;
using nn::Tensor;

namespace {

constexpr int kCheckpointVersion = 1;

void CheckKindAndVersion(const nn::Checkpoint& ckpt, const fs::path& path) {
  if (ckpt.meta.at("kind") != "acoustic") {
    throw ConfigError(path.string() + " is not an acoustic checkpoint");
  }
  const int version = ckpt.meta.at("version").get<int>();
  if (version != kCheckpointVersion) {
    throw DataError(path.string() + ": acoustic checkpoint version " + std::to_string(version) +
                    ", expected " + std::to_string(kCheckpointVersion));
  }
}

Tensor TargetTensor(const rep::RepresentationSequence& r) {
  return Tensor::FromVector({r.n_frames, r.dim},
                            std::vector<double>(r.frames.begin(), r.frames.end()));
}

AcousticLossBreakdown& operator+=(AcousticLossBreakdown& a, const AcousticLossBreakdown& b) {
  a.rep_l1 += b.rep_l1;
  a.dur_mse += b.dur_mse;
  a.pitch_mse += b.pitch_mse;
  a.energy_mse += b.energy_mse;
  a.total += b.total;
  return a;
}

AcousticLossBreakdown Scaled(AcousticLossBreakdown a, double s) {
  a.rep_l1 *= s;
  a.dur_mse *= s;
  a.pitch_mse *= s;
  a.energy_mse *= s;
  a.total *= s;
  return a;
}

}  // namespace

AcousticExample MakeAcousticExample(std::string id, std::vector<int64_t> ids,
                                    std::vector<int> durations, const signal::Waveform& audio,
                                    rep::RepresentationSequence target) {
  if (ids.empty()) throw DataError(id + ": no phonemes");
  if (audio.sample_rate != signal::kPipelineSampleRate) {
    throw std::invalid_argument("MakeAcousticExample: audio must be at 24 kHz");
  }
  const int frames = target.n_frames;
  if (durations.empty()) durations = UniformSplitDurations(ids.size(), frames);
  if (durations.size() != ids.size()) {
    throw DataError(id + ": " + std::to_string(durations.size()) + " durations for " +
                    std::to_string(ids.size()) + " phonemes");
  }
  try {
    durations = ReconcileDurations(std::move(durations), frames);
  } catch (const DataError& e) {
    throw DataError(id + ": " + e.what());
  }
  const int hop = target.hop_samples();
  signal::PitchConfig pc;
  pc.hop_size = hop;
  pc.window_size = 2 * hop;
  std::vector<double> f0 = signal::EstimatePitch(audio, pc);
  std::vector<double> rms = signal::FrameRms(audio, hop, 2 * hop);
  f0.resize(static_cast<size_t>(frames), 0.0);
  rms.resize(static_cast<size_t>(frames), 0.0);

  AcousticExample ex;
  ex.id = std::move(id);
  ex.phonemes.ids = std::move(ids);
  ex.phonemes.pitch = PhonemeAverages(f0, durations, true);
  ex.phonemes.energy = PhonemeAverages(rms, durations, false);
  ex.phonemes.durations = std::move(durations);
  ex.target = std::move(target);
  return ex;
}

AcousticTrainer::AcousticTrainer(const AcousticConfig& config, std::string layer_tag)
    : config_(config), layer_tag_(std::move(layer_tag)), rng_(config.train.seed) {
  model_ = std::make_unique<AcousticModel>(config_.model, rng_);
  nn::AdamOptions o;
  o.lr = 0.0;
  o.beta1 = config_.train.beta1;
  o.beta2 = config_.train.beta2;
  o.eps = config_.train.eps;
  opt_ = std::make_unique<nn::Adam>(model_->Parameters(), o);
}

void AcousticTrainer::CheckExample(const AcousticExample& ex) const {
  if (ex.target.dim != config_.model.output_dim) {
    throw ConfigError("targets for " + ex.id + " have dim " + std::to_string(ex.target.dim) +
                      ", model outputs " + std::to_string(config_.model.output_dim));
  }
  if (ex.phonemes.total_frames() != ex.target.n_frames) {
    throw DataError(ex.id + ": durations cover " + std::to_string(ex.phonemes.total_frames()) +
                    " frames, target has " + std::to_string(ex.target.n_frames));
  }
}

AcousticLossTerms AcousticTrainer::ExampleLoss(const AcousticExample& ex) const {
  CheckExample(ex);
  const AcousticOutputs out = model_->Forward(ex.phonemes);
  return AcousticLoss(out.representation, TargetTensor(ex.target), out.log_duration, out.pitch,
                      out.energy, MakeVarianceTargets(ex.phonemes, model_->stats()),
                      config_.train.weights);
}

AcousticLossBreakdown AcousticTrainer::Step(const std::vector<const AcousticExample*>& batch) {
  if (batch.empty()) throw std::invalid_argument("AcousticTrainer: empty batch");
  const double lr_scale = config_.train.lr_scale > 0.0
                              ? config_.train.lr_scale
                              : 1.0 / std::sqrt(static_cast<double>(config_.model.hidden));
  opt_->set_lr(nn::InverseSqrtWarmupLr(lr_scale, step_ + 1, config_.train.warmup_steps));
  const double inv = 1.0 / static_cast<double>(batch.size());
  Tensor total;
  AcousticLossBreakdown sum;
  for (const auto* ex : batch) {
    AcousticLossTerms t = ExampleLoss(*ex);
    sum += t.values();
    total = total.defined() ? nn::Add(total, t.total) : t.total;
  }
  AcousticLossBreakdown mean = Scaled(sum, inv);
  if (!std::isfinite(mean.total)) {
    throw NumericError("non-finite acoustic loss at step " + std::to_string(step_ + 1) +
                       " (rep_l1 " + std::to_string(mean.rep_l1) + ", dur " +
                       std::to_string(mean.dur_mse) + ")");
  }
  opt_->ZeroGrad();
  nn::MulScalar(total, inv).Backward();
  opt_->Step();
  ++step_;
  return mean;
}

AcousticLossBreakdown AcousticTrainer::Evaluate(const std::vector<AcousticExample>& data) const {
  if (data.empty()) throw DataError("nothing to evaluate");
  nn::NoGradGuard no_grad;
  AcousticLossBreakdown sum;
  for (const auto& ex : data) sum += ExampleLoss(ex).values();
  return Scaled(sum, 1.0 / static_cast<double>(data.size()));
}

void AcousticTrainer::Train(const std::vector<AcousticExample>& data, const fs::path& out_dir) {
  if (data.empty()) throw DataError("acoustic training set is empty");
  for (const auto& ex : data) {
    ValidatePhonemes(ex.phonemes, config_.model.inventory_size);
    CheckExample(ex);
  }
  if (!resumed_) {
    std::vector<PhonemeSequence> seqs;
    for (const auto& ex : data) seqs.push_back(ex.phonemes);
    model_->set_stats(VarianceStats::Fit(seqs));
  }
  fs::create_directories(out_dir);
  CsvLog log(out_dir / "loss_log.csv", {"rep_l1", "dur_mse", "pitch_mse", "energy_mse", "total"},
             resumed_ ? step_ : -1);
  std::vector<const AcousticExample*> batch;
  while (step_ < config_.train.steps) {
    batch.clear();
    for (int i = 0; i < config_.train.batch_size; ++i) {
      batch.push_back(&data[rng_() % data.size()]);
    }
    AcousticLossBreakdown l;
    try {
      l = Step(batch);
    } catch (const NumericError& e) {
      const fs::path snap = out_dir / ("diagnostic_step" + std::to_string(step_ + 1) + ".ckpt");
      SaveCheckpoint(snap);
      throw NumericError(std::string(e.what()) + "; state saved to " + snap.string());
    }
    log.Append(step_, {l.rep_l1, l.dur_mse, l.pitch_mse, l.energy_mse, l.total});
    if (config_.train.checkpoint_every > 0 && step_ % config_.train.checkpoint_every == 0) {
      SaveCheckpoint(out_dir / ("step_" + std::to_string(step_) + ".ckpt"));
    }
  }
  SaveCheckpoint(out_dir / "final.ckpt");
}

void AcousticTrainer::SaveCheckpoint(const fs::path& path) const {
  nn::Checkpoint ckpt;
  ckpt.meta["kind"] = "acoustic";
  ckpt.meta["version"] = kCheckpointVersion;
  ckpt.meta["config"] = config_;
  ckpt.meta["layer_spec"] = layer_tag_;
  ckpt.meta["variance_stats"] = model_->stats();
  ckpt.meta["step"] = step_;
  ckpt.meta["rng"] = nn::SerializeRng(rng_);
  nn::StoreModule(ckpt, "model", *model_);
  nn::StoreAdam(ckpt, "optim", *opt_);
  nn::WriteCheckpoint(path, ckpt);
}

void AcousticTrainer::LoadCheckpoint(const fs::path& path) {
  const nn::Checkpoint ckpt = nn::ReadCheckpoint(path);
  try {
    CheckKindAndVersion(ckpt, path);
    const std::string tag = ckpt.meta.at("layer_spec");
    if (tag != layer_tag_) {
      throw ConfigError("checkpoint " + path.string() + " was trained on '" + tag +
                        "' targets, this run uses '" + layer_tag_ + "'");
    }
    const nlohmann::json mine = config_.model;
    if (ckpt.meta.at("config").at("model") != mine) {
      throw ConfigError("checkpoint " + path.string() + " has a different model config");
    }
    nn::RestoreModule(ckpt, "model", *model_);
    nn::RestoreAdam(ckpt, "optim", *opt_);
    model_->set_stats(ckpt.meta.at("variance_stats").get<VarianceStats>());
    step_ = ckpt.meta.at("step").get<int64_t>();
    rng_ = nn::DeserializeRng(ckpt.meta.at("rng").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + path.string() + " metadata: " + e.what());
  }
  resumed_ = true;
}

LoadedAcousticModel LoadAcousticModel(const fs::path& path) {
  const nn::Checkpoint ckpt = nn::ReadCheckpoint(path);
  LoadedAcousticModel out;
  try {
    CheckKindAndVersion(ckpt, path);
    auto mc = ckpt.meta.at("config").at("model").get<AcousticModelConfig>();
    nn::Rng rng(0);
    out.model = std::make_unique<AcousticModel>(mc, rng);
    out.model->set_stats(ckpt.meta.at("variance_stats").get<VarianceStats>());
    out.layer_tag = ckpt.meta.at("layer_spec").get<std::string>();
    out.step = ckpt.meta.at("step").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + path.string() + " metadata: " + e.what());
  }
  nn::RestoreModule(ckpt, "model", *out.model);
  return out;
}

}  // namespace r2w::acoustic
