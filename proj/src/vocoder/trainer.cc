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

#include "r2w/vocoder/trainer.h"

#include <algorithm>
#include <cmath>

#include "r2w/nn/checkpoint.h"
#include "r2w/nn/ops.h"
#include "r2w/util/csv_log.h"
#include "r2w/util/error.h"

namespace r2w::vocoder {

namespace fs = std::filesystem;
using nn::Tensor;

namespace {

constexpr int kCheckpointVersion = 1;

nn::AdamOptions AdamFor(const VocoderTrainConfig& t) {
  return {.lr = t.learning_rate, .beta1 = t.beta1, .beta2 = t.beta2, .eps = 1e-8};
}

void CheckKindAndVersion(const nn::Checkpoint& ckpt, const fs::path& path) {
  if (ckpt.meta.at("kind") != "vocoder") {
    throw ConfigError(path.string() + " is not a vocoder checkpoint");
  }
  const int version = ckpt.meta.at("version").get<int>();
  if (version != kCheckpointVersion) {
    throw DataError(path.string() + ": vocoder checkpoint version " + std::to_string(version) +
                    ", expected " + std::to_string(kCheckpointVersion));
  }
}

}  // namespace

TrainingPair MakeTrainingPair(std::string id, rep::RepresentationSequence features,
                              signal::Waveform audio) {
  if (audio.sample_rate != signal::kPipelineSampleRate) {
    throw std::invalid_argument("training audio must be at 24 kHz");
  }
  const size_t want = static_cast<size_t>(features.n_frames) * features.hop_samples();
  audio.samples.resize(want, 0.0);
  return {std::move(id), std::move(features), std::move(audio)};
}

VocoderTrainer::VocoderTrainer(const VocoderConfig& config, std::string layer_tag)
    : config_(config),
      layer_tag_(std::move(layer_tag)),
      rng_(config.train.seed),
      mel_(signal::SpectralConfig::RepAligned()) {
  generator_ = std::make_unique<Generator>(config_.generator, rng_);
  discriminator_ = std::make_unique<Discriminator>(config_.discriminator, rng_);
  opt_g_ = std::make_unique<nn::Adam>(generator_->Parameters(), AdamFor(config_.train));
  opt_d_ = std::make_unique<nn::Adam>(discriminator_->Parameters(), AdamFor(config_.train));
}

VocoderTrainer::Crops VocoderTrainer::SampleCrops(
    const std::vector<const TrainingPair*>& batch) {
  if (batch.empty()) throw std::invalid_argument("VocoderTrainer: empty batch");
  const int dim = config_.generator.input_dim;
  const int hop = config_.generator.hop();
  int crop = config_.train.crop_frames;
  for (const auto* p : batch) {
    if (p->features.dim != dim) {
      throw ConfigError("training features for " + p->id + " have dim " +
                        std::to_string(p->features.dim) + ", generator expects " +
                        std::to_string(dim));
    }
    if (p->audio.size() != static_cast<size_t>(p->features.n_frames) * hop) {
      throw DataError("training pair " + p->id + " is not aligned to the frame grid");
    }
    crop = std::min(crop, p->features.n_frames);
  }
  if (crop < 1) throw DataError("training utterance without frames");
  const auto b = static_cast<int64_t>(batch.size());
  const int64_t samples = static_cast<int64_t>(crop) * hop;
  std::vector<double> x(static_cast<size_t>(b * dim * crop));
  std::vector<double> y(static_cast<size_t>(b * samples));
  for (int64_t i = 0; i < b; ++i) {
    const auto& pair = *batch[static_cast<size_t>(i)];
    const int range = pair.features.n_frames - crop + 1;
    const int start = static_cast<int>(rng_() % static_cast<uint64_t>(range));
    for (int d = 0; d < dim; ++d) {
      for (int t = 0; t < crop; ++t) {
        x[static_cast<size_t>((i * dim + d) * crop + t)] = pair.features.at(start + t, d);
      }
    }
    std::copy_n(pair.audio.samples.begin() + static_cast<int64_t>(start) * hop, samples,
                y.begin() + i * samples);
  }
  Crops crops;
  crops.input = Tensor::FromVector({b, dim, crop}, std::move(x));
  crops.real = Tensor::FromVector({b, 1, samples}, std::move(y));
  nn::NoGradGuard no_grad;
  crops.real_mel = mel_.Forward(crops.real);
  return crops;
}

double VocoderTrainer::UpdateDiscriminator(Crops& crops) {
  if (!crops.fake.defined()) crops.fake = generator_->Forward(crops.input);
  opt_d_->ZeroGrad();
  DiscriminatorOutput d_real = discriminator_->Forward(crops.real);
  DiscriminatorOutput d_fake = discriminator_->Forward(crops.fake.Detach());
  Tensor adv_d = AdvLossD(d_real.scores, d_fake.scores);
  const double value = adv_d.item();
  if (!std::isfinite(value)) {
    throw NumericError("non-finite discriminator loss at step " + std::to_string(step_ + 1));
  }
  adv_d.Backward();
  opt_d_->Step();
  return value;
}

LossBreakdown VocoderTrainer::UpdateGenerator(Crops& crops) {
  if (!crops.fake.defined()) crops.fake = generator_->Forward(crops.input);
  discriminator_->SetRequiresGrad(false);
  LossBreakdown out;
  try {
    DiscriminatorOutput d_real;
    {
      nn::NoGradGuard no_grad;
      d_real = discriminator_->Forward(crops.real);
    }
    DiscriminatorOutput d_fake = discriminator_->Forward(crops.fake);
    Tensor adv_g = AdvLossG(d_fake.scores);
    Tensor fm = FeatureMatchingLoss(d_real.features, d_fake.features);
    Tensor mel = nn::L1Loss(crops.real_mel, mel_.Forward(crops.fake));
    Tensor total = TotalGeneratorLoss(adv_g, fm, mel, config_.train.weights);
    const double adv = adv_g.item(), f = fm.item(), m = mel.item();
    if (!std::isfinite(adv) || !std::isfinite(f) || !std::isfinite(m) ||
        !std::isfinite(total.item())) {
      throw NumericError("non-finite generator loss at step " + std::to_string(step_ + 1) +
                         " (adv_g " + std::to_string(adv) + ", fm " + std::to_string(f) +
                         ", mel " + std::to_string(m) + ")");
    }
    out = TotalGeneratorLoss(adv, f, m, config_.train.weights);
    out.total_g = total.item();
    opt_g_->ZeroGrad();
    total.Backward();
    opt_g_->Step();
  } catch (...) {
    discriminator_->SetRequiresGrad(true);
    throw;
  }
  discriminator_->SetRequiresGrad(true);
  return out;
}

LossBreakdown VocoderTrainer::Step(const std::vector<const TrainingPair*>& batch) {
  Crops crops = SampleCrops(batch);
  opt_g_->set_lr(nn::ExponentialLr(config_.train.learning_rate, config_.train.lr_decay,
                                   epoch_of_step()));
  opt_d_->set_lr(opt_g_->lr());
  const double adv_d = UpdateDiscriminator(crops);
  LossBreakdown out = UpdateGenerator(crops);
  out.adv_d = adv_d;
  ++step_;
  return out;
}

int64_t VocoderTrainer::epoch_of_step() const {
  const int64_t per_epoch = std::max<int64_t>(
      1, (dataset_size_ + config_.train.batch_size - 1) / config_.train.batch_size);
  return step_ / per_epoch;
}

void VocoderTrainer::Train(const std::vector<TrainingPair>& data, const fs::path& out_dir) {
  if (data.empty()) throw DataError("vocoder training set is empty");
  dataset_size_ = static_cast<int64_t>(data.size());
  fs::create_directories(out_dir);
  CsvLog log(out_dir / "loss_log.csv", {"adv_d", "adv_g", "fm", "mel", "total_g"},
             resumed_ ? step_ : -1);
  std::vector<const TrainingPair*> batch;
  while (step_ < config_.train.steps) {
    batch.clear();
    for (int i = 0; i < config_.train.batch_size; ++i) {
      batch.push_back(&data[rng_() % data.size()]);
    }
    LossBreakdown l;
    try {
      l = Step(batch);
    } catch (const NumericError& e) {
      const fs::path snap = out_dir / ("diagnostic_step" + std::to_string(step_ + 1) + ".ckpt");
      SaveCheckpoint(snap);
      throw NumericError(std::string(e.what()) + "; state saved to " + snap.string());
    }
    log.Append(step_, {l.adv_d, l.adv_g, l.fm, l.mel, l.total_g});
    if (config_.train.checkpoint_every > 0 && step_ % config_.train.checkpoint_every == 0) {
      SaveCheckpoint(out_dir / ("step_" + std::to_string(step_) + ".ckpt"));
    }
  }
  SaveCheckpoint(out_dir / "final.ckpt");
}

void VocoderTrainer::SaveCheckpoint(const fs::path& path) const {
  nn::Checkpoint ckpt;
  ckpt.meta["kind"] = "vocoder";
  ckpt.meta["version"] = kCheckpointVersion;
  ckpt.meta["config"] = config_;
  ckpt.meta["layer_spec"] = layer_tag_;
  ckpt.meta["step"] = step_;
  ckpt.meta["dataset_size"] = dataset_size_;
  ckpt.meta["rng"] = nn::SerializeRng(rng_);
  nn::StoreModule(ckpt, "generator", *generator_);
  nn::StoreModule(ckpt, "discriminator", *discriminator_);
  nn::StoreAdam(ckpt, "optim_g", *opt_g_);
  nn::StoreAdam(ckpt, "optim_d", *opt_d_);
  nn::WriteCheckpoint(path, ckpt);
}

void VocoderTrainer::LoadCheckpoint(const fs::path& path) {
  const nn::Checkpoint ckpt = nn::ReadCheckpoint(path);
  try {
    CheckKindAndVersion(ckpt, path);
    const std::string tag = ckpt.meta.at("layer_spec");
    if (tag != layer_tag_) {
      throw ConfigError("checkpoint " + path.string() + " was trained on '" + tag +
                        "' features, this run uses '" + layer_tag_ + "'");
    }
    const nlohmann::json mine = config_.generator;
    if (ckpt.meta.at("config").at("generator") != mine) {
      throw ConfigError("checkpoint " + path.string() + " has a different generator config");
    }
    nn::RestoreModule(ckpt, "generator", *generator_);
    nn::RestoreModule(ckpt, "discriminator", *discriminator_);
    nn::RestoreAdam(ckpt, "optim_g", *opt_g_);
    nn::RestoreAdam(ckpt, "optim_d", *opt_d_);
    step_ = ckpt.meta.at("step").get<int64_t>();
    dataset_size_ = ckpt.meta.at("dataset_size").get<int64_t>();
    rng_ = nn::DeserializeRng(ckpt.meta.at("rng").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + path.string() + " metadata: " + e.what());
  }
  resumed_ = true;
}

LoadedGenerator LoadGenerator(const fs::path& path) {
  const nn::Checkpoint ckpt = nn::ReadCheckpoint(path);
  LoadedGenerator out;
  try {
    CheckKindAndVersion(ckpt, path);
    GeneratorConfig gc = ckpt.meta.at("config").at("generator").get<GeneratorConfig>();
    nn::Rng rng(0);
    out.generator = std::make_unique<Generator>(gc, rng);
    out.layer_tag = ckpt.meta.at("layer_spec").get<std::string>();
    out.step = ckpt.meta.at("step").get<int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + path.string() + " metadata: " + e.what());
  }
  nn::RestoreModule(ckpt, "generator", *out.generator);
  return out;
}

}  // namespace r2w::vocoder
