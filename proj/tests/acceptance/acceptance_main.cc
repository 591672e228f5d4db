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

// Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
// exits nonzero if any fails. `r2w_acceptance 1 3` runs a subset.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "r2w/acoustic/model.h"
#include "r2w/acoustic/phonemes.h"
#include "r2w/acoustic/trainer.h"
#include "r2w/evaluation/figure.h"
#include "r2w/evaluation/metrics.h"
#include "r2w/evaluation/report.h"
#include "r2w/nn/ops.h"
#include "r2w/pipeline/config.h"
#include "r2w/pipeline/prepare.h"
#include "r2w/pipeline/stages.h"
#include "r2w/pipeline/toy_corpus.h"
#include "r2w/representation/backend.h"
#include "r2w/representation/extract.h"
#include "r2w/signal/mixing.h"
#include "r2w/signal/snr.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"
#include "r2w/vocoder/losses.h"
#include "r2w/vocoder/trainer.h"
#include "support/gradcheck.h"
#include "support/synth.h"

namespace r2w::acceptance {
namespace {

namespace fs = std::filesystem;
using nn::Tensor;

// Pinned tolerances and budgets.
constexpr double kLossTol = 1e-6;
constexpr double kMixTolDb = 1e-6;
constexpr double kGradRelTol = 1e-3;
constexpr double kGradMinAbs = 1e-8;
constexpr double kGradPassFraction = 0.99;
constexpr double kVocoderOverfitRatio = 0.20;
constexpr double kAcousticOverfitRatio = 0.25;
constexpr double kEnhanceImprovedFraction = 0.80;
constexpr double kSelfSimilarityTol = 1e-6;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void Note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

fs::path Workdir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "r2w_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Tensor RandomMap(const nn::Shape& shape, nn::Rng& rng, double mean) {
  std::vector<double> v(static_cast<size_t>(nn::NumElements(shape)));
  for (double& x : v) x = nn::NormalDouble(rng, mean, 1.0);
  return Tensor::FromVector(shape, std::move(v));
}

rep::RepresentationSequence RandomRep(int n, int dim, uint64_t seed) {
  nn::Rng rng(seed);
  rep::RepresentationSequence r;
  r.n_frames = n;
  r.dim = dim;
  for (int i = 0; i < n * dim; ++i) {
    r.frames.push_back(static_cast<float>(nn::NormalDouble(rng, 0.0, 1.0)));
  }
  return r;
}

signal::Waveform WithFloor(signal::Waveform wav, uint64_t seed) {
  const auto noise = testing::WhiteNoise(wav.size(), 3e-3, seed, wav.sample_rate);
  for (size_t i = 0; i < wav.size(); ++i) wav.samples[i] += noise.samples[i];
  return wav;
}

// ---------------------------------------------------------------- 1

double OracleAdvD(const std::vector<Tensor>& real, const std::vector<Tensor>& fake) {
  double total = 0.0;
  for (size_t k = 0; k < real.size(); ++k) {
    double r = 0.0, f = 0.0;
    for (double v : real[k].values()) r += (v - 1.0) * (v - 1.0);
    for (double v : fake[k].values()) f += v * v;
    total += r / static_cast<double>(real[k].numel()) + f / static_cast<double>(fake[k].numel());
  }
  return total;
}

double OracleAdvG(const std::vector<Tensor>& fake) {
  double total = 0.0;
  for (const auto& t : fake) {
    double f = 0.0;
    for (double v : t.values()) f += (v - 1.0) * (v - 1.0);
    total += f / static_cast<double>(t.numel());
  }
  return total;
}

double OracleFm(const std::vector<std::vector<Tensor>>& a,
                const std::vector<std::vector<Tensor>>& b) {
  double total = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    for (size_t l = 0; l < a[k].size(); ++l) {
      double s = 0.0;
      for (int64_t i = 0; i < a[k][l].numel(); ++i) {
        s += std::abs(a[k][l].values()[i] - b[k][l].values()[i]);
      }
      total += s / static_cast<double>(a[k][l].numel());
    }
  }
  return total;
}

Outcome LossArithmetic() {
  Outcome o;
  std::vector<Tensor> ones{Tensor::Full({2, 1, 7}, 1.0), Tensor::Full({1, 1, 4}, 1.0)};
  std::vector<Tensor> zeros{Tensor::Full({2, 1, 7}, 0.0), Tensor::Full({1, 1, 4}, 0.0)};
  o.Check(vocoder::AdvLossD(ones, zeros).item() == 0.0, "perfect discriminator loss != 0");
  o.Check(vocoder::AdvLossG(ones).item() == 0.0, "fooled discriminator generator loss != 0");
  const double total = vocoder::TotalGeneratorLoss(0.5, 0.1, 0.2).total_g;
  o.Check(total == 9.7, fmt::format("weighted total {} != 9.7", total));

  nn::Rng rng(2026);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int periods = 1 + trial % 8;
    std::vector<Tensor> real, fake;
    std::vector<std::vector<Tensor>> fr, ff;
    for (int k = 0; k < periods; ++k) {
      const nn::Shape s{1 + trial % 3, 1, 3 + (trial * 7 + k * 5) % 23};
      real.push_back(RandomMap(s, rng, 0.8));
      fake.push_back(RandomMap(s, rng, 0.1));
      fr.emplace_back();
      ff.emplace_back();
      for (int l = 0; l < 1 + (trial + k) % 4; ++l) {
        const nn::Shape f{1, 2 + l, 4 + (trial + l) % 9};
        fr.back().push_back(RandomMap(f, rng, 0.0));
        ff.back().push_back(RandomMap(f, rng, 0.3));
      }
    }
    const double a = nn::UniformDouble(rng, 0, 5), f = nn::UniformDouble(rng, 0, 5),
                 m = nn::UniformDouble(rng, 0, 5);
    worst = std::max(worst, std::abs(vocoder::AdvLossD(real, fake).item() - OracleAdvD(real, fake)));
    worst = std::max(worst, std::abs(vocoder::AdvLossG(fake).item() - OracleAdvG(fake)));
    worst = std::max(worst, std::abs(vocoder::FeatureMatchingLoss(fr, ff).item() - OracleFm(fr, ff)));
    worst = std::max(worst,
                     std::abs(vocoder::TotalGeneratorLoss(a, f, m).total_g - (a + 2.0 * f + 45.0 * m)));
  }
  o.Check(worst <= kLossTol, fmt::format("worst oracle deviation {:.3g}", worst));
  o.Note(fmt::format("100 random cases, worst deviation {:.3g}", worst));
  return o;
}

// ---------------------------------------------------------------- 2

Outcome SnrMixer() {
  Outcome o;
  std::mt19937_64 rng(515);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t len = 200 + rng() % 4000;
    const size_t noise_len = 50 + rng() % 6000;
    const auto clean =
        testing::WhiteNoise(len, 0.01 + static_cast<double>(rng() % 1000) / 1000.0, rng());
    const auto noise =
        testing::WhiteNoise(noise_len, 0.01 + static_cast<double>(rng() % 1000) / 1000.0, rng());
    const double target = -10.0 + 30.0 * static_cast<double>(rng() % 100001) / 100000.0;
    const auto mix = signal::MixAtSnrDetailed(clean, noise, target, rng());
    // Re-measure from the mixture: noise = mixture - clean.
    double ps = 0.0, pn = 0.0;
    for (size_t i = 0; i < len; ++i) {
      const double n = mix.mixture.samples[i] - clean.samples[i];
      ps += clean.samples[i] * clean.samples[i];
      pn += n * n;
    }
    worst = std::max(worst, std::abs(10.0 * std::log10(ps / pn) - target));
  }
  o.Check(worst < kMixTolDb, fmt::format("worst deviation {:.3g} dB", worst));
  o.Note(fmt::format("1000 triples, worst deviation {:.3g} dB", worst));
  return o;
}

// ---------------------------------------------------------------- 3

Outcome ShapeLaws() {
  Outcome o;
  nn::Rng rng(3);
  vocoder::Generator g(vocoder::GeneratorConfig::Toy(768), rng);
  for (int n : {1, 7, 50}) {
    const auto wav = g.Generate(RandomRep(n, 768, static_cast<uint64_t>(n)));
    o.Check(wav.size() == static_cast<size_t>(480 * n), fmt::format("generator n={}", n));
  }

  std::mt19937_64 fuzz(31);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(fuzz() % 20);
    const int d = 1 + static_cast<int>(fuzz() % 4);
    std::vector<double> v(static_cast<size_t>(n * d));
    for (auto& x : v) x = static_cast<double>(fuzz() % 1000);
    std::vector<int> dur(static_cast<size_t>(n));
    for (auto& x : dur) x = static_cast<int>(fuzz() % 8);
    const Tensor y = acoustic::LengthRegulate(Tensor::FromVector({n, d}, v), dur);
    bad += y.dim(0) == std::accumulate(dur.begin(), dur.end(), 0) ? 0 : 1;
  }
  o.Check(bad == 0, fmt::format("{} length-regulator violations", bad));

  const fs::path dir = Workdir("shape");
  acoustic::AcousticConfig ac = acoustic::AcousticConfig::Toy(768);
  ac.model.inventory_size = acoustic::InventorySize();
  acoustic::AcousticTrainer(ac, "layer12").SaveCheckpoint(dir / "acoustic.ckpt");
  vocoder::VocoderTrainer(vocoder::VocoderConfig::Toy(768), "layer12")
      .SaveCheckpoint(dir / "vocoder.ckpt");
  const pipeline::Synthesizer synth(dir / "acoustic.ckpt", dir / "vocoder.ckpt");
  const auto fixed = synth.Synthesize("HH AH L", {2, 1, 3});
  o.Check(fixed.size() == 2880, fmt::format("synthesize [2,1,3] gave {} samples", fixed.size()));
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int64_t> ids;
    for (int i = 0; i < 2 + trial; ++i) ids.push_back(static_cast<int64_t>(fuzz() % 41));
    std::vector<int> used;
    const auto wav = synth.Synthesize(ids, {}, &used);
    const int frames = std::accumulate(used.begin(), used.end(), 0);
    o.Check(wav.size() == static_cast<size_t>(frames) * 480, "predicted-duration synthesis");
  }
  o.Note("generator n in {1,7,50}, 1000 regulator vectors, 6 syntheses");
  return o;
}

// ---------------------------------------------------------------- 4

Outcome GradientChecks() {
  Outcome o;
  {
    nn::Rng rng(10);
    const int dim = 8;
    vocoder::Generator g(vocoder::GeneratorConfig::Tiny(dim), rng);
    vocoder::Discriminator d(vocoder::DiscriminatorConfig::Tiny(), rng);
    d.SetRequiresGrad(false);
    for (auto& p : g.Parameters()) {
      for (double& v : p.mutable_values()) v = nn::NormalDouble(rng, 0.0, 0.3);
    }
    vocoder::MelTransform mel(signal::SpectralConfig::RepAligned());
    const Tensor input = vocoder::FramesToInput(RandomRep(4, dim, 2), 0, 4);
    const auto target = testing::Babble(0.08, 3);
    const Tensor real = Tensor::FromVector({1, 1, 1920}, target.samples);
    Tensor real_mel;
    vocoder::DiscriminatorOutput d_real;
    {
      nn::NoGradGuard no_grad;
      real_mel = mel.Forward(real);
      d_real = d.Forward(real);
    }
    auto loss = [&] {
      Tensor fake = g.Forward(input);
      auto d_fake = d.Forward(fake);
      return vocoder::TotalGeneratorLoss(vocoder::AdvLossG(d_fake.scores),
                                         vocoder::FeatureMatchingLoss(d_real.features, d_fake.features),
                                         nn::L1Loss(real_mel, mel.Forward(fake)),
                                         vocoder::LossWeights{});
    };
    const auto r = testing::CheckGradients(loss, g.Parameters(), 1e-5, kGradRelTol, kGradMinAbs);
    o.Check(r.pass_fraction() >= kGradPassFraction && r.checked > 0,
            fmt::format("vocoder {}/{} ({})", r.passed, r.checked, r.worst_where));
    o.Note(fmt::format("vocoder generator {}/{} passed", r.passed, r.checked));
  }
  {
    nn::Rng rng(10);
    acoustic::AcousticModel m(acoustic::AcousticModelConfig::Tiny(5), rng);
    acoustic::PhonemeSequence s;
    s.ids = {0, 3, 5, 2};
    s.durations = {2, 1, 0, 3};
    s.pitch = {110.0, 0.0, 180.0, 140.0};
    s.energy = {0.05, 0.01, 0.2, 0.1};
    const auto st = acoustic::VarianceStats::Fit({s});
    m.set_stats(st);
    const auto targets = acoustic::MakeVarianceTargets(s, st);
    std::vector<double> tv(30);
    for (double& x : tv) x = nn::NormalDouble(rng, 0.0, 1.0);
    const Tensor target = Tensor::FromVector({6, 5}, tv);
    auto loss = [&] {
      auto out = m.Forward(s);
      return acoustic::AcousticLoss(out.representation, target, out.log_duration, out.pitch,
                                    out.energy, targets)
          .total;
    };
    const auto r = testing::CheckGradients(loss, m.Parameters(), 1e-6, kGradRelTol, kGradMinAbs);
    o.Check(r.pass_fraction() >= kGradPassFraction && r.checked > 0,
            fmt::format("acoustic {}/{} ({})", r.passed, r.checked, r.worst_where));
    o.Note(fmt::format("acoustic model {}/{} passed", r.passed, r.checked));
  }
  return o;
}

// ---------------------------------------------------------------- 5

Outcome OverfitSmoke() {
  Outcome o;
  rep::MockBackend backend(1, 12, 768);
  const auto spec = rep::LayerSpec::Single(12);
  {
    const auto wav = WithFloor(testing::Babble(0.2, 7), 8);
    const auto feats = rep::Extract(wav, spec, backend);
    std::vector<vocoder::TrainingPair> data = {vocoder::MakeTrainingPair("u0", feats, wav)};
    vocoder::VocoderTrainer tr(vocoder::VocoderConfig::Toy(768), spec.Tag());
    const auto cfg = signal::SpectralConfig::RepAligned();
    const double before = vocoder::MelLoss(wav, tr.generator().Generate(feats), cfg);
    tr.Train(data, Workdir("overfit_vocoder"));
    const double after = vocoder::MelLoss(wav, tr.generator().Generate(feats), cfg);
    o.Check(after < kVocoderOverfitRatio * before,
            fmt::format("vocoder mel {:.4g} -> {:.4g}", before, after));
    o.Note(fmt::format("vocoder mel {:.4g} -> {:.4g} ({:.1f}%) in {} steps", before, after,
                       100.0 * after / before, tr.step()));
  }
  {
    nn::Rng rng(55);
    std::vector<acoustic::AcousticExample> data;
    for (int u = 0; u < 5; ++u) {
      const auto wav = WithFloor(testing::Babble(0.6 + 0.1 * u, 60 + u), 160 + u);
      std::vector<int64_t> ids;
      for (int i = 0; i < 8; ++i) ids.push_back(static_cast<int64_t>(rng() % 41));
      data.push_back(acoustic::MakeAcousticExample("u" + std::to_string(u), ids, {}, wav,
                                                   rep::Extract(wav, spec, backend)));
    }
    acoustic::AcousticConfig cfg = acoustic::AcousticConfig::Toy(768);
    cfg.model.inventory_size = acoustic::InventorySize();
    acoustic::AcousticTrainer tr(cfg, spec.Tag());
    const double before = tr.Evaluate(data).rep_l1;
    tr.Train(data, Workdir("overfit_acoustic"));
    const double after = tr.Evaluate(data).rep_l1;
    o.Check(after < kAcousticOverfitRatio * before,
            fmt::format("acoustic rep L1 {:.4g} -> {:.4g}", before, after));
    o.Note(fmt::format("acoustic rep L1 {:.4g} -> {:.4g} ({:.1f}%) in {} steps", before, after,
                       100.0 * after / before, tr.step()));
  }
  return o;
}

// ---------------------------------------------------------------- 6

Outcome Determinism() {
  Outcome o;
  rep::MockBackend backend(1, 2, 8);
  const auto spec = rep::LayerSpec::Single(2);
  {
    std::vector<vocoder::TrainingPair> data;
    for (int i = 0; i < 2; ++i) {
      const auto wav = testing::Babble(0.15, 20 + i);
      data.push_back(vocoder::MakeTrainingPair("u" + std::to_string(i),
                                               rep::Extract(wav, spec, backend), wav));
    }
    vocoder::VocoderConfig cfg;
    cfg.generator = vocoder::GeneratorConfig::Tiny(8);
    cfg.discriminator = vocoder::DiscriminatorConfig::Tiny();
    cfg.train.steps = 10;
    cfg.train.checkpoint_every = 5;
    cfg.train.crop_frames = 3;
    const fs::path a = Workdir("det_voc_a"), b = Workdir("det_voc_b"), c = Workdir("det_voc_c");
    vocoder::VocoderTrainer(cfg, spec.Tag()).Train(data, a);
    vocoder::VocoderTrainer(cfg, spec.Tag()).Train(data, b);
    o.Check(ReadFileBytes(a / "loss_log.csv") == ReadFileBytes(b / "loss_log.csv"),
            "vocoder loss logs differ");
    fs::copy_file(a / "loss_log.csv", c / "loss_log.csv");
    vocoder::VocoderTrainer resumed(cfg, spec.Tag());
    resumed.LoadCheckpoint(a / "step_5.ckpt");
    resumed.Train(data, c);
    o.Check(ReadFileBytes(a / "loss_log.csv") == ReadFileBytes(c / "loss_log.csv"),
            "vocoder resume log differs");
    o.Check(ReadFileBytes(a / "final.ckpt") == ReadFileBytes(c / "final.ckpt"),
            "vocoder resume checkpoint differs");
  }
  {
    nn::Rng rng(8);
    std::vector<acoustic::AcousticExample> data;
    for (int u = 0; u < 4; ++u) {
      const auto wav = WithFloor(testing::Babble(0.3, 40 + u), 90 + u);
      std::vector<int64_t> ids;
      for (int i = 0; i < 4; ++i) ids.push_back(static_cast<int64_t>(rng() % 41));
      data.push_back(acoustic::MakeAcousticExample("u" + std::to_string(u), ids, {}, wav,
                                                   rep::Extract(wav, spec, backend)));
    }
    acoustic::AcousticConfig cfg = acoustic::AcousticConfig::Toy(8);
    cfg.model = acoustic::AcousticModelConfig::Tiny(8);
    cfg.model.inventory_size = acoustic::InventorySize();
    cfg.train.steps = 10;
    cfg.train.checkpoint_every = 5;
    cfg.train.warmup_steps = 5;
    const fs::path a = Workdir("det_ac_a"), b = Workdir("det_ac_b"), c = Workdir("det_ac_c");
    acoustic::AcousticTrainer(cfg, spec.Tag()).Train(data, a);
    acoustic::AcousticTrainer(cfg, spec.Tag()).Train(data, b);
    o.Check(ReadFileBytes(a / "loss_log.csv") == ReadFileBytes(b / "loss_log.csv"),
            "acoustic loss logs differ");
    fs::copy_file(a / "loss_log.csv", c / "loss_log.csv");
    acoustic::AcousticTrainer resumed(cfg, spec.Tag());
    resumed.LoadCheckpoint(a / "step_5.ckpt");
    resumed.Train(data, c);
    o.Check(ReadFileBytes(a / "loss_log.csv") == ReadFileBytes(c / "loss_log.csv"),
            "acoustic resume log differs");
    o.Check(ReadFileBytes(a / "final.ckpt") == ReadFileBytes(c / "final.ckpt"),
            "acoustic resume checkpoint differs");

    const fs::path voc = fs::temp_directory_path() / "r2w_acceptance" / "det_voc_a" / "final.ckpt";
    const pipeline::Synthesizer s1(a / "final.ckpt", voc);
    const pipeline::Synthesizer s2(c / "final.ckpt", voc);
    const auto w1 = s1.Synthesize("HH AH L OW W ER L D");
    const auto w2 = s2.Synthesize("HH AH L OW W ER L D");
    o.Check(!w1.empty() && w1.samples == w2.samples, "synthesis not bit-identical");
  }
  o.Note("training logs, resume and synthesis bit-identical");
  return o;
}

// ---------------------------------------------------------------- 7

Outcome EnhancementTrend() {
  Outcome o;
  const fs::path root = Workdir("enhance");
  pipeline::ToyCorpusOptions opt;
  opt.tts_utterances = 20;
  const auto paths = pipeline::GenerateToyCorpus(root / "corpus", opt);
  pipeline::ExperimentConfig config;
  config.output_dir = root / "out";
  config.cache_dir = root / "cache";
  config.tts_manifest = paths.tts_manifest;
  config.vocoder_manifest = paths.vocoder_manifest;
  config.noise_root = paths.noise_root;
  config.enhancer = {{"kind", "spectral_subtraction"}};
  config.backend = {{"kind", "mock"}, {"seed", 1}, {"num_layers", 12}, {"dim", 768}};
  const auto corpus = pipeline::PrepareData(config, {pipeline::FeatureSpace::Parse("layer12")});
  int improved = 0, total = 0;
  for (const auto& row : corpus.rows) {
    ++total;
    const auto& n = row.noisy_estimate;
    const auto& e = row.enhanced_estimate;
    const bool better = (e.kind() == signal::Snr::Kind::kInfinite && n.is_finite()) ||
                        (e.is_finite() && n.is_finite() && e.db() > n.db());
    improved += better ? 1 : 0;
  }
  const double frac = total == 0 ? 0.0 : static_cast<double>(improved) / total;
  o.Check(total == 20 && corpus.failed == 0, fmt::format("{} utterances, {} failed", total, corpus.failed));
  o.Check(frac >= kEnhanceImprovedFraction, fmt::format("only {}/{} improved", improved, total));
  o.Note(fmt::format("{}/{} utterances improved their estimated SNR", improved, total));
  return o;
}

// ---------------------------------------------------------------- 8

Outcome EvaluationHarness() {
  Outcome o;
  const eval::MockSpeakerEmbedder embedder;
  std::vector<eval::EvalCondition> conditions;
  const char* labels[] = {"mel", "layer1", "average"};
  for (int c = 0; c < 3; ++c) {
    eval::EvalCondition cond{labels[c], {}};
    for (int u = 0; u < 4; ++u) {
      const auto ref = WithFloor(testing::Babble(1.0, 100 + u), 200 + u);
      auto test = ref;
      const auto n = testing::WhiteNoise(ref.size(), 0.02 * (c + 1), 300 + 10 * c + u);
      for (size_t i = 0; i < test.size(); ++i) test.samples[i] += n.samples[i];
      cond.utterances.push_back({"utt" + std::to_string(u), test, ref});
    }
    conditions.push_back(std::move(cond));
  }
  eval::EvalOptions options;
  options.metrics = {eval::Metric::kSnr, eval::Metric::kSpeakerSimilarity};
  options.embedder = &embedder;
  const fs::path a = Workdir("eval_a"), b = Workdir("eval_b");
  eval::WriteReport(eval::EvaluateCorpus(conditions, options), a);
  eval::WriteReport(eval::EvaluateCorpus(conditions, options), b);
  for (const char* f : {"report_long.csv", "report_wide.csv"}) {
    o.Check(ReadFileBytes(a / f) == ReadFileBytes(b / f), std::string(f) + " not byte-identical");
  }
  const auto report = eval::EvaluateCorpus(conditions, options);
  o.Check(report.rows.size() == 6, "expected 3 conditions x 2 metrics");

  const auto clip = conditions[0].utterances[0].reference.value();
  const double self = eval::SpeakerSimilarity(clip, clip, embedder);
  o.Check(std::abs(self - 1.0) <= kSelfSimilarityTol, fmt::format("self similarity {}", self));

  std::vector<eval::LabeledAudio> panels;
  for (const auto& c : conditions) panels.push_back({c.label, c.utterances[0].audio});
  eval::WriteSpectrogramFigure(panels, a / "figure.png");
  o.Check(fs::exists(a / "figure.png") && fs::file_size(a / "figure.png") > 0, "figure missing");
  o.Note(fmt::format("self similarity {:.9f}, 3-panel figure {} bytes", self,
                     fs::exists(a / "figure.png") ? fs::file_size(a / "figure.png") : 0));
  return o;
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace r2w::acceptance

int main(int argc, char** argv) {
  using namespace r2w::acceptance;
  const std::vector<Criterion> criteria = {
      {1, "loss arithmetic", 10.0, LossArithmetic},
      {2, "SNR mixer", 30.0, SnrMixer},
      {3, "shape laws", 60.0, ShapeLaws},
      {4, "gradient checks", 300.0, GradientChecks},
      {5, "overfit smoke", 1200.0, OverfitSmoke},
      {6, "determinism", 600.0, Determinism},
      {7, "enhancement trend", 300.0, EnhancementTrend},
      {8, "evaluation harness", 120.0, EvaluationHarness},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      out.Check(false, fmt::format("runtime {:.1f} s over budget {:.0f} s", secs, c.budget_s));
    }
    failed += out.pass ? 0 : 1;
    fmt::print("[{}] {} {}: {} ({:.1f} s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail,
               secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
