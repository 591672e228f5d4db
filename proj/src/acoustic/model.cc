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

#include "r2w/acoustic/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "r2w/nn/ops.h"
#include "r2w/util/error.h"
#include "r2w/util/json_util.h"

namespace r2w::acoustic {

using nn::Tensor;

namespace {

// [t, d] <-> [1, d, t] for the convolution ops.
Tensor ToChannels(const Tensor& x) {
  return nn::Reshape(nn::Transpose(x), {1, x.dim(1), x.dim(0)});
}

Tensor FromChannels(const Tensor& y) {
  return nn::Transpose(nn::Reshape(y, {y.dim(1), y.dim(2)}));
}

nn::Conv1dOptions SamePadding(int kernel) {
  nn::Conv1dOptions o;
  o.padding = kernel / 2;
  return o;
}

}  // namespace

Tensor LengthRegulate(const Tensor& hidden, const std::vector<int>& durations) {
  if (hidden.rank() != 2 || static_cast<size_t>(hidden.dim(0)) != durations.size()) {
    throw std::invalid_argument("LengthRegulate: need one duration per hidden row");
  }
  std::vector<int64_t> index;
  for (size_t i = 0; i < durations.size(); ++i) {
    if (durations[i] < 0) throw std::invalid_argument("LengthRegulate: negative duration");
    index.insert(index.end(), static_cast<size_t>(durations[i]), static_cast<int64_t>(i));
  }
  return nn::IndexRows(hidden, index);
}

Tensor SinusoidalPositions(int64_t length, int64_t dim) {
  std::vector<double> v(static_cast<size_t>(length * dim));
  for (int64_t pos = 0; pos < length; ++pos) {
    for (int64_t i = 0; i < dim; ++i) {
      const double rate =
          std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / static_cast<double>(dim));
      const double angle = static_cast<double>(pos) * rate;
      v[static_cast<size_t>(pos * dim + i)] = i % 2 == 0 ? std::sin(angle) : std::cos(angle);
    }
  }
  return Tensor::FromVector({length, dim}, std::move(v));
}

int DurationFromLog(double log_duration) {
  if (!std::isfinite(log_duration)) {
    throw NumericError("non-finite predicted log-duration");
  }
  const double d = std::round(std::exp(std::min(log_duration, 20.0)));
  return std::max(1, static_cast<int>(d));
}

double LogDurationTarget(int duration) { return std::log(std::max(duration, 1)); }

FftBlock::FftBlock(int hidden, int heads, int filter, int kernel, nn::Rng& rng)
    : heads_(heads),
      query_(hidden, hidden, rng),
      key_(hidden, hidden, rng),
      value_(hidden, hidden, rng),
      out_(hidden, hidden, rng),
      attn_norm_(hidden),
      ffn_in_(hidden, filter, kernel, SamePadding(kernel), rng),
      ffn_out_(filter, hidden, 1, {}, rng),
      ffn_norm_(hidden) {
  RegisterModule("query", &query_);
  RegisterModule("key", &key_);
  RegisterModule("value", &value_);
  RegisterModule("out", &out_);
  RegisterModule("attn_norm", &attn_norm_);
  RegisterModule("ffn_in", &ffn_in_);
  RegisterModule("ffn_out", &ffn_out_);
  RegisterModule("ffn_norm", &ffn_norm_);
}

Tensor FftBlock::Forward(const Tensor& x) const {
  const int64_t hidden = x.dim(1);
  const int64_t head_dim = hidden / heads_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  const Tensor q = query_.Forward(x), k = key_.Forward(x), v = value_.Forward(x);
  std::vector<Tensor> heads;
  for (int h = 0; h < heads_; ++h) {
    const Tensor qh = nn::SliceCols(q, h * head_dim, head_dim);
    const Tensor kh = nn::SliceCols(k, h * head_dim, head_dim);
    const Tensor vh = nn::SliceCols(v, h * head_dim, head_dim);
    const Tensor weights =
        nn::SoftmaxRows(nn::MulScalar(nn::Matmul(qh, nn::Transpose(kh)), scale));
    heads.push_back(nn::Matmul(weights, vh));
  }
  const Tensor attn = heads.size() == 1 ? heads[0] : nn::ConcatCols(heads);
  const Tensor y = attn_norm_.Forward(nn::Add(x, out_.Forward(attn)));
  const Tensor f = ffn_out_.Forward(nn::Relu(ffn_in_.Forward(ToChannels(y))));
  return ffn_norm_.Forward(nn::Add(y, FromChannels(f)));
}

VariancePredictor::VariancePredictor(int hidden, int filter, int kernel, nn::Rng& rng)
    : conv1_(hidden, filter, kernel, SamePadding(kernel), rng),
      conv2_(filter, filter, kernel, SamePadding(kernel), rng),
      norm1_(filter),
      norm2_(filter),
      out_(filter, 1, rng) {
  RegisterModule("conv1", &conv1_);
  RegisterModule("norm1", &norm1_);
  RegisterModule("conv2", &conv2_);
  RegisterModule("norm2", &norm2_);
  RegisterModule("out", &out_);
}

Tensor VariancePredictor::Forward(const Tensor& x) const {
  Tensor h = norm1_.Forward(FromChannels(nn::Relu(conv1_.Forward(ToChannels(x)))));
  h = norm2_.Forward(FromChannels(nn::Relu(conv2_.Forward(ToChannels(h)))));
  const Tensor y = out_.Forward(h);
  return nn::Reshape(y, {y.dim(0)});
}

namespace {

void MeanStd(const std::vector<double>& v, double& mean, double& stddev) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  stddev = std::sqrt(var / static_cast<double>(v.size()));
  if (!(stddev > 1e-12)) stddev = 1.0;
}

}  // namespace

VarianceStats VarianceStats::Fit(const std::vector<PhonemeSequence>& data) {
  std::vector<double> pitch, energy;
  for (const auto& s : data) {
    pitch.insert(pitch.end(), s.pitch.begin(), s.pitch.end());
    energy.insert(energy.end(), s.energy.begin(), s.energy.end());
  }
  if (pitch.empty() || energy.empty()) {
    throw DataError("cannot fit variance statistics without pitch and energy targets");
  }
  VarianceStats st;
  MeanStd(pitch, st.pitch_mean, st.pitch_std);
  MeanStd(energy, st.energy_mean, st.energy_std);
  auto range = [](const std::vector<double>& v, double mean, double sd, double& lo, double& hi) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    lo = (*mn - mean) / sd;
    hi = (*mx - mean) / sd;
    if (hi - lo < 1e-9) {
      lo -= 1.0;
      hi += 1.0;
    }
  };
  range(pitch, st.pitch_mean, st.pitch_std, st.pitch_min, st.pitch_max);
  range(energy, st.energy_mean, st.energy_std, st.energy_min, st.energy_max);
  return st;
}

void to_json(nlohmann::json& j, const VarianceStats& s) {
  j = nlohmann::json{{"pitch_mean", s.pitch_mean},   {"pitch_std", s.pitch_std},
                     {"energy_mean", s.energy_mean}, {"energy_std", s.energy_std},
                     {"pitch_min", s.pitch_min},     {"pitch_max", s.pitch_max},
                     {"energy_min", s.energy_min},   {"energy_max", s.energy_max}};
}

void from_json(const nlohmann::json& j, VarianceStats& s) {
  const std::string where = "variance_stats";
  CheckKeys(j, where, {"pitch_mean", "pitch_std", "energy_mean", "energy_std", "pitch_min",
                       "pitch_max", "energy_min", "energy_max"});
  ReadOptional(j, "pitch_mean", s.pitch_mean, where);
  ReadOptional(j, "pitch_std", s.pitch_std, where);
  ReadOptional(j, "energy_mean", s.energy_mean, where);
  ReadOptional(j, "energy_std", s.energy_std, where);
  ReadOptional(j, "pitch_min", s.pitch_min, where);
  ReadOptional(j, "pitch_max", s.pitch_max, where);
  ReadOptional(j, "energy_min", s.energy_min, where);
  ReadOptional(j, "energy_max", s.energy_max, where);
}

int Bucketize(double value, double lo, double hi, int bins) {
  if (bins < 2 || !(hi > lo)) throw std::invalid_argument("Bucketize: bad bin layout");
  const int boundaries = bins - 1;
  int count = 0;
  for (int i = 0; i < boundaries; ++i) {
    const double b = boundaries == 1 ? lo : lo + (hi - lo) * i / (boundaries - 1);
    if (b < value) ++count;
  }
  return count;
}

AcousticModel::AcousticModel(const AcousticModelConfig& config, nn::Rng& rng)
    : config_((config.Validate(), config)),
      phoneme_embedding_(config.inventory_size, config.hidden, rng),
      duration_(config.hidden, config.predictor_filter, config.predictor_kernel, rng),
      pitch_(config.hidden, config.predictor_filter, config.predictor_kernel, rng),
      energy_(config.hidden, config.predictor_filter, config.predictor_kernel, rng),
      pitch_embedding_(config.variance_bins, config.hidden, rng),
      energy_embedding_(config.variance_bins, config.hidden, rng),
      projection_(config.hidden, config.output_dim, rng) {
  RegisterModule("phoneme_embedding", &phoneme_embedding_);
  for (int i = 0; i < config_.encoder_layers; ++i) {
    encoder_.push_back(std::make_unique<FftBlock>(config_.hidden, config_.heads,
                                                  config_.ffn_filter, config_.ffn_kernel, rng));
    RegisterModule("encoder." + std::to_string(i), encoder_.back().get());
  }
  RegisterModule("duration_predictor", &duration_);
  RegisterModule("pitch_predictor", &pitch_);
  RegisterModule("energy_predictor", &energy_);
  RegisterModule("pitch_embedding", &pitch_embedding_);
  RegisterModule("energy_embedding", &energy_embedding_);
  for (int i = 0; i < config_.decoder_layers; ++i) {
    decoder_.push_back(std::make_unique<FftBlock>(config_.hidden, config_.heads,
                                                  config_.ffn_filter, config_.ffn_kernel, rng));
    RegisterModule("decoder." + std::to_string(i), decoder_.back().get());
  }
  RegisterModule("projection", &projection_);
}

Tensor AcousticModel::Encode(const std::vector<int64_t>& ids) const {
  if (ids.empty()) throw DataError("empty phoneme sequence");
  for (int64_t id : ids) {
    if (id < 0 || id >= config_.inventory_size) {
      throw DataError("unknown phoneme id " + std::to_string(id));
    }
  }
  const auto n = static_cast<int64_t>(ids.size());
  Tensor h = nn::Add(phoneme_embedding_.Forward(ids), SinusoidalPositions(n, config_.hidden));
  for (const auto& block : encoder_) h = block->Forward(h);
  return h;
}

AcousticOutputs AcousticModel::Forward(const PhonemeSequence& seq) const {
  ValidatePhonemes(seq, config_.inventory_size);
  AcousticOutputs out;
  Tensor h = Encode(seq.ids);
  const size_t n = seq.size();

  out.log_duration = duration_.Forward(h);
  out.pitch = pitch_.Forward(h);
  std::vector<int64_t> pitch_bins(n);
  for (size_t i = 0; i < n; ++i) {
    const double v = seq.pitch.empty()
                         ? out.pitch.values()[i]
                         : (seq.pitch[i] - stats_.pitch_mean) / stats_.pitch_std;
    pitch_bins[i] = Bucketize(v, stats_.pitch_min, stats_.pitch_max, config_.variance_bins);
  }
  h = nn::Add(h, pitch_embedding_.Forward(pitch_bins));

  out.energy = energy_.Forward(h);
  std::vector<int64_t> energy_bins(n);
  for (size_t i = 0; i < n; ++i) {
    const double v = seq.energy.empty()
                         ? out.energy.values()[i]
                         : (seq.energy[i] - stats_.energy_mean) / stats_.energy_std;
    energy_bins[i] = Bucketize(v, stats_.energy_min, stats_.energy_max, config_.variance_bins);
  }
  h = nn::Add(h, energy_embedding_.Forward(energy_bins));

  if (seq.durations.empty()) {
    out.durations.resize(n);
    for (size_t i = 0; i < n; ++i) out.durations[i] = DurationFromLog(out.log_duration.values()[i]);
  } else {
    out.durations = seq.durations;
  }
  const Tensor expanded = LengthRegulate(h, out.durations);
  out.representation = expanded.dim(0) == 0
                           ? Tensor::Zeros({0, config_.output_dim})
                           : Decode(expanded);
  return out;
}

Tensor AcousticModel::Decode(const Tensor& expanded) const {
  if (expanded.rank() != 2 || expanded.dim(0) == 0 || expanded.dim(1) != config_.hidden) {
    throw std::invalid_argument("Decode: expected a nonempty [frames, hidden] input");
  }
  Tensor h = expanded;
  if (!decoder_.empty()) {
    h = nn::Add(h, SinusoidalPositions(h.dim(0), config_.hidden));
    for (const auto& block : decoder_) h = block->Forward(h);
  }
  return projection_.Forward(h);
}

rep::RepresentationSequence AcousticModel::Synthesize(const PhonemeSequence& seq,
                                                      std::vector<int>* durations_used) const {
  nn::NoGradGuard no_grad;
  PhonemeSequence input;
  input.ids = seq.ids;
  input.durations = seq.durations;
  AcousticOutputs out = Forward(input);
  if (out.representation.dim(0) == 0) {
    throw DataError("durations expand to zero frames");
  }
  rep::RepresentationSequence r;
  r.n_frames = static_cast<int>(out.representation.dim(0));
  r.dim = config_.output_dim;
  r.frames.reserve(out.representation.values().size());
  for (double v : out.representation.values()) {
    if (!std::isfinite(v)) throw NumericError("acoustic model produced non-finite output");
    r.frames.push_back(static_cast<float>(v));
  }
  if (durations_used != nullptr) *durations_used = out.durations;
  return r;
}

}  // namespace r2w::acoustic
