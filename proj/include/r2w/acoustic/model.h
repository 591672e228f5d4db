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

#ifndef R2W_ACOUSTIC_MODEL_H_
#define R2W_ACOUSTIC_MODEL_H_

#include <memory>
#include <vector>

#include "json.hpp"
#include "r2w/acoustic/config.h"
#include "r2w/acoustic/phonemes.h"
#include "r2w/nn/module.h"
#include "r2w/representation/sequence.h"

namespace r2w::acoustic {

// Repeats row i of `hidden` [n, d] durations[i] times, in order. The result
// has sum(durations) rows (possibly zero). invalid_argument on a length
// mismatch or a negative duration.
nn::Tensor LengthRegulate(const nn::Tensor& hidden, const std::vector<int>& durations);

// [length, dim] sinusoidal position table.
nn::Tensor SinusoidalPositions(int64_t length, int64_t dim);

// round(exp(log_duration)) clamped to >= 1.
int DurationFromLog(double log_duration);
// Regression target for a frame count: log(max(d, 1)).
double LogDurationTarget(int duration);

// Self-attention then a convolutional feed-forward layer, each with a
// residual connection and post layer norm. Operates on [t, hidden].
class FftBlock : public nn::Module {
 public:
  FftBlock(int hidden, int heads, int filter, int kernel, nn::Rng& rng);
  nn::Tensor Forward(const nn::Tensor& x) const;

 private:
  int heads_;
  nn::Linear query_, key_, value_, out_;
  nn::LayerNorm attn_norm_;
  nn::Conv1dLayer ffn_in_, ffn_out_;
  nn::LayerNorm ffn_norm_;
};

// Two conv + ReLU + layer-norm stages and a scalar output per position.
class VariancePredictor : public nn::Module {
 public:
  VariancePredictor(int hidden, int filter, int kernel, nn::Rng& rng);
  // [t, hidden] -> [t].
  nn::Tensor Forward(const nn::Tensor& x) const;

  nn::Linear& output() { return out_; }

 private:
  nn::Conv1dLayer conv1_, conv2_;
  nn::LayerNorm norm1_, norm2_;
  nn::Linear out_;
};

// Normalization of pitch (Hz) and energy (RMS) targets, and the range the
// quantization bins cover, in normalized units. Fitted on training data.
struct VarianceStats {
  double pitch_mean = 0.0, pitch_std = 1.0;
  double energy_mean = 0.0, energy_std = 1.0;
  double pitch_min = -3.0, pitch_max = 3.0;
  double energy_min = -3.0, energy_max = 3.0;

  // Mean/std over all phonemes; a zero spread falls back to std 1.
  static VarianceStats Fit(const std::vector<PhonemeSequence>& data);
};
void to_json(nlohmann::json& j, const VarianceStats& s);
void from_json(const nlohmann::json& j, VarianceStats& s);

// Bin index of `value` against `bins - 1` evenly spaced boundaries on
// [lo, hi]: the number of boundaries strictly below the value.
int Bucketize(double value, double lo, double hi, int bins);

struct AcousticOutputs {
  nn::Tensor log_duration;    // [n] predicted
  nn::Tensor pitch;           // [n] predicted, normalized
  nn::Tensor energy;          // [n] predicted, normalized
  nn::Tensor representation;  // [frames, output_dim]
  std::vector<int> durations;  // used for expansion
};

// Phoneme embedding, encoder, variance adaptor, length regulator, decoder
// and output projection.
class AcousticModel : public nn::Module {
 public:
  AcousticModel(const AcousticModelConfig& config, nn::Rng& rng);

  // Positional phoneme embedding through the encoder: [n, hidden].
  nn::Tensor Encode(const std::vector<int64_t>& ids) const;
  // Each variance uses the target when `seq` carries one (teacher forcing)
  // and the prediction otherwise. Durations from predictions follow
  // DurationFromLog.
  AcousticOutputs Forward(const PhonemeSequence& seq) const;
  // Expanded hidden [frames, hidden] -> [frames, output_dim].
  nn::Tensor Decode(const nn::Tensor& expanded) const;

  // Inference without history. Durations in `seq` (if any) override the
  // predictor. NumericError on non-finite output, DataError on bad ids.
  rep::RepresentationSequence Synthesize(const PhonemeSequence& seq,
                                         std::vector<int>* durations_used = nullptr) const;

  const AcousticModelConfig& config() const { return config_; }
  const VarianceStats& stats() const { return stats_; }
  void set_stats(const VarianceStats& stats) { stats_ = stats; }

  VariancePredictor& duration_predictor() { return duration_; }
  nn::Linear& projection() { return projection_; }

 private:
  AcousticModelConfig config_;
  VarianceStats stats_;
  nn::Embedding phoneme_embedding_;
  std::vector<std::unique_ptr<FftBlock>> encoder_;
  VariancePredictor duration_, pitch_, energy_;
  nn::Embedding pitch_embedding_, energy_embedding_;
  std::vector<std::unique_ptr<FftBlock>> decoder_;
  nn::Linear projection_;
};

}  // namespace r2w::acoustic

#endif  // R2W_ACOUSTIC_MODEL_H_
