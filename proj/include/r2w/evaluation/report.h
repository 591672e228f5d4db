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

#ifndef R2W_EVALUATION_REPORT_H_
#define R2W_EVALUATION_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "r2w/evaluation/metrics.h"
#include "r2w/signal/snr.h"
#include "r2w/signal/waveform.h"

namespace r2w::eval {

enum class Metric { kSnr, kSpeakerSimilarity, kMosLqo };

// "snr_db", "speaker_similarity", "mos_lqo".
std::string MetricName(Metric metric);
// Inverse of MetricName; ConfigError on an unknown name.
Metric ParseMetric(const std::string& name);

// One per-utterance result. `value` is empty when the metric degenerated
// for this utterance; `note` then says why ("infinite", "unmeasurable").
struct UtteranceValue {
  std::string utterance_id;
  std::optional<double> value;
  std::string note;
};

struct ReportRow {
  std::string condition;
  Metric metric = Metric::kSnr;
  std::vector<UtteranceValue> values;
  // Mean over utterances that have a value; NaN when there are none.
  double mean = 0.0;
  int count = 0;
  int excluded = 0;
};

struct EvalReport {
  std::vector<std::string> conditions;
  std::vector<Metric> metrics;
  std::vector<ReportRow> rows;  // condition-major, then metric order

  const ReportRow& Row(const std::string& condition, Metric metric) const;
};

struct EvalUtterance {
  std::string id;
  signal::Waveform audio;
  // Needed by speaker_similarity and mos_lqo.
  std::optional<signal::Waveform> reference;
};

struct EvalCondition {
  std::string label;
  std::vector<EvalUtterance> utterances;
};

struct EvalOptions {
  std::vector<Metric> metrics = {Metric::kSnr, Metric::kSpeakerSimilarity};
  const SpeakerEmbedder* embedder = nullptr;
  const QualityTool* quality_tool = nullptr;
  signal::VadSnrConfig snr;
};

// Builds a row from per-utterance values.
ReportRow MakeRow(std::string condition, Metric metric, std::vector<UtteranceValue> values);

// Evaluates every condition under every requested metric. ConfigError for
// duplicate or empty condition labels, duplicate utterance ids within a
// condition, or a metric whose embedder/tool is missing; DataError for a
// condition with no utterances or a reference-based metric on an
// utterance without a reference.
EvalReport EvaluateCorpus(const std::vector<EvalCondition>& conditions,
                          const EvalOptions& options);

// "condition,metric,utterance_id,value" rows (value "" plus a note column
// for degenerate entries), then a blank line and a summary block
// "condition,metric,mean,count,excluded".
std::string LongCsv(const EvalReport& report);

// One row per condition, one column per metric mean, plus a "mos" column
// that is always "unavailable" (no listening test is run).
std::string WideCsv(const EvalReport& report);

// Writes report_long.csv and report_wide.csv under `dir`.
void WriteReport(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace r2w::eval

#endif  // R2W_EVALUATION_REPORT_H_
