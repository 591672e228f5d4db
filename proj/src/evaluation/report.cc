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

#include "r2w/evaluation/report.h"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "r2w/util/csv_log.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::eval {

std::string MetricName(Metric metric) {
  switch (metric) {
    case Metric::kSnr:
      return "snr_db";
    case Metric::kSpeakerSimilarity:
      return "speaker_similarity";
    case Metric::kMosLqo:
      return "mos_lqo";
  }
  throw std::logic_error("unknown metric");
}

Metric ParseMetric(const std::string& name) {
  for (Metric m : {Metric::kSnr, Metric::kSpeakerSimilarity, Metric::kMosLqo}) {
    if (MetricName(m) == name) return m;
  }
  throw ConfigError("unknown metric '" + name + "'");
}

const ReportRow& EvalReport::Row(const std::string& condition, Metric metric) const {
  for (const auto& row : rows) {
    if (row.condition == condition && row.metric == metric) return row;
  }
  throw std::out_of_range("no report row for " + condition + "/" + MetricName(metric));
}

ReportRow MakeRow(std::string condition, Metric metric, std::vector<UtteranceValue> values) {
  ReportRow row;
  row.condition = std::move(condition);
  row.metric = metric;
  row.values = std::move(values);
  double sum = 0.0;
  for (const auto& v : row.values) {
    if (v.value && std::isfinite(*v.value)) {
      sum += *v.value;
      ++row.count;
    } else {
      ++row.excluded;
    }
  }
  row.mean = row.count > 0 ? sum / row.count : std::numeric_limits<double>::quiet_NaN();
  return row;
}

namespace {

UtteranceValue SnrValue(const EvalUtterance& u, const signal::VadSnrConfig& config) {
  UtteranceValue out{u.id, std::nullopt, ""};
  signal::Snr snr = signal::Snr::Unmeasurable();
  try {
    snr = signal::EstimateSnr(u.audio, config);
  } catch (const std::invalid_argument&) {
    out.note = "too_short";
    return out;
  }
  if (snr.is_finite()) out.value = snr.db();
  else out.note = snr.is_infinite() ? "infinite" : "unmeasurable";
  return out;
}

const signal::Waveform& Reference(const EvalUtterance& u, Metric metric) {
  if (!u.reference) {
    throw DataError("utterance " + u.id + " has no reference audio for " + MetricName(metric));
  }
  return *u.reference;
}

}  // namespace

EvalReport EvaluateCorpus(const std::vector<EvalCondition>& conditions,
                          const EvalOptions& options) {
  std::set<std::string> labels;
  for (const auto& c : conditions) {
    if (c.label.empty()) throw ConfigError("empty condition label");
    if (!labels.insert(c.label).second) throw ConfigError("duplicate condition " + c.label);
    if (c.utterances.empty()) throw DataError("condition " + c.label + " has no utterances");
    std::set<std::string> ids;
    for (const auto& u : c.utterances) {
      if (!ids.insert(u.id).second) {
        throw ConfigError("duplicate utterance " + u.id + " in condition " + c.label);
      }
    }
  }
  std::set<Metric> seen;
  for (Metric m : options.metrics) {
    if (!seen.insert(m).second) throw ConfigError("metric listed twice: " + MetricName(m));
    if (m == Metric::kSpeakerSimilarity && options.embedder == nullptr) {
      throw ConfigError("speaker_similarity requires a speaker embedder");
    }
    if (m == Metric::kMosLqo && options.quality_tool == nullptr) {
      throw ConfigError("mos_lqo requires a quality tool");
    }
  }

  EvalReport report;
  report.metrics = options.metrics;
  for (const auto& c : conditions) {
    report.conditions.push_back(c.label);
    for (Metric m : options.metrics) {
      std::vector<UtteranceValue> values;
      values.reserve(c.utterances.size());
      for (const auto& u : c.utterances) {
        switch (m) {
          case Metric::kSnr:
            values.push_back(SnrValue(u, options.snr));
            break;
          case Metric::kSpeakerSimilarity:
            values.push_back(
                {u.id, SpeakerSimilarity(u.audio, Reference(u, m), *options.embedder), ""});
            break;
          case Metric::kMosLqo:
            values.push_back({u.id, options.quality_tool->Score(Reference(u, m), u.audio), ""});
            break;
        }
      }
      report.rows.push_back(MakeRow(c.label, m, std::move(values)));
    }
  }
  return report;
}

namespace {

std::string FormatMean(const ReportRow& row) {
  return row.count > 0 ? FormatDouble(row.mean) : "nan";
}

}  // namespace

std::string LongCsv(const EvalReport& report) {
  std::string out = "condition,metric,utterance_id,value,note\n";
  for (const auto& row : report.rows) {
    for (const auto& v : row.values) {
      out += row.condition + "," + MetricName(row.metric) + "," + v.utterance_id + "," +
             (v.value ? FormatDouble(*v.value) : "") + "," + v.note + "\n";
    }
  }
  out += "\ncondition,metric,mean,count,excluded\n";
  for (const auto& row : report.rows) {
    out += row.condition + "," + MetricName(row.metric) + "," + FormatMean(row) + "," +
           std::to_string(row.count) + "," + std::to_string(row.excluded) + "\n";
  }
  return out;
}

std::string WideCsv(const EvalReport& report) {
  std::string out = "condition";
  for (Metric m : report.metrics) out += "," + MetricName(m);
  out += ",mos\n";
  for (const auto& c : report.conditions) {
    out += c;
    for (Metric m : report.metrics) out += "," + FormatMean(report.Row(c, m));
    out += ",unavailable\n";
  }
  return out;
}

void WriteReport(const EvalReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  AtomicWriteFile(dir / "report_long.csv", LongCsv(report));
  AtomicWriteFile(dir / "report_wide.csv", WideCsv(report));
}

}  // namespace r2w::eval
