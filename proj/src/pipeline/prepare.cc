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

#include "r2w/pipeline/prepare.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "r2w/enhancement/enhancer.h"
#include "r2w/signal/mixing.h"
#include "r2w/signal/wav_io.h"
#include "r2w/util/binary_io.h"
#include "r2w/util/csv_log.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"

namespace r2w::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

NoiseChoice ChooseNoise(uint64_t seed, const std::string& utterance_id, size_t n_clips) {
  if (n_clips == 0) throw DataError("noise corpus is empty");
  const std::string digest = Sha256Hex(std::to_string(seed) + ":" + utterance_id);
  const uint64_t a = std::stoull(digest.substr(0, 16), nullptr, 16);
  const uint64_t b = std::stoull(digest.substr(16, 16), nullptr, 16);
  return {static_cast<size_t>(a % n_clips), b};
}

namespace {

struct NoiseClip {
  std::string name;
  signal::Waveform audio;
  std::string digest;
};

std::vector<NoiseClip> LoadNoise(const fs::path& root) {
  if (root.empty() || !fs::is_directory(root)) {
    throw DataError("noise root " + root.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("noise corpus " + root.string() + " is empty");
  std::vector<NoiseClip> out;
  for (const auto& f : files) {
    NoiseClip clip;
    clip.name = f.filename().string();
    clip.audio = signal::LoadAudio(f, signal::kPipelineSampleRate);
    clip.digest = Sha256Hex(ReadFileBytes(f));
    out.push_back(std::move(clip));
  }
  return out;
}

// Samples exactly as they come back from a float32 WAV, so features of the
// in-memory audio match features of the stored file.
void RoundToFloat(signal::Waveform& wav) {
  for (double& s : wav.samples) s = static_cast<double>(static_cast<float>(s));
}

std::string CsvSafe(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct Job {
  PreparedUtterance prepared;
  PrepareRow row;
};

class Preparer {
 public:
  Preparer(const ExperimentConfig& config, const std::vector<NoiseClip>& noise,
           const enhance::Enhancer& enhancer, const rep::RepresentationBackend* backend,
           const std::vector<FeatureSpace>& spaces, fs::path dir)
      : config_(config),
        noise_(noise),
        enhancer_(enhancer),
        spaces_(spaces),
        dir_(std::move(dir)),
        extractor_(backend, config.CacheRoot()) {}

  Job Run(const UtteranceRecord& record) {
    Job job;
    job.row.id = record.id;
    job.row.achieved_snr_db = std::nan("");
    try {
      Process(record, job);
    } catch (const std::exception& e) {
      job.row.error = e.what();
      if (job.row.error.empty()) job.row.error = "unknown failure";
    }
    return job;
  }

 private:
  void Process(const UtteranceRecord& record, Job& job) {
    const NoiseChoice choice = ChooseNoise(config_.seed, record.id, noise_.size());
    const NoiseClip& clip = noise_[choice.index];
    job.row.noise = clip.name;
    const std::string clean_bytes = ReadFileBytes(record.audio);
    ByteWriter key;
    key.PutBytes("r2w-prepare-1\n");
    key.PutBytes(Sha256Hex(clean_bytes));
    key.PutBytes(clip.digest);
    key.Put<double>(config_.mix_snr_db);
    key.Put<uint64_t>(choice.offset_seed);
    key.PutBytes(enhancer_.id());
    const std::string stamp_key = Sha256Hex(key.bytes());

    const fs::path noisy_path = dir_ / "noisy" / (record.id + ".wav");
    const fs::path enhanced_path = dir_ / "enhanced" / (record.id + ".wav");
    const fs::path stamp_path = dir_ / "stamps" / (record.id + ".json");

    signal::Waveform noisy, enhanced;
    double achieved = 0.0;
    bool reused = false;
    if (fs::exists(stamp_path) && fs::exists(noisy_path) && fs::exists(enhanced_path)) {
      try {
        const json stamp = json::parse(ReadFileBytes(stamp_path));
        if (stamp.at("key").get<std::string>() == stamp_key) {
          achieved = stamp.at("achieved_snr_db").get<double>();
          noisy = signal::ReadWav(noisy_path);
          enhanced = signal::ReadWav(enhanced_path);
          reused = true;
        }
      } catch (const std::exception&) {
        reused = false;  // stale or corrupt; redo below
      }
    }
    if (!reused) {
      const signal::Waveform clean =
          signal::LoadAudio(record.audio, signal::kPipelineSampleRate);
      signal::Mixture mix;
      try {
        mix = signal::MixAtSnrDetailed(clean, clip.audio, config_.mix_snr_db, choice.offset_seed);
      } catch (const std::invalid_argument& e) {
        throw DataError(std::string("mixing failed: ") + e.what());
      }
      double p_clean = 0.0, p_noise = 0.0;
      for (size_t i = 0; i < clean.size(); ++i) {
        p_clean += clean.samples[i] * clean.samples[i];
        p_noise += mix.scaled_noise[i] * mix.scaled_noise[i];
      }
      achieved = 10.0 * std::log10(p_clean / p_noise);
      noisy = mix.mixture;
      RoundToFloat(noisy);
      enhanced = enhancer_.Enhance(noisy);
      RoundToFloat(enhanced);
      signal::WriteWav(noisy_path, noisy);
      signal::WriteWav(enhanced_path, enhanced);
      AtomicWriteFile(stamp_path, json{{"key", stamp_key},
                                       {"noise", clip.name},
                                       {"achieved_snr_db", achieved}}
                                      .dump() +
                                      "\n");
    }
    job.row.reused = reused;
    job.row.achieved_snr_db = achieved;
    job.row.noisy_estimate = EstimateOrUnmeasurable(noisy);
    job.row.enhanced_estimate = EstimateOrUnmeasurable(enhanced);
    const int hits0 = extractor_.hits(), misses0 = extractor_.misses();
    for (const auto& space : spaces_) extractor_.Extract(enhanced, space);
    job.row.feature_hits = extractor_.hits() - hits0;
    job.row.feature_misses = extractor_.misses() - misses0;

    job.prepared.source = record;
    job.prepared.noisy_audio = noisy_path;
    job.prepared.enhanced_audio = enhanced_path;
    job.prepared.noise = clip.name;
    job.prepared.achieved_snr_db = achieved;
  }

  static signal::Snr EstimateOrUnmeasurable(const signal::Waveform& wav) {
    try {
      return signal::EstimateSnr(wav);
    } catch (const std::invalid_argument&) {
      return signal::Snr::Unmeasurable();
    }
  }

  const ExperimentConfig& config_;
  const std::vector<NoiseClip>& noise_;
  const enhance::Enhancer& enhancer_;
  const std::vector<FeatureSpace>& spaces_;
  fs::path dir_;
  FeatureExtractor extractor_;
};

json PreparedToJson(const PreparedUtterance& u) {
  json j = ToJson(u.source);
  return json{{"source", j},
              {"noisy_audio", u.noisy_audio.string()},
              {"enhanced_audio", u.enhanced_audio.string()},
              {"noise", u.noise},
              {"achieved_snr_db", u.achieved_snr_db}};
}

json PrepareFingerprint(const ExperimentConfig& c) {
  return json{{"stage", "prepare"},
              {"tts_manifest", c.tts_manifest.string()},
              {"noise_root", c.noise_root.string()},
              {"mix_snr_db", c.mix_snr_db},
              {"enhancer", c.enhancer},
              {"seed", c.seed}};
}

}  // namespace

std::string PrepareReportCsv(const std::vector<PrepareRow>& rows) {
  std::string out =
      "id,noise,achieved_snr_db,noisy_snr_est_db,enhanced_snr_est_db,reused,feature_cache_hits,"
      "feature_cache_misses,status,error\n";
  auto snr = [](const signal::Snr& s) { return s.is_finite() ? FormatDouble(s.db()) : s.ToString(); };
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    out += r.id + "," + r.noise + "," + (ok ? FormatDouble(r.achieved_snr_db) : "") + "," +
           (ok ? snr(r.noisy_estimate) : "") + "," + (ok ? snr(r.enhanced_estimate) : "") + "," +
           (r.reused ? "1" : "0") + "," + std::to_string(r.feature_hits) + "," +
           std::to_string(r.feature_misses) + "," + (ok ? "ok" : "failed") + "," +
           CsvSafe(r.error) + "\n";
  }
  return out;
}

PreparedCorpus PrepareData(const ExperimentConfig& config, const std::vector<FeatureSpace>& spaces) {
  config.Validate();
  const auto noise = LoadNoise(config.noise_root);
  const auto records = LoadManifest(config.tts_manifest);
  const auto enhancer = enhance::MakeEnhancer(config.enhancer);
  std::unique_ptr<rep::RepresentationBackend> backend;
  for (const auto& s : spaces) {
    if (!s.is_mel() && !backend) backend = MakeBackend(config.backend);
  }

  PreparedCorpus corpus;
  corpus.dir = config.output_dir / "prepared";
  fs::create_directories(corpus.dir);
  EchoConfig(corpus.dir, config, PrepareFingerprint(config));
  FileLock lock(corpus.dir / ".lock");

  std::vector<Job> jobs(records.size());
  const int workers = std::min<int>(config.workers, static_cast<int>(records.size()));
  auto work = [&](int w) {
    Preparer preparer(config, noise, *enhancer, backend.get(), spaces, corpus.dir);
    for (size_t i = static_cast<size_t>(w); i < records.size(); i += static_cast<size_t>(workers)) {
      jobs[i] = preparer.Run(records[i]);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  std::string manifest, audit = "id,stage,action\n";
  for (auto& job : jobs) {
    if (job.row.error.empty()) {
      manifest += PreparedToJson(job.prepared).dump() + "\n";
      audit += job.row.id + ",enhance," + (job.row.reused ? "reused" : "applied") + "\n";
      corpus.reused += job.row.reused ? 1 : 0;
      corpus.utterances.push_back(job.prepared);
    } else {
      ++corpus.failed;
    }
    corpus.rows.push_back(job.row);
  }
  AtomicWriteFile(corpus.dir / "report.csv", PrepareReportCsv(corpus.rows));
  AtomicWriteFile(corpus.dir / "audit.csv", audit);
  AtomicWriteFile(corpus.dir / "manifest.jsonl", manifest);
  if (corpus.failed > config.max_failure_fraction * static_cast<double>(records.size())) {
    throw DataError(std::to_string(corpus.failed) + " of " + std::to_string(records.size()) +
                    " utterances failed preparation; see " + (corpus.dir / "report.csv").string());
  }
  return corpus;
}

PreparedCorpus LoadPreparedCorpus(const ExperimentConfig& config) {
  PreparedCorpus corpus;
  corpus.dir = config.output_dir / "prepared";
  const fs::path path = corpus.dir / "manifest.jsonl";
  if (!fs::exists(path)) {
    throw DataError("no prepared corpus at " + corpus.dir.string() + "; run prepare-data first");
  }
  const fs::path stage = corpus.dir / "stage.json";
  if (!fs::exists(stage) || json::parse(ReadFileBytes(stage)) != PrepareFingerprint(config)) {
    throw ConfigError("prepared corpus at " + corpus.dir.string() +
                      " was produced by a different configuration");
  }
  const std::string text = ReadFileBytes(path);
  size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataError(where + ": invalid JSON");
    PreparedUtterance u;
    try {
      u.source = UtteranceFromJson(j.at("source"), where);
      u.noisy_audio = j.at("noisy_audio").get<std::string>();
      u.enhanced_audio = j.at("enhanced_audio").get<std::string>();
      u.noise = j.at("noise").get<std::string>();
      u.achieved_snr_db = j.at("achieved_snr_db").get<double>();
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    corpus.utterances.push_back(std::move(u));
  }
  if (corpus.utterances.empty()) throw DataError("prepared corpus " + path.string() + " is empty");
  return corpus;
}

}  // namespace r2w::pipeline
