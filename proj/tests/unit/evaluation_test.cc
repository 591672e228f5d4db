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

#include <gtest/gtest.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "r2w/evaluation/figure.h"
#include "r2w/evaluation/metrics.h"
#include "r2w/evaluation/report.h"
#include "r2w/signal/snr.h"
#include "r2w/util/error.h"
#include "r2w/util/fs.h"
#include "support/synth.h"

namespace r2w::eval {
namespace {

const std::string kTools = R2W_TEST_TOOL_DIR;

class FixedEmbedder : public SpeakerEmbedder {
 public:
  explicit FixedEmbedder(double scale = 1.0) : scale_(scale) {}
  std::string id() const override { return "fixed"; }
  // Even-length inputs map to e0, odd-length to e1.
  std::vector<double> Embed(const signal::Waveform& wav) const override {
    std::vector<double> v(3, 0.0);
    v[wav.size() % 2] = scale_;
    return v;
  }

 private:
  double scale_;
};

// Scores by input length so tests can plant values.
class LengthQualityTool : public QualityTool {
 public:
  std::string id() const override { return "length"; }
  double Score(const signal::Waveform&, const signal::Waveform& test) const override {
    return 1.0 + static_cast<double>(test.size() % 1000) / 1000.0;
  }
};

TEST(SpeakerSimilarity, SelfSymmetryAndRange) {
  MockSpeakerEmbedder e;
  const auto a = testing::Babble(1.0, 1);
  const auto b = testing::Babble(1.0, 2);
  EXPECT_NEAR(SpeakerSimilarity(a, a, e), 1.0, 1e-12);
  const double ab = SpeakerSimilarity(a, b, e);
  EXPECT_EQ(ab, SpeakerSimilarity(b, a, e));
  EXPECT_LE(ab, 1.0);
  EXPECT_GE(ab, -1.0);
  const auto v = e.Embed(a);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  EXPECT_NEAR(norm, 1.0, 1e-12);
}

TEST(SpeakerSimilarity, OrthogonalEmbeddingsGiveZero) {
  FixedEmbedder e;
  signal::Waveform even, odd;
  even.samples.assign(10, 0.1);
  odd.samples.assign(11, 0.1);
  EXPECT_EQ(SpeakerSimilarity(even, odd, e), 0.0);
  EXPECT_EQ(SpeakerSimilarity(even, even, e), 1.0);
}

TEST(SpeakerSimilarity, ContractViolations) {
  signal::Waveform x, empty;
  x.samples.assign(10, 0.1);
  EXPECT_THROW(SpeakerSimilarity(x, x, FixedEmbedder(2.0)), NumericError);
  EXPECT_THROW(SpeakerSimilarity(x, empty, FixedEmbedder()), DataError);
  signal::Waveform silence;
  silence.samples.assign(24000, 0.0);
  EXPECT_THROW(MockSpeakerEmbedder().Embed(silence), DataError);
}

TEST(SpeakerSimilarity, MockSeparatesSpectrallyDistantTones) {
  MockSpeakerEmbedder e;
  const auto low = testing::Sine(500.0, 1.0, 0.5, 24000);
  const auto near = testing::Sine(530.0, 1.0, 0.5, 24000);
  const auto high = testing::Sine(4000.0, 1.0, 0.5, 24000);
  EXPECT_GT(SpeakerSimilarity(low, near, e), SpeakerSimilarity(low, high, e) + 0.2);
  // Rate independence: a 16 kHz copy is resampled before embedding.
  const auto low16 = testing::Sine(500.0, 1.0, 0.5, 16000);
  EXPECT_GT(SpeakerSimilarity(low, low16, e), 0.95);
}

TEST(Report, RowArithmeticMatchesOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<UtteranceValue> values;
  double oracle = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double v = u(rng);
    values.push_back({"u" + std::to_string(i), v, ""});
    oracle += v;
  }
  oracle /= 10.0;
  const ReportRow row = MakeRow("c", Metric::kSnr, values);
  EXPECT_NEAR(row.mean, oracle, 1e-12);
  EXPECT_EQ(row.count, 10);
  EXPECT_EQ(row.excluded, 0);

  const ReportRow one = MakeRow("c", Metric::kSnr, {{"only", 2.5, ""}});
  EXPECT_EQ(one.mean, 2.5);
  EXPECT_EQ(one.count, 1);

  const ReportRow with_gaps = MakeRow(
      "c", Metric::kSnr,
      {{"a", 1.0, ""}, {"b", std::nullopt, "infinite"}, {"c", 3.0, ""}});
  EXPECT_EQ(with_gaps.mean, 2.0);
  EXPECT_EQ(with_gaps.count, 2);
  EXPECT_EQ(with_gaps.excluded, 1);
  EXPECT_TRUE(std::isnan(MakeRow("c", Metric::kSnr, {{"a", std::nullopt, "x"}}).mean));
}

std::vector<EvalUtterance> Corpus(int n, uint64_t seed) {
  std::vector<EvalUtterance> out;
  for (int i = 0; i < n; ++i) {
    EvalUtterance u;
    u.id = "utt" + std::to_string(i);
    u.audio = testing::Babble(0.6 + 0.05 * i, seed + i);
    const auto floor = testing::WhiteNoise(u.audio.size(), 3e-3, seed + 50 + i);
    for (size_t k = 0; k < u.audio.size(); ++k) u.audio.samples[k] += floor.samples[k];
    u.reference = testing::Babble(0.6 + 0.05 * i, seed + 100 + i);
    out.push_back(std::move(u));
  }
  return out;
}

EvalOptions AllMetrics(const SpeakerEmbedder& e, const QualityTool& q) {
  EvalOptions o;
  o.metrics = {Metric::kSnr, Metric::kSpeakerSimilarity, Metric::kMosLqo};
  o.embedder = &e;
  o.quality_tool = &q;
  return o;
}

TEST(EvaluateCorpus, IdenticalConditionsGiveIdenticalRows) {
  MockSpeakerEmbedder e;
  LengthQualityTool q;
  const auto utts = Corpus(4, 3);
  const auto report = EvaluateCorpus({{"a", utts}, {"b", utts}}, AllMetrics(e, q));
  ASSERT_EQ(report.rows.size(), 6u);
  for (Metric m : report.metrics) {
    const auto& ra = report.Row("a", m);
    const auto& rb = report.Row("b", m);
    EXPECT_EQ(ra.mean, rb.mean) << MetricName(m);
    EXPECT_EQ(ra.count, 4);
  }
}

TEST(EvaluateCorpus, MeansMatchPerUtteranceMetricsAndArePermutationInvariant) {
  MockSpeakerEmbedder e;
  LengthQualityTool q;
  auto utts = Corpus(10, 20);
  const auto report = EvaluateCorpus({{"c", utts}}, AllMetrics(e, q));
  double sim = 0.0, mos = 0.0;
  for (const auto& u : utts) {
    sim += SpeakerSimilarity(u.audio, *u.reference, e);
    mos += q.Score(*u.reference, u.audio);
  }
  EXPECT_NEAR(report.Row("c", Metric::kSpeakerSimilarity).mean, sim / 10.0, 1e-12);
  EXPECT_NEAR(report.Row("c", Metric::kMosLqo).mean, mos / 10.0, 1e-12);

  std::mt19937_64 rng(4);
  std::shuffle(utts.begin(), utts.end(), rng);
  const auto shuffled = EvaluateCorpus({{"c", utts}}, AllMetrics(e, q));
  for (Metric m : report.metrics) {
    EXPECT_NEAR(shuffled.Row("c", m).mean, report.Row("c", m).mean, 1e-12) << MetricName(m);
  }
}

TEST(EvaluateCorpus, DegenerateSnrIsExcludedAndNoted) {
  // Constant input: every frame has the same power, so neither class forms.
  EvalUtterance steady{"steady", {}, std::nullopt};
  steady.audio.samples.assign(24000, 0.25);
  // Digital silence followed by noise: with just enough all-zero frames to
  // fill the noise class, its power is zero. The frame count that achieves
  // this depends on framing, so search for it.
  EvalUtterance gated{"gated", {}, std::nullopt};
  for (size_t lead = 0; lead < 12000; lead += 60) {
    auto x = testing::WhiteNoise(24000, 0.1, 2);
    std::fill(x.samples.begin(), x.samples.begin() + lead, 0.0);
    if (signal::EstimateSnr(x).is_infinite()) {
      gated.audio = x;
      break;
    }
  }
  ASSERT_FALSE(gated.audio.empty());
  EvalUtterance shorty{"short", testing::Sine(300.0, 0.1, 0.5, 24000), std::nullopt};
  EvalUtterance normal = Corpus(1, 5)[0];
  EvalOptions o;
  o.metrics = {Metric::kSnr};
  const auto report = EvaluateCorpus({{"c", {steady, gated, shorty, normal}}}, o);
  const auto& row = report.Row("c", Metric::kSnr);
  EXPECT_EQ(row.count, 1);
  EXPECT_EQ(row.excluded, 3);
  EXPECT_EQ(row.values[0].note, "unmeasurable");
  EXPECT_EQ(row.values[1].note, "infinite");
  EXPECT_EQ(row.values[2].note, "too_short");
  EXPECT_EQ(row.mean, *row.values[3].value);
}

TEST(EvaluateCorpus, ConfigurationErrors) {
  const auto utts = Corpus(1, 1);
  EvalOptions snr_only;
  snr_only.metrics = {Metric::kSnr};
  EXPECT_THROW(EvaluateCorpus({{"a", utts}, {"a", utts}}, snr_only), ConfigError);
  EXPECT_THROW(EvaluateCorpus({{"", utts}}, snr_only), ConfigError);
  EXPECT_THROW(EvaluateCorpus({{"a", {}}}, snr_only), DataError);
  EvalOptions sim;
  sim.metrics = {Metric::kSpeakerSimilarity};
  EXPECT_THROW(EvaluateCorpus({{"a", utts}}, sim), ConfigError);
  MockSpeakerEmbedder e;
  sim.embedder = &e;
  auto no_ref = utts;
  no_ref[0].reference.reset();
  EXPECT_THROW(EvaluateCorpus({{"a", no_ref}}, sim), DataError);
  EXPECT_THROW(ParseMetric("pesq"), ConfigError);
  EXPECT_EQ(ParseMetric("mos_lqo"), Metric::kMosLqo);
}

TEST(ReportCsv, ExactLayout) {
  EvalReport r;
  r.conditions = {"clean", "noisy"};
  r.metrics = {Metric::kSnr, Metric::kMosLqo};
  r.rows = {MakeRow("clean", Metric::kSnr, {{"u1", 20.5, ""}, {"u2", std::nullopt, "infinite"}}),
            MakeRow("clean", Metric::kMosLqo, {{"u1", 3.5, ""}, {"u2", 4.0, ""}}),
            MakeRow("noisy", Metric::kSnr, {{"u1", 5.0, ""}, {"u2", 6.0, ""}}),
            MakeRow("noisy", Metric::kMosLqo, {{"u1", 2.0, ""}, {"u2", 2.5, ""}})};
  EXPECT_EQ(LongCsv(r),
            "condition,metric,utterance_id,value,note\n"
            "clean,snr_db,u1,20.5,\n"
            "clean,snr_db,u2,,infinite\n"
            "clean,mos_lqo,u1,3.5,\n"
            "clean,mos_lqo,u2,4,\n"
            "noisy,snr_db,u1,5,\n"
            "noisy,snr_db,u2,6,\n"
            "noisy,mos_lqo,u1,2,\n"
            "noisy,mos_lqo,u2,2.5,\n"
            "\n"
            "condition,metric,mean,count,excluded\n"
            "clean,snr_db,20.5,1,1\n"
            "clean,mos_lqo,3.75,2,0\n"
            "noisy,snr_db,5.5,2,0\n"
            "noisy,mos_lqo,2.25,2,0\n");
  EXPECT_EQ(WideCsv(r),
            "condition,snr_db,mos_lqo,mos\n"
            "clean,20.5,3.75,unavailable\n"
            "noisy,5.5,2.25,unavailable\n");
}

TEST(ReportCsv, ByteDeterministicAcrossRuns) {
  MockSpeakerEmbedder e;
  LengthQualityTool q;
  const auto utts = Corpus(3, 9);
  const auto dir = std::filesystem::temp_directory_path() / "r2w_eval_report_test";
  std::filesystem::remove_all(dir);
  WriteReport(EvaluateCorpus({{"x", utts}}, AllMetrics(e, q)), dir / "one");
  WriteReport(EvaluateCorpus({{"x", utts}}, AllMetrics(e, q)), dir / "two");
  for (const char* name : {"report_long.csv", "report_wide.csv"}) {
    EXPECT_EQ(ReadFileBytes(dir / "one" / name), ReadFileBytes(dir / "two" / name)) << name;
  }
  std::filesystem::remove_all(dir);
}

TEST(Figure, IdenticalClipsGiveIdenticalPanelsAndSilenceIsUniform) {
  const auto clip = testing::Babble(0.8, 3);
  signal::Waveform silence;
  silence.samples.assign(clip.size(), 0.0);
  const auto fig = RenderSpectrogramFigure({{"clean", clip}, {"mel tts", clip}, {"quiet", silence}});
  ASSERT_EQ(fig.panels.size(), 3u);
  EXPECT_EQ(Crop(fig.image, fig.panels[0]), Crop(fig.image, fig.panels[1]));
  const auto quiet = Crop(fig.image, fig.panels[2]);
  for (size_t i = 3; i < quiet.size(); ++i) ASSERT_EQ(quiet[i], quiet[i % 3]) << i;
  EXPECT_NE(Crop(fig.image, fig.panels[0]), quiet);
  // Panels are stacked top to bottom without overlap.
  EXPECT_LT(fig.panels[0].y + fig.panels[0].height, fig.panels[1].y);
  EXPECT_EQ(fig.panels[0].width, 2 * 40);  // 0.8 s at a 20 ms hop
  EXPECT_EQ(fig.panels[0].height, 2 * 80);
}

double MeanBrightness(const std::vector<uint8_t>& px) {
  double s = 0.0;
  for (uint8_t v : px) s += v;
  return s / static_cast<double>(px.size());
}

TEST(Figure, SharedColorScale) {
  const auto loud = testing::Babble(0.5, 8);
  auto quiet = loud;
  for (double& s : quiet.samples) s *= 0.01;
  const auto fig = RenderSpectrogramFigure({{"loud", loud}, {"quiet", quiet}});
  EXPECT_GT(MeanBrightness(Crop(fig.image, fig.panels[0])),
            MeanBrightness(Crop(fig.image, fig.panels[1])));
  const auto alone = RenderSpectrogramFigure({{"quiet", quiet}});
  EXPECT_LT(alone.scale_max, fig.scale_max);
}

TEST(Figure, PngRoundTripsThroughLibpng) {
  const auto fig = RenderSpectrogramFigure({{"a", testing::Babble(0.3, 1)}});
  const std::string png = EncodePng(fig.image);
  png_image decoded{};
  decoded.version = PNG_IMAGE_VERSION;
  ASSERT_TRUE(png_image_begin_read_from_memory(&decoded, png.data(), png.size()));
  decoded.format = PNG_FORMAT_RGB;
  std::vector<uint8_t> px(PNG_IMAGE_SIZE(decoded));
  ASSERT_TRUE(png_image_finish_read(&decoded, nullptr, px.data(), 0, nullptr));
  EXPECT_EQ(static_cast<int>(decoded.width), fig.image.width);
  EXPECT_EQ(static_cast<int>(decoded.height), fig.image.height);
  EXPECT_EQ(px, fig.image.rgb);
  EXPECT_THROW(WriteSpectrogramFigure({{"a", testing::Babble(0.3, 1)}},
                                      "/dev/null/fig.png"),
               IoError);
  EXPECT_THROW(RenderSpectrogramFigure({}), DataError);
  EXPECT_THROW(RenderSpectrogramFigure({{"empty", signal::Waveform{}}}), DataError);
}

TEST(QualityTool, ExternalStubs) {
  const auto ref = testing::Babble(0.3, 1);
  const auto test = testing::Babble(0.3, 2);
  EXPECT_EQ(ExternalQualityTool(kTools + "/quality_3.78.sh").Score(ref, test), 3.78);
  EXPECT_THROW(ExternalQualityTool(kTools + "/quality_9.9.sh").Score(ref, test), DataError);
  EXPECT_THROW(ExternalQualityTool(kTools + "/quality_nan.sh").Score(ref, test), DataError);
  EXPECT_THROW(ExternalQualityTool(kTools + "/enhance_fail.sh").Score(ref, test), DataError);
  EXPECT_THROW(ExternalQualityTool("/nonexistent/visqol"), ConfigError);
}

TEST(QualityTool, ParseOutput) {
  EXPECT_EQ(ParseMosLqo("4.1\n"), 4.1);
  EXPECT_EQ(ParseMosLqo("loading model\nMOS-LQO: 2.5\n"), 2.5);
  EXPECT_EQ(ParseMosLqo("MOS-LQO: 1\n"), 1.0);
  EXPECT_EQ(ParseMosLqo("MOS-LQO: 4.75\n"), 4.75);
  EXPECT_THROW(ParseMosLqo("MOS-LQO: 0.99"), DataError);
  EXPECT_THROW(ParseMosLqo("no score here"), DataError);
  EXPECT_THROW(ParseMosLqo(""), DataError);
}

}  // namespace
}  // namespace r2w::eval
