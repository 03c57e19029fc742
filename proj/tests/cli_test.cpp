// Copyright 2026 The afkit Authors
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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "afkit/csv.hpp"
#include "afkit/eval.hpp"
#include "afkit/pipeline.hpp"
#include "afkit/png_io.hpp"
#include "afkit/iqa.hpp"
#include "afkit/transforms.hpp"
#include "cli.hpp"
#include "support.hpp"

namespace afkit::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run afkit(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    fs::create_directories(dir / "in");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 3; ++i)
      save_png(test::smooth_u8(rng, 40 + i, 36, 3), dir / "in" / ("p" + std::to_string(i) + ".png"));
  }
  std::string p(const std::string& rel) const { return (dir / rel).string(); }

  test::TempDir dir;
};

TEST_F(CliTest, VersionHelpAndUsageErrors) {
  EXPECT_EQ(afkit({"--version"}).code, kExitOk);
  EXPECT_EQ(afkit({"--help"}).code, kExitOk);
  EXPECT_EQ(afkit({}).code, kExitUsage);
  EXPECT_EQ(afkit({"bogus"}).code, kExitUsage);
  EXPECT_EQ(afkit({"transform", "--in", p("in")}).code, kExitUsage);
  EXPECT_EQ(afkit({"transform", "--method", "gan", "--in", p("in"), "--out", p("o")}).code, kExitUsage);
  const auto r = afkit({"transform", "--method", "blur-sharp", "--quality", "50", "--in", p("in"), "--out", p("o")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("quality"), std::string::npos);
}

TEST_F(CliTest, TransformIsIdempotent) {
  const std::vector<std::string> base = {"transform", "--method", "noise-denoise", "--sigma", "25",
                                         "--seed", "3", "--in", p("in"), "--no-timing", "--out"};
  auto a1 = base, a2 = base;
  a1.push_back(p("o1"));
  a2.push_back(p("o2"));
  a2.insert(a2.end(), {"--jobs", "3"});
  ASSERT_EQ(afkit(a1).code, kExitOk);
  ASSERT_EQ(afkit(a2).code, kExitOk);
  for (const char* f : {"p0.corrupt.png", "p1.corrupt.png", "p2.corrupt.png", "batch_report.json"})
    EXPECT_EQ(test::read_text(dir / "o1" / f), test::read_text(dir / "o2" / f)) << f;
  EXPECT_EQ(afkit(a1).code, kExitOk);
  EXPECT_EQ(test::read_text(dir / "o1" / "batch_report.json"), test::read_text(dir / "o2" / "batch_report.json"));
}

TEST_F(CliTest, TransformWithWorker) {
  const auto r = afkit({"transform", "--method", "downscale-upscale", "--in", p("in"), "--out", p("o"),
                        "--worker", test::stub_command("auto")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "o" / "p0.png"));
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(load_png(dir / "o" / "p1.png").width(), 41);

  const auto bad = afkit({"transform", "--method", "jpeg-car", "--in", p("in"), "--out", p("o2"),
                          "--worker", test::stub_command("crash")});
  EXPECT_EQ(bad.code, kExitWorker);
}

TEST_F(CliTest, TransformPartialFailure) {
  test::write_text(dir / "in" / "zz.png", "broken");
  const auto r = afkit({"transform", "--method", "blur-sharp", "--in", p("in"), "--out", p("o")});
  EXPECT_EQ(r.code, kExitPartial);
  EXPECT_NE(r.err.find("zz.png"), std::string::npos);
  EXPECT_NE(r.out.find("3/4"), std::string::npos);
}

TEST_F(CliTest, ConfigFileSuppliesOptions) {
  test::write_text(dir / "afkit.toml", "[transform]\nmethod = \"jpeg-car\"\nquality = 70\nin = \"" +
                                           p("in") + "\"\nout = \"" + p("cfg") + "\"\n");
  const auto r = afkit({"--config", p("afkit.toml"), "transform"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "cfg" / "p0.corrupt.png"));
  EXPECT_NE(test::read_text(dir / "cfg" / "batch_report.json").find("\"quality\": 70"), std::string::npos);
}

TEST_F(CliTest, MetricsPairsByStem) {
  ASSERT_EQ(afkit({"transform", "--method", "blur-sharp", "--in", p("in"), "--out", p("bs")}).code, kExitOk);
  ASSERT_EQ(afkit({"transform", "--method", "jpeg-car", "--in", p("in"), "--out", p("jc")}).code, kExitOk);
  fs::remove(dir / "bs" / "batch_report.json");
  fs::remove(dir / "jc" / "batch_report.json");
  auto r = afkit({"metrics", "--ref", p("in"), "--dist", p("bs"), "--out", p("q1.csv"), "--dataset", "D"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  // ".corrupt" outputs pair with their sources.
  r = afkit({"metrics", "--ref", p("in"), "--dist", p("jc"), "--out", p("q2.csv"), "--dataset", "D"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto recs = eval::parse_quality_csv(csv::read(dir / "q1.csv"), "q1");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].method, "bs");
  const auto ref = load_png(dir / "in" / "p0.png");
  EXPECT_NEAR(recs[0].psnr, iqa::psnr(ref, sharpen3(blur5(ref))), 1e-9);
  EXPECT_FALSE(std::isnan(recs[0].brisque));

  // Mean row equals the mean of the image rows.
  const auto t = csv::read(dir / "q1.csv");
  double sum = 0;
  for (const auto& rec : recs) sum += rec.psnr;
  for (const auto& row : t.rows)
    if (row[2] == eval::kMeanRow) EXPECT_NEAR(csv::parse_number(row[3]), sum / 3, 1e-9);

  r = afkit({"metrics", "--dist", p("in"), "--out", p("raw.csv"), "--dataset", "D"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto raw = eval::parse_quality_csv(csv::read(dir / "raw.csv"), "raw");
  EXPECT_EQ(raw[0].method, "raw");
  EXPECT_TRUE(std::isnan(raw[0].psnr));
  EXPECT_FALSE(std::isnan(raw[0].brisque));
}

TEST_F(CliTest, MetricsPairingErrors) {
  fs::create_directories(dir / "d");
  fs::copy_file(dir / "in" / "p0.png", dir / "d" / "p0.png");
  auto r = afkit({"metrics", "--ref", p("in"), "--dist", p("d"), "--out", p("q.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("p1.png (only in --ref)"), std::string::npos) << r.err;
  fs::copy_file(dir / "in" / "p0.png", dir / "d" / "p0.corrupt.png");
  r = afkit({"metrics", "--ref", p("in"), "--dist", p("d"), "--out", p("q.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("ambiguous"), std::string::npos);
  EXPECT_EQ(afkit({"metrics", "--dist", p("d"), "--no-brisque", "--out", p("q.csv")}).code, kExitUsage);
}

TEST_F(CliTest, EvaluateFromPredictionsAndWorker) {
  std::string manifest = "id,path,label\n", preds = "id,score\n";
  for (int i = 0; i < 3; ++i) {
    const std::string id = "p" + std::to_string(i);
    manifest += id + ",in/" + id + ".png," + (i < 2 ? "forged" : "authentic") + "\n";
    preds += id + "," + (i == 0 ? "0.9" : "0.1") + "\n";
  }
  test::write_text(dir / "coverage.csv", manifest);
  test::write_text(dir / "blur.csv", preds + "extra,0.3\n");
  auto r = afkit({"evaluate", "--manifest", p("coverage.csv"), "--predictions", p("blur.csv"), "--out",
                  p("e.csv"), "--detector", "trufor"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("1 prediction(s)"), std::string::npos);
  auto recs = eval::parse_detection_csv(csv::read(dir / "e.csv"), "e");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].dataset, "coverage");
  EXPECT_EQ(recs[0].method, "blur");
  EXPECT_EQ(recs[0].counts, (eval::ConfusionCounts{1, 1, 0, 1}));

  r = afkit({"evaluate", "--manifest", p("coverage.csv"), "--worker", test::stub_command("auto"), "--task",
             "detect-trufor", "--out", p("w.csv"), "--predictions-out", p("scores.csv"), "--threshold", "0.4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto scores = eval::load_predictions(dir / "scores.csv");
  EXPECT_EQ(scores.size(), 3u);
  recs = eval::parse_detection_csv(csv::read(dir / "w.csv"), "w");
  EXPECT_EQ(recs[0].detector, "detect-trufor");
  EXPECT_EQ(recs[0].counts.total(), 3);

  EXPECT_EQ(afkit({"evaluate", "--manifest", p("coverage.csv"), "--out", p("x.csv")}).code, kExitUsage);
  EXPECT_EQ(afkit({"evaluate", "--manifest", p("coverage.csv"), "--predictions", p("blur.csv"), "--worker",
                   "x", "--out", p("x.csv")})
                .code,
            kExitUsage);
  test::write_text(dir / "short.csv", "id,score\np0,0.9\n");
  r = afkit({"evaluate", "--manifest", p("coverage.csv"), "--predictions", p("short.csv"), "--out", p("x.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("p1"), std::string::npos);
  EXPECT_EQ(afkit({"evaluate", "--manifest", p("coverage.csv"), "--worker", test::stub_command("crash"),
                   "--task", "detect-trufor", "--out", p("x.csv")})
                .code,
            kExitWorker);
}

TEST_F(CliTest, ReportMergesRuns) {
  std::vector<std::string> det_files;
  int k = 0;
  for (const char* ds : {"COVERAGE", "DSO-1"}) {
    test::write_text(dir / (std::string(ds) + ".csv"), "id,path,label\na,a.png,forged\nb,b.png,authentic\n");
    for (const char* m : {"raw", "blur-sharp", "jpeg-car"}) {
      test::write_text(dir / (std::string(m) + ".csv"), std::string("id,score\na,") + (k % 2 ? "0.2" : "0.8") + "\nb,0.1\n");
      const std::string out = p("det" + std::to_string(k++) + ".csv");
      ASSERT_EQ(afkit({"evaluate", "--manifest", p(std::string(ds) + ".csv"), "--predictions",
                       p(std::string(m) + ".csv"), "--detector", "trufor", "--out", out})
                    .code,
                kExitOk);
      det_files.push_back(out);
    }
  }
  ASSERT_EQ(afkit({"transform", "--method", "blur-sharp", "--in", p("in"), "--out", p("bs")}).code, kExitOk);
  fs::remove(dir / "bs" / "batch_report.json");
  ASSERT_EQ(afkit({"metrics", "--ref", p("in"), "--dist", p("bs"), "--out", p("q.csv"), "--method", "blur-sharp"}).code,
            kExitOk);
  ASSERT_EQ(afkit({"metrics", "--dist", p("in"), "--out", p("r.csv")}).code, kExitOk);

  std::vector<std::string> args = {"report", "--out-dir", p("rep"), "--quality", p("q.csv"), p("r.csv"), "--detection"};
  args.insert(args.end(), det_files.begin(), det_files.end());
  const auto r = afkit(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"quality_means.csv", "quality_table.csv", "quality_table.txt", "quality_radar.csv",
                        "detection_records.csv", "detection_table.csv", "detection_table.txt",
                        "detection_bars.csv", "detection_radar.csv"})
    EXPECT_TRUE(fs::exists(dir / "rep" / f)) << f;
  EXPECT_EQ(csv::read(dir / "rep" / "detection_records.csv").rows.size(), 6u);
  const auto table = eval::ReportTable::from_csv(csv::read(dir / "rep" / "detection_table.csv"));
  EXPECT_EQ(table.methods, (std::vector<std::string>{"raw", "blur-sharp", "jpeg-car"}));
  EXPECT_EQ(table.columns.size(), 4u);
  const auto q = eval::ReportTable::from_csv(csv::read(dir / "rep" / "quality_table.csv"));
  EXPECT_EQ(q.methods.front(), "raw");
  EXPECT_NE(r.out.find("blur-sharp"), std::string::npos);

  EXPECT_EQ(afkit({"report", "--out-dir", p("rep2")}).code, kExitUsage);
  EXPECT_EQ(afkit({"report", "--out-dir", p("rep3"), "--quality", p("missing.csv")}).code, kExitFailure);
}

}  // namespace
}  // namespace afkit::cli
