// Copyright 2026 The osaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "osaudit/cli.hpp"

#include <regex>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "osaudit/report.hpp"
#include "test_util.hpp"

namespace osaudit::cli {
namespace {

using osaudit::testing::data_path;
using osaudit::testing::read_text;
using osaudit::testing::TempDir;
using osaudit::testing::write_text;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string yeast(int n) { return data_path("yeast" + std::to_string(n) + ".dat").string(); }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::set<std::pair<std::string, std::string>> circle_centres(const std::string& svg, const std::string& series) {
  const std::size_t start = svg.find("<g id=\"series-" + series + "\"");
  const std::string body = start == std::string::npos ? "" : svg.substr(start, svg.find("</g>", start) - start);
  std::set<std::pair<std::string, std::string>> out;
  const std::regex re("cx=\"([^\"]+)\" cy=\"([^\"]+)\"");
  for (auto it = std::sregex_iterator(body.begin(), body.end(), re); it != std::sregex_iterator(); ++it)
    out.emplace((*it)[1], (*it)[2]);
  return out;
}

TEST(ListMethods, TextAndJson) {
  const Outcome text = invoke({"list-methods"});
  EXPECT_EQ(text.code, kSuccess);
  for (OversamplerId id : kAllOversamplers) EXPECT_NE(text.out.find(to_string(id)), std::string::npos);
  EXPECT_NE(text.out.find("no tuning parameters"), std::string::npos);

  const Outcome js = invoke({"list-methods", "--json"});
  ASSERT_EQ(js.code, kSuccess);
  const auto doc = nlohmann::json::parse(js.out);
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 8u);
  EXPECT_EQ(doc[0].at("id"), "ROS");
}

TEST(Validate, SmoteOnYeast4) {
  TempDir dir;
  const Outcome r = invoke({"validate", "--dataset", yeast(4), "--methods", "smote", "--trials", "2",
                            "--out", dir.path().string()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const ResultsTable t = read_results(dir / "results_h0.1.csv");
  ASSERT_EQ(t.cells.size(), 1u);
  EXPECT_EQ(t.cells[0].method, "SMOTE");
  EXPECT_EQ(t.cells[0].dataset, "yeast4");
  EXPECT_EQ(t.cells[0].se, 1239.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "results_h0.1.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "boxplot_h0.1.svg"));
  EXPECT_NE(r.out.find("SMOTE"), std::string::npos);
}

TEST(Validate, UsageErrors) {
  TempDir dir;
  EXPECT_EQ(invoke({}).code, kUsageError);
  EXPECT_EQ(invoke({"validate"}).code, kUsageError);
  EXPECT_EQ(invoke({"validate", "--dataset", yeast(4), "--bogus"}).code, kUsageError);
  EXPECT_EQ(invoke({"validate", "--dataset", (dir / "missing.dat").string()}).code, kUsageError);
  EXPECT_EQ(invoke({"validate", "--dataset", yeast(4), "--methods", "smote,nope"}).code, kUsageError);
  EXPECT_EQ(invoke({"validate", "--dataset", yeast(4), "--hidden", "1.5"}).code, kUsageError);
  EXPECT_EQ(invoke({"validate", "--dataset", yeast(4), "--param", "k_smote=0"}).code, kUsageError);
  EXPECT_EQ(invoke({"validate", "--dataset", yeast(4), "--dataset", yeast(4)}).code, kUsageError);
  const Outcome help = invoke({"--help"});
  EXPECT_EQ(help.code, kSuccess);
  EXPECT_NE(help.out.find("validate"), std::string::npos);
}

TEST(Validate, PartialFailureExitCode) {
  TempDir dir;
  std::string csv = "x,y,class\n";
  for (int i = 0; i < 10; ++i) csv += std::to_string(0.1 * i) + ",0.5,pos\n";
  for (int i = 0; i < 40; ++i) csv += std::to_string(100 + 0.1 * i) + ",100,neg\n";
  write_text(dir / "blobs.csv", csv);
  const Outcome r = invoke({"validate", "--dataset", (dir / "blobs.csv").string(), "--methods",
                            "smote,bsmote1", "--trials", "1", "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, kPartialFailure) << r.err;
  const ResultsTable t = read_results(dir / "out" / "results_h0.1.csv");
  ASSERT_EQ(t.cells.size(), 2u);
  EXPECT_FALSE(t.cells[0].failed);
  EXPECT_TRUE(t.cells[1].failed);
  EXPECT_NE(r.err.find("BSMOTE1"), std::string::npos);
}

TEST(Validate, JobsDoNotChangeOutput) {
  TempDir a, b;
  const std::vector<std::string> base = {"validate", "--dataset", yeast(4), "--dataset", yeast(6),
                                         "--methods", "smote,adasyn,swim", "--trials", "2",
                                         "--hidden", "0.1", "--hidden", "0.3"};
  auto one = base, three = base;
  one.insert(one.end(), {"--jobs", "1", "--out", a.path().string()});
  three.insert(three.end(), {"--jobs", "3", "--out", b.path().string()});
  const Outcome r1 = invoke(one), r3 = invoke(three);
  ASSERT_EQ(r1.code, kSuccess) << r1.err;
  ASSERT_EQ(r3.code, kSuccess) << r3.err;
  EXPECT_EQ(r1.out, r3.out);
  for (const char* f : {"results_h0.1.csv", "results_h0.3.json", "boxplot_h0.3.svg"})
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
}

TEST(Validate, SeedChangesResults) {
  TempDir a, b;
  invoke({"validate", "--dataset", yeast(4), "--methods", "smote", "--trials", "1", "--seed", "1",
          "--out", a.path().string()});
  invoke({"validate", "--dataset", yeast(4), "--methods", "smote", "--trials", "1", "--seed", "2",
          "--out", b.path().string()});
  EXPECT_NE(read_text(a / "results_h0.1.csv"), read_text(b / "results_h0.1.csv"));
}

TEST(Validate, ConfigFileMatchesFlags) {
  TempDir dir;
  write_text(dir / "run.cfg", "# experiment\ndataset = " + yeast(5) +
                                  "\nmethods = bsmote2\ntrials = 2\n\nparam = k_smote=3\nno-plots = true\n");
  const Outcome c = invoke({"validate", "--config", (dir / "run.cfg").string(), "--out", (dir / "c").string()});
  const Outcome f = invoke({"validate", "--dataset", yeast(5), "--methods", "bsmote2", "--trials", "2",
                            "--param", "k_smote=3", "--no-plots", "--out", (dir / "f").string()});
  ASSERT_EQ(c.code, kSuccess) << c.err;
  ASSERT_EQ(f.code, kSuccess) << f.err;
  EXPECT_EQ(read_text(dir / "c" / "results_h0.1.csv"), read_text(dir / "f" / "results_h0.1.csv"));
  EXPECT_FALSE(std::filesystem::exists(dir / "c" / "boxplot_h0.1.svg"));
  EXPECT_EQ(invoke({"validate", "--config", (dir / "nope.cfg").string()}).code, kUsageError);
}

TEST(Validate, AllMethodsAllDatasetsAllRatios) {
  TempDir dir;
  const Outcome r = invoke({"validate", "--dataset", yeast(4), "--dataset", yeast(5), "--dataset",
                            yeast(6), "--methods", "all", "--trials", "1", "--hidden", "0.1",
                            "--hidden", "0.3", "--hidden", "0.5", "--out", dir.path().string()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  std::size_t rows = 0;
  for (const char* tag : {"h0.1", "h0.3", "h0.5"}) {
    const std::string csv = read_text(dir / ("results_" + std::string(tag) + ".csv"));
    rows += lines(csv) - 1;
    EXPECT_EQ(read_results(dir / ("results_" + std::string(tag) + ".json")).ranking.size(), 8u);
  }
  EXPECT_EQ(rows, 72u);
}

TEST(Validate, ScatterPlotsWhenFeaturesGiven) {
  TempDir dir;
  const Outcome r = invoke({"validate", "--dataset", yeast(4), "--methods", "ros", "--trials", "1",
                            "--feat-x", "0", "--feat-y", "1", "--out", dir.path().string()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "scatter_yeast4_ROS_h0.1.svg"));
  EXPECT_EQ(invoke({"validate", "--dataset", yeast(4), "--feat-x", "0"}).code, kUsageError);
}

TEST(Plot, BoxFromResultsFiles) {
  TempDir dir;
  ASSERT_EQ(invoke({"validate", "--dataset", yeast(4), "--dataset", yeast(5), "--methods", "ros,smote",
                    "--trials", "1", "--hidden", "0.1", "--hidden", "0.5", "--no-plots", "--out",
                    dir.path().string()})
                .code,
            kSuccess);
  const Outcome r = invoke({"plot", "box", "--results", (dir / "results_h0.1.csv").string(), "--results",
                            (dir / "results_h0.5.json").string(), "--out", (dir / "b.svg").string()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  const std::string svg = read_text(dir / "b.svg");
  std::size_t boxes = 0;
  for (std::size_t p = svg.find("<g class=\"box\""); p != std::string::npos; p = svg.find("<g class=\"box\"", p + 1)) ++boxes;
  EXPECT_EQ(boxes, 4u);
  EXPECT_EQ(invoke({"plot", "box", "--out", (dir / "x.svg").string()}).code, kUsageError);
  EXPECT_EQ(invoke({"plot", "pie", "--out", (dir / "x.svg").string()}).code, kUsageError);
}

TEST(Plot, ScatterRosCopiesMinority) {
  TempDir dir;
  const Outcome r = invoke({"plot", "scatter", "--dataset", yeast(4), "--method", "ros", "--feat-x", "0",
                            "--feat-y", "2", "--out", (dir / "s.svg").string()});
  ASSERT_EQ(r.code, kSuccess) << r.err;
  EXPECT_NE(r.out.find("NE 0, SE 1239"), std::string::npos) << r.out;
  const std::string svg = read_text(dir / "s.svg");
  const auto minority = circle_centres(svg, "minority");
  const auto synthetic = circle_centres(svg, "synthetic");
  ASSERT_FALSE(synthetic.empty());
  for (const auto& c : synthetic) EXPECT_TRUE(minority.count(c));
  EXPECT_EQ(invoke({"plot", "scatter", "--dataset", yeast(4), "--out", (dir / "t.svg").string()}).code,
            kUsageError);
}

TEST(Helpers, MethodListAndParameters) {
  EXPECT_EQ(parse_method_list("all").size(), 8u);
  EXPECT_EQ(parse_method_list("smote,SWIM"), (std::vector<OversamplerId>{OversamplerId::SMOTE, OversamplerId::SWIM}));
  EXPECT_THROW(parse_method_list("smote,,swim"), InvalidArgument);
  OversamplerConfig cfg;
  apply_parameter(cfg, "k_smote=7");
  apply_parameter(cfg, "swim_sigma=0.5");
  apply_parameter(cfg, "gen_metric=hassanat");
  EXPECT_EQ(cfg.k_smote, 7u);
  EXPECT_EQ(cfg.swim_sigma, 0.5);
  EXPECT_EQ(cfg.gen_metric, MetricKind::Hassanat);
  EXPECT_THROW(apply_parameter(cfg, "k_smote"), InvalidArgument);
  EXPECT_THROW(apply_parameter(cfg, "unknown=1"), InvalidArgument);
  EXPECT_THROW(apply_parameter(cfg, "k_smote=abc"), InvalidArgument);
  EXPECT_EQ(infer_format("a/b.csv"), DatasetFormat::Csv);
  EXPECT_EQ(infer_format("a/b.dat"), DatasetFormat::KeelDat);
}

}  // namespace
}  // namespace osaudit::cli
