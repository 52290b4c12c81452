/*
 * Copyright 2026 The agrnn Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <mutex>
#include <set>

#include "agrnn/benchmark.hpp"
#include "agrnn/datagen.hpp"

namespace agrnn {
namespace {

BenchmarkConfig small_config(std::vector<Method> methods, int repeats = 3) {
  BenchmarkConfig c;
  c.methods = std::move(methods);
  c.repeats = repeats;
  c.seed = 17;
  c.threads = 2;
  c.dataset_name = "unit";
  return c;
}

void expect_well_formed(const BenchmarkReport& r) {
  EXPECT_EQ(r.schema_version, 1);
  for (const MethodReport& m : r.methods) {
    EXPECT_EQ(m.count, m.selected.size()) << m.method;
    EXPECT_LE(m.count, r.d);
    EXPECT_GE(m.mse_mean, 0.0);
    EXPECT_GE(m.mse_std, 0.0);
    EXPECT_EQ(m.mse.size(), static_cast<std::size_t>(r.config.repeats));
    for (double v : m.mse) EXPECT_GE(v, 0.0);
  }
}

TEST(MakeSplit, PartitionsRows) {
  const SplitPlan p = make_split(103, 0.8, 5, 4);
  EXPECT_EQ(p.train.size(), 82u);
  EXPECT_EQ(p.test.size(), 21u);
  std::set<std::size_t> all(p.train.begin(), p.train.end());
  all.insert(p.test.begin(), p.test.end());
  EXPECT_EQ(all.size(), 103u);
  std::vector<std::size_t> joined;
  for (const auto& f : p.folds) {
    EXPECT_GE(f.size(), 16u);
    joined.insert(joined.end(), f.begin(), f.end());
  }
  EXPECT_EQ(joined, p.train);
  EXPECT_EQ(make_split(103, 0.8, 5, 4).test, p.test);
  EXPECT_NE(make_split(103, 0.8, 5, 5).test, p.test);
}

TEST(BenchmarkConfig, Validation) {
  BenchmarkConfig c;
  EXPECT_NO_THROW(c.validate(100));
  EXPECT_THROW(c.validate(5), InputError);
  c.train_fraction = 1.0;
  EXPECT_THROW(c.validate(100), InputError);
  c = {};
  c.repeats = 0;
  EXPECT_THROW(c.validate(100), InputError);
  c = {};
  c.cv_folds = 1;
  EXPECT_THROW(c.validate(100), InputError);
}

TEST(ParseMethods, NamesAndErrors) {
  EXPECT_EQ(parse_methods("as,rrelieff"), (std::vector<Method>{Method::kAs, Method::kRrelieff}));
  EXPECT_EQ(parse_methods("mi,mi,cfs"), (std::vector<Method>{Method::kMi, Method::kCfs}));
  EXPECT_TRUE(parse_methods("").empty());
  EXPECT_THROW(parse_methods("as,rf"), InputError);
  EXPECT_EQ(evaluator_from_string("grnn-isotropic"), EvaluatorKind::kGrnnIsotropic);
  EXPECT_THROW(evaluator_from_string("rf"), InputError);
}

TEST(Evaluators, KnnGrid) {
  Matrix tx(4, 1);
  tx << 0.0, 1.0, 2.0, 10.0;
  Vector ty(4);
  ty << 1.0, 2.0, 3.0, 4.0;
  Matrix q(1, 1);
  q << 0.1;
  const Matrix p = KnnEvaluator().predict_grid(tx, ty, q);
  ASSERT_EQ(p.cols(), 5);
  EXPECT_EQ(p(0, 0), 1.0);
  EXPECT_EQ(p(0, 1), 2.0);
  // k above the training size falls back to every training row.
  EXPECT_EQ(p(0, 4), 2.5);
}

TEST(Evaluators, IsotropicGrnnGrid) {
  const IsotropicGrnnEvaluator e;
  const auto g = e.grid();
  ASSERT_EQ(g.size(), 10u);
  EXPECT_DOUBLE_EQ(g.front(), 0.02);
  EXPECT_DOUBLE_EQ(g.back(), 2.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], g[1] / g[0], 1e-12);
  Matrix tx(2, 1);
  tx << 0.0, 1.0;
  const Matrix p = e.predict_grid(tx, (Vector(2) << 0.0, 1.0).finished(),
                                  (Matrix(1, 1) << 0.5).finished());
  for (Eigen::Index c = 0; c < p.cols(); ++c) EXPECT_DOUBLE_EQ(p(0, c), 0.5);
}

TEST(RunBenchmark, SelectionBeatsFullFeaturesOnNoiselessFriedman) {
  const Dataset ds = gen_friedman({1000, 30, 0.0, 1});
  BenchmarkConfig c = small_config({Method::kAs}, 20);
  c.threads = 0;
  const BenchmarkReport r = run_benchmark(ds, c);
  ASSERT_EQ(r.methods.size(), 1u);
  ASSERT_TRUE(r.full_features.has_value());
  EXPECT_LE(r.methods[0].mse_mean, r.full_features->mse_mean);
  expect_well_formed(r);
}

TEST(RunBenchmark, RepeatedRunIsBitwiseIdentical) {
  const Dataset ds = gen_friedman({200, 10, 1.0, 3});
  const BenchmarkConfig c = small_config({Method::kAs, Method::kFtest, Method::kMi,
                                          Method::kCfs, Method::kRrelieff}, 1);
  const BenchmarkReport a = run_benchmark(ds, c);
  const BenchmarkReport b = run_benchmark(ds, c);
  EXPECT_TRUE(same_results(a, b));
  EXPECT_EQ(emit_report(a, ReportFormat::kJson), emit_report(b, ReportFormat::kJson));
  expect_well_formed(a);
}

TEST(RunBenchmark, ThreadCountDoesNotChangeResults) {
  const Dataset ds = gen_friedman({200, 8, 1.0, 4});
  BenchmarkConfig c = small_config({Method::kRrelieff, Method::kCfs}, 4);
  c.threads = 1;
  const BenchmarkReport a = run_benchmark(ds, c);
  c.threads = 3;
  const BenchmarkReport b = run_benchmark(ds, c);
  EXPECT_EQ(a.methods, b.methods);
  EXPECT_EQ(a.full_features, b.full_features);
}

TEST(RunBenchmark, SingleFeatureDataset) {
  const Dataset base = gen_friedman({60, 5, 0.0, 2});
  const Dataset ds = base.select_columns({3});
  const BenchmarkReport r = run_benchmark(
      ds, small_config({Method::kAs, Method::kFtest, Method::kMi, Method::kCfs,
                        Method::kRrelieff}, 2));
  expect_well_formed(r);
  for (const MethodReport& m : r.methods) {
    EXPECT_TRUE(m.count == 1 || m.zero_selection) << m.method;
  }
}

TEST(RunBenchmark, ZeroSelectionFallsBackToAllFeatures) {
  const Dataset ds = gen_friedman({150, 6, 1.0, 5});
  BenchmarkConfig c = small_config({Method::kAs}, 2);
  c.threshold = 1e-12;
  const BenchmarkReport r = run_benchmark(ds, c);
  const MethodReport& m = r.methods.front();
  EXPECT_TRUE(m.zero_selection);
  EXPECT_EQ(m.count, 0u);
  EXPECT_EQ(m.mse, r.full_features->mse);
  EXPECT_NE(emit_report(r, ReportFormat::kText).find("zero selection"), std::string::npos);
}

TEST(RunBenchmark, FtestAndMiFollowReliefCount) {
  const Dataset ds = gen_friedman({300, 12, 1.0, 6});
  const BenchmarkReport r =
      run_benchmark(ds, small_config({Method::kFtest, Method::kMi, Method::kRrelieff}, 1));
  EXPECT_EQ(r.methods[0].count, r.methods[2].count);
  EXPECT_EQ(r.methods[1].count, r.methods[2].count);
}

TEST(RunBenchmark, NeverEvaluatesOnFittedRows) {
  const Dataset ds = gen_friedman({120, 6, 1.0, 7});
  std::mutex mu;
  int events = 0;
  std::vector<std::set<std::size_t>> test_rows(3);
  bool overlap = false;
  const FitObserver observer = [&](const FitEvent& e) {
    std::set<std::size_t> fit(e.fit_rows.begin(), e.fit_rows.end());
    std::lock_guard lock(mu);
    ++events;
    for (std::size_t q : e.query_rows) overlap = overlap || fit.count(q) > 0;
    if (e.fold == -1) {
      test_rows[std::size_t(e.repeat)] = {e.query_rows.begin(), e.query_rows.end()};
    }
  };
  // Fold fits only ever use training rows, which never include the test part.
  std::vector<std::vector<std::size_t>> fold_fit_rows;
  const BenchmarkReport r = run_benchmark(
      ds, small_config({Method::kCfs, Method::kRrelieff}, 3), nullptr,
      [&](const FitEvent& e) {
        observer(e);
        std::lock_guard lock(mu);
        if (e.fold >= 0) {
          fold_fit_rows.emplace_back(e.fit_rows.begin(), e.fit_rows.end());
          fold_fit_rows.back().push_back(std::size_t(e.repeat));
        }
      });
  EXPECT_FALSE(overlap);
  // 3 feature sets x 3 repeats x (5 folds + 1 final fit).
  EXPECT_EQ(events, 3 * 3 * 6);
  for (auto rows : fold_fit_rows) {
    const std::size_t repeat = rows.back();
    rows.pop_back();
    for (std::size_t row : rows) EXPECT_EQ(test_rows[repeat].count(row), 0u);
  }
  expect_well_formed(r);
}

TEST(EmitReport, EmptyMethodSetIsHeaderOnly) {
  const Dataset ds = gen_friedman({50, 5, 1.0, 1});
  const BenchmarkReport r = run_benchmark(ds, small_config({}, 1));
  EXPECT_FALSE(r.full_features.has_value());
  const std::string text = emit_report(r, ReportFormat::kText);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find("Method"), std::string::npos);
  const std::string csv = emit_report(r, ReportFormat::kCsv);
  EXPECT_EQ(csv, "dataset,method,count,selected,zero_selection,mse_mean,mse_std\n");
}

TEST(EmitReport, JsonRoundTrip) {
  const Dataset ds = gen_friedman({150, 8, 1.0, 2});
  BenchmarkReport r = run_benchmark(
      ds, small_config({Method::kFtest, Method::kCfs, Method::kRrelieff}, 2));
  const std::string json = emit_report(r, ReportFormat::kJson);
  EXPECT_NE(json.find("\"schema_version\": 1"), std::string::npos);
  EXPECT_EQ(json.find("timings"), std::string::npos);
  const BenchmarkReport back = parse_report_json(json);
  EXPECT_TRUE(same_results(r, back));
  EXPECT_EQ(emit_report(back, ReportFormat::kJson), json);

  const std::string timed = emit_report(r, ReportFormat::kJson, {true});
  EXPECT_EQ(parse_report_json(timed).timings.size(), r.timings.size());
}

TEST(EmitReport, RejectsBadJson) {
  EXPECT_THROW(parse_report_json("{"), InputError);
  EXPECT_THROW(parse_report_json(R"({"schema_version": 2})"), InputError);
  EXPECT_THROW(parse_report_json(R"({"schema_version": 1})"), InputError);
}

TEST(EmitReport, CsvOneRowPerMethod) {
  const Dataset ds = gen_friedman({150, 6, 1.0, 9});
  const BenchmarkReport r = run_benchmark(ds, small_config({Method::kCfs, Method::kMi}, 1));
  const std::string csv = emit_report(r, ReportFormat::kCsv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\nunit,cfs,"), std::string::npos);
  EXPECT_NE(csv.find("\nunit,all,6,"), std::string::npos);
}

TEST(FormatMse, ThreeDecimals) {
  EXPECT_EQ(format_mse(0.0123456, 0.0045), "0.012(±0.004)");
  EXPECT_EQ(format_mse(0.0123456, 0.0), "0.012(±0.000)");
  EXPECT_EQ(format_mse(1.5, 0.00012), "1.500(±1.20e-04)");
  EXPECT_EQ(report_format_from_string("text-table"), ReportFormat::kText);
  EXPECT_THROW(report_format_from_string("xml"), InputError);
}

}  // namespace
}  // namespace agrnn
