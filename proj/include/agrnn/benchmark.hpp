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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agrnn/dataset.hpp"
#include "agrnn/lbfgs.hpp"

namespace agrnn {

enum class Method { kAs, kFtest, kMi, kCfs, kRrelieff };
enum class EvaluatorKind { kKnn, kGrnnIsotropic };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
std::string_view to_string(EvaluatorKind kind);
EvaluatorKind evaluator_from_string(std::string_view name);
// Comma separated list, e.g. "as,rrelieff".
std::vector<Method> parse_methods(std::string_view list);

struct BenchmarkConfig {
  std::vector<Method> methods = {Method::kFtest, Method::kMi, Method::kCfs,
                                 Method::kRrelieff, Method::kAs};
  EvaluatorKind evaluator = EvaluatorKind::kKnn;
  double train_fraction = 0.8;
  int cv_folds = 5;
  int repeats = 20;
  std::uint64_t seed = 0;
  std::string target_column = "Y";
  std::string dataset_name = "dataset";
  // MSEs are reported on the [0, 1]-scaled target when set.
  bool scale_target = true;
  OptimizerConfig optimizer;
  double threshold = 1.0;
  int mi_bins = 10;
  int relief_neighbors = 10;
  // Worker threads for the repeats; 0 = all cores.
  unsigned threads = 0;

  // Throws InputError when the configuration cannot run on n rows.
  void validate(std::size_t n) const;
};

// Regression model used to score a feature subset. Tuning happens in the
// harness: the evaluator predicts for every grid value at once.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual std::string name() const = 0;
  virtual std::vector<double> grid() const = 0;
  // Column g holds the predictions for grid()[g].
  virtual Matrix predict_grid(const Matrix& train_x, const Vector& train_y,
                              const Matrix& query_x) const = 0;
};

// k nearest neighbours (Euclidean), k in {1, 3, 5, 7, 9}.
class KnnEvaluator final : public Evaluator {
 public:
  std::string name() const override { return "knn"; }
  std::vector<double> grid() const override { return {1, 3, 5, 7, 9}; }
  Matrix predict_grid(const Matrix& train_x, const Vector& train_y,
                      const Matrix& query_x) const override;
};

// GRNN with one shared bandwidth over a 10-point log grid in [0.02, 2].
class IsotropicGrnnEvaluator final : public Evaluator {
 public:
  std::string name() const override { return "grnn-isotropic"; }
  std::vector<double> grid() const override;
  Matrix predict_grid(const Matrix& train_x, const Vector& train_y,
                      const Matrix& query_x) const override;
};

std::unique_ptr<Evaluator> make_evaluator(EvaluatorKind kind);

// Row indices of one repeat. CV folds partition `train`.
struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> folds;
};

SplitPlan make_split(std::size_t n, double train_fraction, int cv_folds,
                     std::uint64_t seed);

// Emitted for every model fit; lets tests audit split integrity.
struct FitEvent {
  std::string feature_set;
  int repeat = 0;
  // -1 for the final fit on the whole training part.
  int fold = -1;
  std::span<const std::size_t> fit_rows;
  std::span<const std::size_t> query_rows;
};
using FitObserver = std::function<void(const FitEvent&)>;

struct MethodReport {
  std::string method;
  std::vector<std::string> selected;
  std::size_t count = 0;
  // The method kept nothing; the MSEs are those of the full feature set.
  bool zero_selection = false;
  std::vector<double> mse;
  double mse_mean = 0.0;
  double mse_std = 0.0;
  // Tuned evaluator hyperparameter per repeat.
  std::vector<double> chosen_param;

  bool operator==(const MethodReport&) const = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct BenchmarkReport {
  int schema_version = kReportSchemaVersion;
  std::string dataset;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  BenchmarkConfig config;
  std::vector<MethodReport> methods;
  // Same protocol on every feature; absent when no method was requested.
  std::optional<MethodReport> full_features;
  std::vector<std::string> notes;
  // Wall clock seconds per phase. Not part of report equality.
  std::map<std::string, double> timings;
};

bool same_results(const BenchmarkReport& a, const BenchmarkReport& b);

// Selects features once on the full scaled dataset with every method, then
// for each repeat splits 80/20, tunes the evaluator by k-fold CV on the
// training part, refits and records the test MSE.
BenchmarkReport run_benchmark(const Dataset& dataset, const BenchmarkConfig& config,
                              const Evaluator* evaluator = nullptr,
                              const FitObserver& observer = {});

enum class ReportFormat { kText, kJson, kCsv };
ReportFormat report_format_from_string(std::string_view name);

struct EmitOptions {
  bool include_timings = false;
};

std::string emit_report(const BenchmarkReport& report, ReportFormat format,
                        const EmitOptions& options = {});

// Inverse of emit_report(..., kJson).
BenchmarkReport parse_report_json(std::string_view json);

// "0.012" style: three decimals.
std::string format_mse(double mean, double std);

}  // namespace agrnn
