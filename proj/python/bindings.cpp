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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "agrnn/baselines.hpp"
#include "agrnn/benchmark.hpp"
#include "agrnn/datagen.hpp"
#include "agrnn/dataset.hpp"
#include "agrnn/grnn.hpp"
#include "agrnn/lbfgs.hpp"
#include "agrnn/selector.hpp"
#include "agrnn/serialize.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

agrnn::Dataset make_dataset(agrnn::Matrix x, agrnn::Vector y,
                            std::optional<std::vector<std::string>> names) {
  if (names) return {std::move(x), std::move(y), std::move(*names)};
  return {std::move(x), std::move(y)};
}

std::vector<std::string> score_selection_names(const agrnn::ScoreVector& s,
                                               const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t j : idx) out.push_back(s.feature_names[j]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anisotropic GRNN feature selection";

  auto base = py::register_exception<agrnn::InputError>(m, "InputError",
                                                         PyExc_ValueError);
  py::register_exception<agrnn::ContractError>(m, "ContractError", base.ptr());
  py::register_exception<agrnn::NumericalError>(m, "NumericalError",
                                                PyExc_ArithmeticError);
  py::register_exception<agrnn::IoError>(m, "IoError", PyExc_OSError);

  py::class_<agrnn::Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), "features"_a, "target"_a,
           "feature_names"_a = py::none())
      .def_property_readonly("features", &agrnn::Dataset::features)
      .def_property_readonly("target", &agrnn::Dataset::target)
      .def_property_readonly("feature_names", &agrnn::Dataset::feature_names)
      .def_property_readonly("n", &agrnn::Dataset::n)
      .def_property_readonly("d", &agrnn::Dataset::d)
      .def_property_readonly("is_scaled",
                             [](const agrnn::Dataset& ds) { return ds.scaler().has_value(); })
      .def("feature_index", &agrnn::Dataset::feature_index, "name"_a)
      .def("select_columns", &agrnn::Dataset::select_columns, "columns"_a)
      .def("select_rows", &agrnn::Dataset::select_rows, "rows"_a)
      .def("__repr__", [](const agrnn::Dataset& ds) {
        return "<Dataset n=" + std::to_string(ds.n()) +
               " d=" + std::to_string(ds.d()) + ">";
      });

  m.def("min_max_scale", &agrnn::min_max_scale, "dataset"_a,
        "scale_target"_a = false);

  // Kernel regression.
  m.def(
      "predict",
      [](const agrnn::Dataset& train, const agrnn::Vector& sigma,
         const agrnn::Matrix& queries, unsigned threads) {
        return agrnn::predict_batch(train, agrnn::Bandwidths(sigma), queries, threads);
      },
      "train"_a, "sigma"_a, "queries"_a, "threads"_a = 1,
      "Predictions for each row of queries.");
  m.def(
      "loo_loss",
      [](const agrnn::Dataset& train, const agrnn::Vector& sigma, unsigned threads) {
        return agrnn::loo_loss(train, agrnn::Bandwidths(sigma), threads);
      },
      "train"_a, "sigma"_a, "threads"_a = 1);
  m.def(
      "loo_loss_grad",
      [](const agrnn::Dataset& train, const agrnn::Vector& log_sigma, unsigned threads) {
        const auto r = agrnn::loo_loss_grad(train, log_sigma, threads);
        return py::make_tuple(r.loss, r.gradient);
      },
      "train"_a, "log_sigma"_a, "threads"_a = 1,
      "(loss, gradient) with the gradient taken in log bandwidth.");

  // Optimizer.
  py::class_<agrnn::OptimizerConfig>(m, "OptimizerConfig")
      .def(py::init<>())
      .def_readwrite("memory", &agrnn::OptimizerConfig::memory)
      .def_readwrite("max_iterations", &agrnn::OptimizerConfig::max_iterations)
      .def_readwrite("grad_tol", &agrnn::OptimizerConfig::grad_tol)
      .def_readwrite("rel_loss_tol", &agrnn::OptimizerConfig::rel_loss_tol)
      .def_readwrite("init_sigma", &agrnn::OptimizerConfig::init_sigma)
      .def_readwrite("init_sigma_vector", &agrnn::OptimizerConfig::init_sigma_vector)
      .def_readwrite("restarts", &agrnn::OptimizerConfig::restarts)
      .def_readwrite("seed", &agrnn::OptimizerConfig::seed)
      .def_readwrite("armijo_c1", &agrnn::OptimizerConfig::armijo_c1)
      .def_readwrite("backtrack_factor", &agrnn::OptimizerConfig::backtrack_factor)
      .def_readwrite("max_backtracks", &agrnn::OptimizerConfig::max_backtracks)
      .def_readwrite("max_step", &agrnn::OptimizerConfig::max_step)
      .def_readwrite("restart_jitter", &agrnn::OptimizerConfig::restart_jitter)
      .def("validate", &agrnn::OptimizerConfig::validate);

  py::class_<agrnn::OptimResult>(m, "OptimResult")
      .def_readonly("theta", &agrnn::OptimResult::theta_opt)
      .def_readonly("loss", &agrnn::OptimResult::loss_opt)
      .def_readonly("loss_trace", &agrnn::OptimResult::loss_trace)
      .def_readonly("iterations", &agrnn::OptimResult::iterations)
      .def_readonly("evaluations", &agrnn::OptimResult::evaluations)
      .def_readonly("converged", &agrnn::OptimResult::converged)
      .def_readonly("restart_index", &agrnn::OptimResult::restart_index)
      .def_property_readonly("termination_reason", [](const agrnn::OptimResult& r) {
        return std::string(agrnn::to_string(r.termination_reason));
      });

  m.def(
      "minimize",
      [](const std::function<py::tuple(const agrnn::Vector&)>& fun,
         const agrnn::Vector& init, const agrnn::OptimizerConfig& config) {
        const agrnn::Objective objective = [&](const agrnn::Vector& theta) {
          const py::tuple t = fun(theta);
          return agrnn::Evaluation{t[0].cast<double>(), t[1].cast<agrnn::Vector>()};
        };
        return agrnn::minimize(objective, init, config);
      },
      "fun"_a, "init"_a, "config"_a = agrnn::OptimizerConfig{},
      "Minimizes fun(theta) -> (value, gradient) with L-BFGS.");

  // Selection.
  py::class_<agrnn::SelectionResult>(m, "SelectionResult")
      .def_property_readonly("sigma",
                             [](const agrnn::SelectionResult& r) { return r.sigma_opt.values(); })
      .def_readonly("relevant_mask", &agrnn::SelectionResult::relevant_mask)
      .def_readonly("threshold", &agrnn::SelectionResult::threshold)
      .def_readonly("optim", &agrnn::SelectionResult::optim)
      .def_readonly("feature_names", &agrnn::SelectionResult::feature_names)
      .def_readonly("warnings", &agrnn::SelectionResult::warnings)
      .def_property_readonly("selected_indices", &agrnn::SelectionResult::selected_indices)
      .def_property_readonly("selected_names", &agrnn::SelectionResult::selected_names)
      .def("to_json", &agrnn::selection_to_json);

  m.def(
      "select",
      [](const agrnn::Dataset& ds, const agrnn::OptimizerConfig& config,
         double threshold, bool scale_target, unsigned threads) {
        py::gil_scoped_release release;
        return agrnn::select(ds, config, threshold, {scale_target, threads});
      },
      "dataset"_a, "config"_a = agrnn::OptimizerConfig{},
      "threshold"_a = agrnn::kDefaultThreshold, "scale_target"_a = false,
      "threads"_a = 1);
  m.def("relevant_subset", &agrnn::relevant_subset, "dataset"_a, "result"_a);

  py::class_<agrnn::BandwidthSummary>(m, "BandwidthSummary")
      .def_readonly("mean", &agrnn::BandwidthSummary::mean)
      .def_readonly("ci_low", &agrnn::BandwidthSummary::ci_low)
      .def_readonly("ci_high", &agrnn::BandwidthSummary::ci_high)
      .def("half_width", &agrnn::BandwidthSummary::half_width, "j"_a);

  py::class_<agrnn::ImportanceReport>(m, "ImportanceReport")
      .def_readonly("feature", &agrnn::ImportanceReport::feature)
      .def_readonly("repeats", &agrnn::ImportanceReport::repeats)
      .def_readonly("threshold", &agrnn::ImportanceReport::threshold)
      .def_readonly("feature_names", &agrnn::ImportanceReport::feature_names)
      .def_readonly("sigma_baseline", &agrnn::ImportanceReport::sigma_baseline)
      .def_readonly("sigma_shuffled", &agrnn::ImportanceReport::sigma_shuffled)
      .def_readonly("baseline_runs", &agrnn::ImportanceReport::baseline_runs)
      .def_readonly("shuffled_runs", &agrnn::ImportanceReport::shuffled_runs)
      .def_readonly("crossed_threshold", &agrnn::ImportanceReport::crossed_threshold)
      .def_readonly("baseline_results", &agrnn::ImportanceReport::baseline_results)
      .def_readonly("shuffled_results", &agrnn::ImportanceReport::shuffled_results)
      .def("to_json", &agrnn::importance_to_json);

  m.def(
      "shuffle_importance",
      [](const agrnn::Dataset& ds, const std::string& feature,
         const agrnn::OptimizerConfig& config, int repeats, std::uint64_t seed,
         double threshold, bool scale_target, unsigned threads) {
        py::gil_scoped_release release;
        return agrnn::shuffle_importance(ds, feature, config, repeats, seed,
                                         {threshold, scale_target, threads, false});
      },
      "dataset"_a, "feature"_a, "config"_a = agrnn::OptimizerConfig{},
      "repeats"_a = 20, "seed"_a = 0, "threshold"_a = agrnn::kDefaultThreshold,
      "scale_target"_a = false, "threads"_a = 1);
  m.def(
      "shuffle_importance_generated",
      [](const std::function<agrnn::Dataset(std::uint64_t)>& generator,
         const std::string& feature, const agrnn::OptimizerConfig& config,
         int repeats, std::uint64_t seed, double threshold, bool scale_target,
         unsigned threads) {
        return agrnn::shuffle_importance(generator, feature, config, repeats, seed,
                                         {threshold, scale_target, threads, false});
      },
      "generator"_a, "feature"_a, "config"_a = agrnn::OptimizerConfig{},
      "repeats"_a = 20, "seed"_a = 0, "threshold"_a = agrnn::kDefaultThreshold,
      "scale_target"_a = false, "threads"_a = 1,
      "Like shuffle_importance, drawing a fresh dataset per repeat from generator(seed).");

  // Data.
  m.def(
      "gen_butterfly",
      [](std::size_t n, std::uint64_t seed, std::uint64_t weight_seed) {
        return agrnn::gen_butterfly({n, seed, 10, weight_seed});
      },
      "n"_a = 2000, "seed"_a = 0, "weight_seed"_a = agrnn::kButterflyWeightSeed);
  m.def(
      "gen_friedman",
      [](std::size_t n, std::size_t d, double noise_sd, std::uint64_t seed) {
        return agrnn::gen_friedman({n, d, noise_sd, seed});
      },
      "n"_a = 1000, "d"_a = 30, "noise_sd"_a = 1.0, "seed"_a = 0);
  m.def(
      "load_csv",
      [](const std::string& path, const std::string& target) {
        return agrnn::load_csv(path, target);
      },
      "path"_a, "target"_a = "Y");
  m.def(
      "save_csv",
      [](const agrnn::Dataset& ds, const std::string& path, const std::string& target) {
        agrnn::save_csv(ds, path, target);
      },
      "dataset"_a, "path"_a, "target_name"_a = "Y");
  m.def("shuffle_column", &agrnn::shuffle_column, "dataset"_a, "feature"_a,
        "seed"_a);

  // Reference methods.
  py::class_<agrnn::ScoreVector>(m, "ScoreVector")
      .def_property_readonly("method",
                             [](const agrnn::ScoreVector& s) {
                               return std::string(agrnn::to_string(s.method));
                             })
      .def_readonly("scores", &agrnn::ScoreVector::scores)
      .def_readonly("feature_names", &agrnn::ScoreVector::feature_names)
      .def_readonly("warnings", &agrnn::ScoreVector::warnings)
      .def("top_k", &agrnn::top_k, "k"_a)
      .def("positive", &agrnn::positive_scores)
      .def("top_k_names",
           [](const agrnn::ScoreVector& s, std::size_t k) {
             return score_selection_names(s, agrnn::top_k(s, k));
           },
           "k"_a)
      .def("to_json", &agrnn::scores_to_json, "selected"_a);

  m.def("ftest_scores", &agrnn::ftest_scores, "dataset"_a);
  m.def("mi_scores", &agrnn::mi_scores, "dataset"_a, "bins"_a = 10);
  m.def(
      "rrelieff_scores",
      [](const agrnn::Dataset& ds, int k_neighbors, std::size_t sample_size,
         std::uint64_t seed) {
        return agrnn::rrelieff_scores(ds, {k_neighbors, sample_size, seed, 20.0});
      },
      "dataset"_a, "k_neighbors"_a = 10, "sample_size"_a = 0, "seed"_a = 0);

  py::class_<agrnn::CfsResult>(m, "CfsResult")
      .def_readonly("selected", &agrnn::CfsResult::selected)
      .def_readonly("merit", &agrnn::CfsResult::merit)
      .def_readonly("warnings", &agrnn::CfsResult::warnings);
  m.def("cfs_select", &agrnn::cfs_select, "dataset"_a);

  // Benchmark.
  py::class_<agrnn::BenchmarkConfig>(m, "BenchmarkConfig")
      .def(py::init<>())
      .def_property(
          "methods",
          [](const agrnn::BenchmarkConfig& c) {
            std::vector<std::string> out;
            for (auto method : c.methods) out.emplace_back(agrnn::to_string(method));
            return out;
          },
          [](agrnn::BenchmarkConfig& c, const std::vector<std::string>& names) {
            c.methods.clear();
            for (const auto& name : names) c.methods.push_back(agrnn::method_from_string(name));
          })
      .def_property(
          "evaluator",
          [](const agrnn::BenchmarkConfig& c) {
            return std::string(agrnn::to_string(c.evaluator));
          },
          [](agrnn::BenchmarkConfig& c, const std::string& name) {
            c.evaluator = agrnn::evaluator_from_string(name);
          })
      .def_readwrite("train_fraction", &agrnn::BenchmarkConfig::train_fraction)
      .def_readwrite("cv_folds", &agrnn::BenchmarkConfig::cv_folds)
      .def_readwrite("repeats", &agrnn::BenchmarkConfig::repeats)
      .def_readwrite("seed", &agrnn::BenchmarkConfig::seed)
      .def_readwrite("dataset_name", &agrnn::BenchmarkConfig::dataset_name)
      .def_readwrite("scale_target", &agrnn::BenchmarkConfig::scale_target)
      .def_readwrite("optimizer", &agrnn::BenchmarkConfig::optimizer)
      .def_readwrite("threshold", &agrnn::BenchmarkConfig::threshold)
      .def_readwrite("mi_bins", &agrnn::BenchmarkConfig::mi_bins)
      .def_readwrite("relief_neighbors", &agrnn::BenchmarkConfig::relief_neighbors)
      .def_readwrite("threads", &agrnn::BenchmarkConfig::threads);

  py::class_<agrnn::MethodReport>(m, "MethodReport")
      .def_readonly("method", &agrnn::MethodReport::method)
      .def_readonly("selected", &agrnn::MethodReport::selected)
      .def_readonly("count", &agrnn::MethodReport::count)
      .def_readonly("zero_selection", &agrnn::MethodReport::zero_selection)
      .def_readonly("mse", &agrnn::MethodReport::mse)
      .def_readonly("mse_mean", &agrnn::MethodReport::mse_mean)
      .def_readonly("mse_std", &agrnn::MethodReport::mse_std)
      .def_readonly("chosen_param", &agrnn::MethodReport::chosen_param);

  py::class_<agrnn::BenchmarkReport>(m, "BenchmarkReport")
      .def_readonly("dataset", &agrnn::BenchmarkReport::dataset)
      .def_readonly("n", &agrnn::BenchmarkReport::n)
      .def_readonly("d", &agrnn::BenchmarkReport::d)
      .def_readonly("methods", &agrnn::BenchmarkReport::methods)
      .def_readonly("full_features", &agrnn::BenchmarkReport::full_features)
      .def_readonly("notes", &agrnn::BenchmarkReport::notes)
      .def_readonly("timings", &agrnn::BenchmarkReport::timings)
      .def(
          "emit",
          [](const agrnn::BenchmarkReport& r, const std::string& format, bool timings) {
            return agrnn::emit_report(r, agrnn::report_format_from_string(format),
                                      {timings});
          },
          "format"_a = "text", "include_timings"_a = false);

  m.def(
      "run_benchmark",
      [](const agrnn::Dataset& ds, const agrnn::BenchmarkConfig& config) {
        py::gil_scoped_release release;
        return agrnn::run_benchmark(ds, config);
      },
      "dataset"_a, "config"_a = agrnn::BenchmarkConfig{});
  m.def(
      "parse_report_json",
      [](const std::string& json) { return agrnn::parse_report_json(json); },
      "json"_a);
}
