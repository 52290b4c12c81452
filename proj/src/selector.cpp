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

#include "agrnn/selector.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "agrnn/datagen.hpp"

namespace agrnn {
namespace {

constexpr double kZ95 = 1.96;

Vector initial_log_sigma(const OptimizerConfig& config, std::size_t d) {
  if (config.init_sigma_vector) {
    if (static_cast<std::size_t>(config.init_sigma_vector->size()) != d) {
      throw InputError("init_sigma_vector has length " +
                       std::to_string(config.init_sigma_vector->size()) +
                       ", dataset has " + std::to_string(d) + " features");
    }
    return config.init_sigma_vector->array().log().matrix();
  }
  return Vector::Constant(static_cast<Eigen::Index>(d),
                          std::log(config.init_sigma));
}

SelectionResult select_from(const Dataset& dataset, const OptimizerConfig& config,
                            const Vector& init, double threshold,
                            const SelectOptions& options) {
  const Dataset scaled = min_max_scale(dataset, options.scale_target);
  const LooObjective objective(scaled, options.threads);
  // Trial points that overflow the kernel are reported as non-finite so the
  // line search backtracks instead of aborting.
  std::optional<NumericalError> first_failure;
  const Objective fn = [&](const Vector& theta) {
    try {
      LossReport r = objective.loss_and_gradient(theta);
      return Evaluation{r.loss, std::move(r.gradient)};
    } catch (const NumericalError& e) {
      if (!first_failure) first_failure = e;
      return Evaluation{std::numeric_limits<double>::quiet_NaN(),
                        Vector::Zero(theta.size())};
    }
  };

  OptimResult optim;
  try {
    optim = minimize(fn, init, config);
  } catch (const InputError&) {
    // The start point itself failed; report the underlying cause.
    if (first_failure) throw *first_failure;
    throw;
  }
  // A feature the loss ignores can drift past the largest double.
  Vector widths(optim.theta_opt.size());
  for (Eigen::Index j = 0; j < widths.size(); ++j) {
    widths[j] = std::min(std::exp(optim.theta_opt[j]), std::numeric_limits<double>::max());
  }
  Bandwidths sigma(std::move(widths));
  const auto& record = *scaled.scaler();

  SelectionResult result{std::move(sigma), {}, threshold, std::move(optim),
                         dataset.feature_names(), record.warnings};
  result.relevant_mask.resize(dataset.d());
  for (std::size_t j = 0; j < dataset.d(); ++j) {
    result.relevant_mask[j] =
        !record.constant[j] && result.sigma_opt[j] <= threshold;
  }
  if (result.optim.termination_reason == TerminationReason::kLineSearchFailure) {
    result.warnings.push_back("line search failed to decrease the loss; "
                              "returning the best iterate");
  }
  if (result.optim.termination_reason == TerminationReason::kMaxIterations) {
    result.warnings.push_back("optimizer hit the iteration limit");
  }
  if (std::none_of(result.relevant_mask.begin(), result.relevant_mask.end(),
                   [](bool b) { return b; })) {
    result.warnings.push_back("no feature selected");
  }
  return result;
}

void check_repeats(int repeats) {
  if (repeats < 1) throw InputError("repeats must be >= 1");
}

// Runs baseline and shuffled selections for each repeat. `make` returns the
// dataset and the start point for repeat r.
template <typename Make>
ImportanceReport run_importance(std::string_view feature,
                                const OptimizerConfig& config, int repeats,
                                std::uint64_t seed,
                                const ImportanceOptions& options, Make&& make) {
  check_repeats(repeats);
  config.validate();
  const auto count = static_cast<std::size_t>(repeats);
  std::vector<std::optional<SelectionResult>> base(count);
  std::vector<std::optional<SelectionResult>> shuf(count);
  SelectOptions inner{options.scale_target, 1};

  parallel_for(count, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto [data, init] = make(r);
      const std::size_t column = data.feature_index(feature);
      std::vector<std::size_t> perm(data.n());
      if (options.identity_permutation) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
      } else {
        perm = fisher_yates_permutation(data.n(), derive_seed(seed, 2 * r + 1));
      }
      const Dataset shuffled = permute_column(data, column, perm);
      base[r] = select_from(data, config, init, options.threshold, inner);
      shuf[r] = select_from(shuffled, config, init, options.threshold, inner);
    }
  });

  ImportanceReport report;
  report.feature = std::string(feature);
  report.repeats = repeats;
  report.threshold = options.threshold;
  report.feature_names = base[0]->feature_names;
  const std::size_t d = report.feature_names.size();
  report.baseline_runs.resize(repeats, static_cast<Eigen::Index>(d));
  report.shuffled_runs.resize(repeats, static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < count; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    report.baseline_runs.row(row) = base[r]->sigma_opt.values().transpose();
    report.shuffled_runs.row(row) = shuf[r]->sigma_opt.values().transpose();
    report.baseline_results.push_back(std::move(*base[r]));
    report.shuffled_results.push_back(std::move(*shuf[r]));
  }
  report.sigma_baseline = summarize_bandwidths(report.baseline_runs);
  report.sigma_shuffled = summarize_bandwidths(report.shuffled_runs);
  std::size_t column = 0;
  while (report.feature_names[column] != feature) ++column;
  const auto c = static_cast<Eigen::Index>(column);
  report.crossed_threshold =
      report.sigma_baseline.mean[c] <= options.threshold &&
      report.sigma_shuffled.mean[c] > options.threshold;
  return report;
}

}  // namespace

std::vector<std::size_t> SelectionResult::selected_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < relevant_mask.size(); ++j) {
    if (relevant_mask[j]) out.push_back(j);
  }
  return out;
}

std::vector<std::string> SelectionResult::selected_names() const {
  std::vector<std::string> out;
  for (std::size_t j : selected_indices()) out.push_back(feature_names[j]);
  return out;
}

SelectionResult select(const Dataset& dataset, const OptimizerConfig& config,
                       double threshold, const SelectOptions& options) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw InputError("threshold must be positive and finite");
  }
  if (dataset.n() < 2) throw InputError("selection needs n >= 2");
  config.validate();
  return select_from(dataset, config, initial_log_sigma(config, dataset.d()),
                     threshold, options);
}

Dataset relevant_subset(const Dataset& dataset, const SelectionResult& result) {
  if (result.relevant_mask.size() != dataset.d()) {
    throw ContractError("selection result does not match dataset width");
  }
  return dataset.select_columns(result.selected_indices());
}

BandwidthSummary summarize_bandwidths(const Matrix& runs) {
  const auto repeats = runs.rows();
  const auto d = runs.cols();
  BandwidthSummary s;
  s.mean.resize(d);
  s.ci_low.resize(d);
  s.ci_high.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    CompensatedSum sum;
    for (Eigen::Index r = 0; r < repeats; ++r) sum.add(runs(r, j));
    const double mean = sum.value() / static_cast<double>(repeats);
    double sd = 0.0;
    if (repeats > 1) {
      CompensatedSum sq;
      for (Eigen::Index r = 0; r < repeats; ++r) {
        const double dev = runs(r, j) - mean;
        sq.add(dev * dev);
      }
      sd = std::sqrt(sq.value() / static_cast<double>(repeats - 1));
    }
    const double half = kZ95 * sd / std::sqrt(static_cast<double>(repeats));
    s.mean[j] = mean;
    s.ci_low[j] = mean - half;
    s.ci_high[j] = mean + half;
  }
  return s;
}

ImportanceReport shuffle_importance(const Dataset& dataset,
                                    std::string_view feature,
                                    const OptimizerConfig& config, int repeats,
                                    std::uint64_t seed,
                                    const ImportanceOptions& options) {
  dataset.feature_index(feature);
  const Vector base_init = initial_log_sigma(config, dataset.d());
  return run_importance(
      feature, config, repeats, seed, options, [&](std::size_t r) {
        Vector init = base_init;
        if (r > 0) {
          std::mt19937_64 rng(derive_seed(seed, 2 * r));
          std::normal_distribution<double> jitter(0.0, config.restart_jitter);
          for (Eigen::Index j = 0; j < init.size(); ++j) init[j] += jitter(rng);
        }
        return std::pair<Dataset, Vector>(dataset, std::move(init));
      });
}

ImportanceReport shuffle_importance(const DatasetGenerator& generator,
                                    std::string_view feature,
                                    const OptimizerConfig& config, int repeats,
                                    std::uint64_t seed,
                                    const ImportanceOptions& options) {
  if (!generator) throw ContractError("shuffle_importance: empty generator");
  return run_importance(
      feature, config, repeats, seed, options, [&](std::size_t r) {
        Dataset data = generator(derive_seed(seed, 2 * r));
        Vector init = initial_log_sigma(config, data.d());
        return std::pair<Dataset, Vector>(std::move(data), std::move(init));
      });
}

}  // namespace agrnn
