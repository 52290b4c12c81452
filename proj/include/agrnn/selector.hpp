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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agrnn/dataset.hpp"
#include "agrnn/grnn.hpp"
#include "agrnn/lbfgs.hpp"

namespace agrnn {

inline constexpr double kDefaultThreshold = 1.0;

struct SelectOptions {
  // Min-max scale the target as well as the features.
  bool scale_target = false;
  // Worker threads for the leave-one-out sums; 0 = all cores.
  unsigned threads = 1;
};

struct SelectionResult {
  Bandwidths sigma_opt;
  std::vector<bool> relevant_mask;
  double threshold = kDefaultThreshold;
  OptimResult optim;
  std::vector<std::string> feature_names;
  std::vector<std::string> warnings;

  std::vector<std::size_t> selected_indices() const;
  std::vector<std::string> selected_names() const;
};

// Scales features to [0, 1], minimizes the leave-one-out loss over log
// bandwidths, and keeps every feature with sigma <= threshold. Constant
// columns are never selected: their gradient is zero, so their sigma stays
// at the starting value.
SelectionResult select(const Dataset& dataset, const OptimizerConfig& config,
                       double threshold = kDefaultThreshold,
                       const SelectOptions& options = {});

// Algorithm output restricted to the relevant columns of `dataset`.
Dataset relevant_subset(const Dataset& dataset, const SelectionResult& result);

// Per-feature mean with a normal-approximation 95% interval,
// mean +- 1.96 * s / sqrt(repeats).
struct BandwidthSummary {
  Vector mean;
  Vector ci_low;
  Vector ci_high;

  double half_width(std::size_t j) const {
    const auto jj = static_cast<Eigen::Index>(j);
    return 0.5 * (ci_high[jj] - ci_low[jj]);
  }
};

BandwidthSummary summarize_bandwidths(const Matrix& runs);

struct ImportanceOptions {
  double threshold = kDefaultThreshold;
  bool scale_target = false;
  unsigned threads = 1;
  // Test hook: use the identity permutation instead of a shuffle.
  bool identity_permutation = false;
};

struct ImportanceReport {
  std::string feature;
  int repeats = 0;
  double threshold = kDefaultThreshold;
  std::vector<std::string> feature_names;
  BandwidthSummary sigma_baseline;
  BandwidthSummary sigma_shuffled;
  // repeats x d optimized bandwidths.
  Matrix baseline_runs;
  Matrix shuffled_runs;
  // Baseline mean of the shuffled feature <= threshold < shuffled mean.
  bool crossed_threshold = false;
  std::vector<SelectionResult> baseline_results;
  std::vector<SelectionResult> shuffled_results;
};

using DatasetGenerator = std::function<Dataset(std::uint64_t seed)>;

// Permutes one feature column, reruns select, and compares the bandwidths
// with an unshuffled baseline over `repeats` seeded runs.
//
// The dataset is fixed here, so repeat r > 0 starts the optimizer from a
// jittered point (normal noise of config.restart_jitter on log sigma); the
// baseline and shuffled runs of one repeat share that start.
ImportanceReport shuffle_importance(const Dataset& dataset,
                                    std::string_view feature,
                                    const OptimizerConfig& config, int repeats,
                                    std::uint64_t seed,
                                    const ImportanceOptions& options = {});

// Repeat r draws a fresh dataset from the generator; its baseline is the
// unshuffled run on that same dataset.
ImportanceReport shuffle_importance(const DatasetGenerator& generator,
                                    std::string_view feature,
                                    const OptimizerConfig& config, int repeats,
                                    std::uint64_t seed,
                                    const ImportanceOptions& options = {});

}  // namespace agrnn
