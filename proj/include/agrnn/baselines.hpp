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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agrnn/dataset.hpp"

namespace agrnn {

enum class ScoreMethod { kFtest, kMi, kRrelieff };

std::string_view to_string(ScoreMethod method);

// Higher score = more relevant.
struct ScoreVector {
  ScoreMethod method = ScoreMethod::kFtest;
  Vector scores;
  std::vector<std::string> feature_names;
  std::vector<std::string> warnings;
};

// Returned by ftest_scores for |r| = 1.
inline constexpr double kPerfectCorrelationScore = 1e12;

// Pearson correlation; 0 when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Univariate regression F statistic, r^2 (n - 2) / (1 - r^2). Needs n >= 3.
ScoreVector ftest_scores(const Dataset& dataset);

// Plug-in mutual information (nats) of a bins x bins equal-width histogram
// of (feature, target). Needs n >= bins.
ScoreVector mi_scores(const Dataset& dataset, int bins = 10);

struct CfsResult {
  std::vector<std::size_t> selected;
  double merit = 0.0;
  // Merit of every candidate subset evaluated during the search.
  std::vector<double> visited_merits;
  std::vector<std::string> warnings;
};

// k * mean|r_cf| / sqrt(k + k (k - 1) mean|r_ff|) for the given subset.
double cfs_merit(const Vector& feature_target_corr, const Matrix& feature_corr,
                 std::span<const std::size_t> subset);

// Greedy forward search on the CFS merit with Pearson correlations. Stops
// as soon as no single addition strictly improves the merit; ties go to the
// lower column index.
CfsResult cfs_select(const Dataset& dataset);

struct RreliefOptions {
  int k_neighbors = 10;
  // 0 means every instance.
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  // Scale of the exp(-(rank / scale)^2) neighbor weighting.
  double rank_scale = 20.0;
};

// RReliefF on min-max scaled features and target:
//   W[A] = N_dC&dA[A] / N_dC - (N_dA[A] - N_dC&dA[A]) / (m - N_dC).
ScoreVector rrelieff_scores(const Dataset& dataset,
                            const RreliefOptions& options = {});

// The k highest scores; ties broken by ascending column index.
std::vector<std::size_t> top_k(const ScoreVector& scores, std::size_t k);

// Indices with a strictly positive score.
std::vector<std::size_t> positive_scores(const ScoreVector& scores);

}  // namespace agrnn
