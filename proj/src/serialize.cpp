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

#include "agrnn/serialize.hpp"

#include "json.hpp"

namespace agrnn {
namespace {

using json = nlohmann::ordered_json;

std::vector<double> to_std(const Vector& v) { return {v.begin(), v.end()}; }

json summary_json(const BandwidthSummary& s) {
  return {{"mean", to_std(s.mean)},
          {"ci_low", to_std(s.ci_low)},
          {"ci_high", to_std(s.ci_high)}};
}

json runs_json(const Matrix& runs) {
  json out = json::array();
  for (Eigen::Index r = 0; r < runs.rows(); ++r) {
    out.push_back(to_std(runs.row(r).transpose()));
  }
  return out;
}

std::string finish(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string selection_to_json(const SelectionResult& result) {
  const OptimResult& o = result.optim;
  json j{{"schema_version", 1},
         {"kind", "selection"},
         {"feature_names", result.feature_names},
         {"sigma", to_std(result.sigma_opt.values())},
         {"relevant", result.relevant_mask},
         {"selected", result.selected_names()},
         {"threshold", result.threshold},
         {"optimizer",
          {{"loss", o.loss_opt},
           {"iterations", o.iterations},
           {"evaluations", o.evaluations},
           {"converged", o.converged},
           {"termination_reason", std::string(to_string(o.termination_reason))},
           {"restart_index", o.restart_index},
           {"loss_trace", o.loss_trace}}},
         {"warnings", result.warnings}};
  return finish(j);
}

std::string importance_to_json(const ImportanceReport& report) {
  json j{{"schema_version", 1},
         {"kind", "importance"},
         {"feature", report.feature},
         {"repeats", report.repeats},
         {"threshold", report.threshold},
         {"feature_names", report.feature_names},
         {"crossed_threshold", report.crossed_threshold},
         {"baseline", summary_json(report.sigma_baseline)},
         {"shuffled", summary_json(report.sigma_shuffled)},
         {"baseline_runs", runs_json(report.baseline_runs)},
         {"shuffled_runs", runs_json(report.shuffled_runs)}};
  return finish(j);
}

std::string scores_to_json(const ScoreVector& scores,
                           const std::vector<std::size_t>& selected) {
  std::vector<std::string> names;
  for (std::size_t j : selected) names.push_back(scores.feature_names.at(j));
  json j{{"schema_version", 1},
         {"kind", "scores"},
         {"method", std::string(to_string(scores.method))},
         {"feature_names", scores.feature_names},
         {"scores", to_std(scores.scores)},
         {"selected", names},
         {"warnings", scores.warnings}};
  return finish(j);
}

std::string cfs_to_json(const CfsResult& result,
                        const std::vector<std::string>& feature_names) {
  std::vector<std::string> names;
  for (std::size_t j : result.selected) names.push_back(feature_names.at(j));
  json j{{"schema_version", 1},
         {"kind", "scores"},
         {"method", "cfs"},
         {"feature_names", feature_names},
         {"merit", result.merit},
         {"selected", names},
         {"warnings", result.warnings}};
  return finish(j);
}

}  // namespace agrnn
