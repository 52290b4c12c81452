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
#include <string_view>
#include <vector>

#include "agrnn/common.hpp"

namespace agrnn {

struct OptimizerConfig {
  // Number of curvature pairs kept for the two-loop recursion.
  int memory = 10;
  int max_iterations = 500;
  // Infinity norm of the gradient.
  double grad_tol = 1e-6;
  // Stop when an accepted step lowers the loss by less than this fraction.
  double rel_loss_tol = 1e-10;
  // Initial bandwidth for every feature, unless init_sigma_vector is set.
  double init_sigma = 0.5;
  std::optional<Vector> init_sigma_vector;
  // Extra runs from jittered starting points; the best one is returned.
  int restarts = 0;
  std::uint64_t seed = 0;

  // Armijo backtracking parameters.
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 40;
  // Largest change of any single variable per iteration; 0 = no cap.
  double max_step = 5.0;
  // Standard deviation of the additive normal jitter applied to the start
  // point of each restart (log-normal when the variables are log-widths).
  double restart_jitter = 0.5;

  // Throws InputError on a non-positive tolerance or memory < 1.
  void validate() const;
};

enum class TerminationReason {
  kGradientTolerance,
  kLossStagnation,
  kMaxIterations,
  kLineSearchFailure,
};

std::string_view to_string(TerminationReason reason);
TerminationReason termination_reason_from_string(std::string_view name);

struct OptimResult {
  Vector theta_opt;
  double loss_opt = 0.0;
  // Loss at the start point followed by every accepted iterate.
  std::vector<double> loss_trace;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  TerminationReason termination_reason = TerminationReason::kMaxIterations;
  // Which start point produced this result (0 = the caller's init).
  int restart_index = 0;
};

struct Evaluation {
  double value = 0.0;
  Vector gradient;
};

using Objective = std::function<Evaluation(const Vector&)>;

// Unconstrained L-BFGS with Armijo backtracking.
//
// Curvature pairs with s'y <= 0 are dropped, so the implicit inverse Hessian
// stays positive definite. A failed line search is not an error: the best
// iterate found so far is returned with kLineSearchFailure.
OptimResult minimize(const Objective& objective, const Vector& init,
                     const OptimizerConfig& config);

}  // namespace agrnn
