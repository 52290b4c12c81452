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

#include "agrnn/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <string>

namespace agrnn {
namespace {

struct CurvaturePair {
  Vector s;
  Vector y;
  double rho;
};

bool finite(const Evaluation& e) {
  return std::isfinite(e.value) && e.gradient.allFinite();
}

// Returns -H g using the stored pairs (oldest first).
Vector two_loop_direction(const Vector& gradient,
                          const std::deque<CurvaturePair>& pairs) {
  Vector q = gradient;
  std::vector<double> alpha(pairs.size());
  for (std::size_t idx = pairs.size(); idx-- > 0;) {
    const auto& p = pairs[idx];
    alpha[idx] = p.rho * p.s.dot(q);
    q -= alpha[idx] * p.y;
  }
  const auto& newest = pairs.back();
  const double gamma = newest.s.dot(newest.y) / newest.y.squaredNorm();
  Vector r = gamma * q;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto& p = pairs[idx];
    const double beta = p.rho * p.y.dot(r);
    r += (alpha[idx] - beta) * p.s;
  }
  return -r;
}

OptimResult run_single(const Objective& objective, const Vector& init,
                       const OptimizerConfig& config) {
  OptimResult result;
  Vector x = init;
  Evaluation current = objective(x);
  result.evaluations = 1;
  if (!finite(current)) {
    throw InputError("objective is not finite at the initial point");
  }
  if (current.gradient.size() != x.size()) {
    throw ContractError("objective gradient has the wrong dimension");
  }
  result.loss_trace.push_back(current.value);

  std::deque<CurvaturePair> pairs;
  const auto memory = static_cast<std::size_t>(config.memory);

  auto finish = [&](TerminationReason reason) {
    result.theta_opt = x;
    result.loss_opt = current.value;
    result.termination_reason = reason;
    result.converged = reason == TerminationReason::kGradientTolerance ||
                       reason == TerminationReason::kLossStagnation;
    return result;
  };

  while (true) {
    if (current.gradient.lpNorm<Eigen::Infinity>() < config.grad_tol) {
      return finish(TerminationReason::kGradientTolerance);
    }
    if (result.iterations >= config.max_iterations) {
      return finish(TerminationReason::kMaxIterations);
    }

    Vector direction;
    double step = 1.0;
    if (pairs.empty()) {
      direction = -current.gradient;
      step = std::min(1.0, 1.0 / current.gradient.norm());
    } else {
      direction = two_loop_direction(current.gradient, pairs);
    }
    double slope = current.gradient.dot(direction);
    if (!(slope < 0.0)) {
      // Not a descent direction; fall back to steepest descent.
      pairs.clear();
      direction = -current.gradient;
      step = std::min(1.0, 1.0 / current.gradient.norm());
      slope = current.gradient.dot(direction);
    }

    if (config.max_step > 0.0) {
      const double longest = step * direction.lpNorm<Eigen::Infinity>();
      if (longest > config.max_step) step *= config.max_step / longest;
    }

    bool accepted = false;
    Vector trial_x;
    Evaluation trial;
    for (int attempt = 0; attempt <= config.max_backtracks; ++attempt) {
      trial_x = x + step * direction;
      trial = objective(trial_x);
      ++result.evaluations;
      if (finite(trial) &&
          trial.value <= current.value + config.armijo_c1 * step * slope &&
          trial.value < current.value) {
        accepted = true;
        break;
      }
      step *= config.backtrack_factor;
    }
    if (!accepted) return finish(TerminationReason::kLineSearchFailure);

    CurvaturePair pair{trial_x - x, trial.gradient - current.gradient, 0.0};
    const double sy = pair.s.dot(pair.y);
    if (sy > 0.0) {
      pair.rho = 1.0 / sy;
      pairs.push_back(std::move(pair));
      if (pairs.size() > memory) pairs.pop_front();
    }

    const double previous = current.value;
    x = std::move(trial_x);
    current = std::move(trial);
    ++result.iterations;
    result.loss_trace.push_back(current.value);

    if (previous - current.value <= config.rel_loss_tol * std::abs(previous)) {
      return finish(TerminationReason::kLossStagnation);
    }
  }
}

}  // namespace

void OptimizerConfig::validate() const {
  if (memory < 1) throw InputError("optimizer memory must be >= 1");
  if (max_iterations < 1) throw InputError("max_iterations must be >= 1");
  if (!(grad_tol > 0.0)) throw InputError("grad_tol must be positive");
  if (!(rel_loss_tol > 0.0)) throw InputError("rel_loss_tol must be positive");
  if (!(init_sigma > 0.0) || !std::isfinite(init_sigma)) {
    throw InputError("init_sigma must be positive and finite");
  }
  if (init_sigma_vector) {
    for (Eigen::Index j = 0; j < init_sigma_vector->size(); ++j) {
      const double v = (*init_sigma_vector)[j];
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InputError("init_sigma_vector entries must be positive");
      }
    }
  }
  if (restarts < 0) throw InputError("restarts must be >= 0");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) {
    throw InputError("armijo_c1 must lie in (0, 1)");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw InputError("backtrack_factor must lie in (0, 1)");
  }
  if (max_backtracks < 0) throw InputError("max_backtracks must be >= 0");
  if (!(max_step >= 0.0)) throw InputError("max_step must be >= 0");
}

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kGradientTolerance:
      return "gradient-tolerance";
    case TerminationReason::kLossStagnation:
      return "loss-stagnation";
    case TerminationReason::kMaxIterations:
      return "max-iterations";
    case TerminationReason::kLineSearchFailure:
      return "line-search-failure";
  }
  return "unknown";
}

TerminationReason termination_reason_from_string(std::string_view name) {
  for (auto r : {TerminationReason::kGradientTolerance,
                 TerminationReason::kLossStagnation,
                 TerminationReason::kMaxIterations,
                 TerminationReason::kLineSearchFailure}) {
    if (to_string(r) == name) return r;
  }
  throw InputError("unknown termination reason '" + std::string(name) + "'");
}

OptimResult minimize(const Objective& objective, const Vector& init,
                     const OptimizerConfig& config) {
  config.validate();
  if (init.size() == 0) throw ContractError("minimize: empty start point");
  OptimResult best = run_single(objective, init, config);
  if (config.restarts == 0) return best;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> jitter(0.0, config.restart_jitter);
  for (int r = 1; r <= config.restarts; ++r) {
    Vector start = init;
    for (Eigen::Index j = 0; j < start.size(); ++j) start[j] += jitter(rng);
    OptimResult candidate;
    try {
      candidate = run_single(objective, start, config);
    } catch (const InputError&) {
      continue;  // jittered start landed somewhere non-finite
    }
    candidate.restart_index = r;
    if (candidate.loss_opt < best.loss_opt) best = std::move(candidate);
  }
  return best;
}

}  // namespace agrnn
