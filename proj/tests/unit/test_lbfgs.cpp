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

#include <cmath>
#include <limits>
#include <random>

#include "agrnn/datagen.hpp"
#include "agrnn/grnn.hpp"
#include "agrnn/lbfgs.hpp"

namespace agrnn {
namespace {

Objective shifted_quadratic(const Vector& c) {
  return [c](const Vector& th) {
    return Evaluation{(th - c).squaredNorm(), 2.0 * (th - c)};
  };
}

Evaluation rosenbrock(const Vector& v) {
  const double a = v[0], b = v[1];
  Evaluation e;
  e.value = (1 - a) * (1 - a) + 100 * (b - a * a) * (b - a * a);
  e.gradient.resize(2);
  e.gradient << -2 * (1 - a) - 400 * a * (b - a * a), 200 * (b - a * a);
  return e;
}

void expect_monotone(const OptimResult& r) {
  ASSERT_FALSE(r.loss_trace.empty());
  for (std::size_t t = 1; t < r.loss_trace.size(); ++t) {
    EXPECT_LE(r.loss_trace[t], r.loss_trace[t - 1]) << "step " << t;
  }
  EXPECT_EQ(r.loss_opt, r.loss_trace.back());
  EXPECT_EQ(r.loss_trace.size(), static_cast<std::size_t>(r.iterations) + 1);
}

TEST(Minimize, QuadraticFromManyStarts) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    Vector c(4), init(4);
    for (auto& v : c) v = nd(rng);
    for (auto& v : init) v = nd(rng);
    const OptimResult r = minimize(shifted_quadratic(c), init, {});
    EXPECT_TRUE(r.converged);
    EXPECT_LE((r.theta_opt - c).lpNorm<Eigen::Infinity>(), 1e-8);
    expect_monotone(r);
  }
}

TEST(Minimize, StrictlyConvexQuadraticWithinDimensionPlusTwo) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int d : {2, 3, 5, 8}) {
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = nd(rng);
    const Matrix a = m * m.transpose() + Matrix::Identity(d, d);
    Vector b(d);
    for (auto& v : b) v = nd(rng);
    const Vector exact = a.llt().solve(b);
    const OptimResult r = minimize(
        [&](const Vector& x) {
          return Evaluation{0.5 * x.dot(a * x) - b.dot(x), a * x - b};
        },
        Vector::Zero(d), OptimizerConfig{});
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, d + 2) << "d = " << d;
    // |x - x*| <= |A^-1| |g| and the smallest eigenvalue of A is >= 1.
    EXPECT_LE((r.theta_opt - exact).norm(), std::sqrt(double(d)) * 1e-6);
    expect_monotone(r);
  }
}

TEST(Minimize, Rosenbrock) {
  const Vector init = (Vector(2) << -1.2, 1.0).finished();
  const OptimResult r = minimize(rosenbrock, init, {});
  EXPECT_TRUE(r.converged) << to_string(r.termination_reason);
  EXPECT_NEAR(r.theta_opt[0], 1.0, 1e-5);
  EXPECT_NEAR(r.theta_opt[1], 1.0, 1e-5);
  expect_monotone(r);
}

TEST(Minimize, LooObjectiveOnButterflySubsample) {
  const Dataset ds = min_max_scale(gen_butterfly({50, 12}));
  const LooObjective f(ds);
  const Vector init = Vector::Constant(8, std::log(0.5));
  const OptimResult r = minimize(
      [&](const Vector& th) {
        const LossReport rep = f.loss_and_gradient(th);
        return Evaluation{rep.loss, rep.gradient};
      },
      init, {});
  EXPECT_LE(r.loss_opt, f.loss(init));
  EXPECT_EQ(r.loss_trace.front(), f.loss(init));
  expect_monotone(r);
}

TEST(Minimize, DeterministicWithFixedSeed) {
  OptimizerConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 99;
  const Vector init = (Vector(2) << -1.2, 1.0).finished();
  const OptimResult a = minimize(rosenbrock, init, cfg);
  const OptimResult b = minimize(rosenbrock, init, cfg);
  EXPECT_EQ(a.theta_opt, b.theta_opt);
  EXPECT_EQ(a.loss_trace, b.loss_trace);
  EXPECT_EQ(a.restart_index, b.restart_index);
}

TEST(Minimize, RestartsNeverWorseThanSingleRun) {
  // Double well: starting in the right basin finds the shallower minimum.
  const Objective f = [](const Vector& v) {
    const double x = v[0];
    return Evaluation{(x * x - 1) * (x * x - 1) + 0.3 * x,
                      (Vector(1) << 4 * x * (x * x - 1) + 0.3).finished()};
  };
  const Vector init = Vector::Constant(1, 0.9);
  const OptimResult single = minimize(f, init, {});
  OptimizerConfig cfg;
  cfg.restarts = 8;
  cfg.restart_jitter = 1.5;
  cfg.seed = 4;
  const OptimResult multi = minimize(f, init, cfg);
  EXPECT_LE(multi.loss_opt, single.loss_opt);
  EXPECT_LT(multi.theta_opt[0], 0.0);
  EXPECT_GT(multi.restart_index, 0);
}

TEST(Minimize, MaxIterations) {
  OptimizerConfig cfg;
  cfg.max_iterations = 3;
  const OptimResult r = minimize(rosenbrock, (Vector(2) << -1.2, 1.0).finished(), cfg);
  EXPECT_EQ(r.termination_reason, TerminationReason::kMaxIterations);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_FALSE(r.converged);
}

TEST(Minimize, WrongGradientEndsInLineSearchFailure) {
  // The reported gradient points uphill, so no step can decrease f.
  const Objective f = [](const Vector& v) {
    return Evaluation{v.squaredNorm(), -2.0 * v};
  };
  OptimizerConfig cfg;
  cfg.max_backtracks = 10;
  const Vector init = Vector::Constant(2, 1.0);
  const OptimResult r = minimize(f, init, cfg);
  EXPECT_EQ(r.termination_reason, TerminationReason::kLineSearchFailure);
  EXPECT_EQ(r.theta_opt, init);
  EXPECT_EQ(r.loss_opt, 2.0);
}

TEST(Minimize, NonFiniteAtInitIsInputError) {
  const Objective f = [](const Vector& v) {
    return Evaluation{NAN, Vector::Zero(v.size())};
  };
  EXPECT_THROW(minimize(f, Vector::Zero(2), {}), InputError);
}

TEST(Minimize, NonFiniteTrialPointsAreBacktracked) {
  // Infinite outside |x| < 2; the first full step overshoots.
  const Objective f = [](const Vector& v) {
    const double x = v[0];
    if (std::abs(x) >= 2.0) return Evaluation{INFINITY, Vector::Zero(1)};
    return Evaluation{(x - 1.5) * (x - 1.5), (Vector(1) << 2 * (x - 1.5)).finished()};
  };
  const OptimResult r = minimize(f, Vector::Constant(1, -1.9), {});
  EXPECT_NEAR(r.theta_opt[0], 1.5, 1e-6);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.memory = 0;
  EXPECT_THROW(c.validate(), InputError);
  c = {};
  c.grad_tol = 0.0;
  EXPECT_THROW(c.validate(), InputError);
  c = {};
  c.rel_loss_tol = -1.0;
  EXPECT_THROW(c.validate(), InputError);
  c = {};
  c.init_sigma = 0.0;
  EXPECT_THROW(c.validate(), InputError);
  c = {};
  c.restarts = -1;
  EXPECT_THROW(c.validate(), InputError);
  c = {};
  c.init_sigma_vector = Vector::Constant(2, -1.0);
  EXPECT_THROW(c.validate(), InputError);
  c = {};
  c.max_step = -1.0;
  EXPECT_THROW(c.validate(), InputError);
}

TEST(Minimize, StepCapBoundsEveryTrialPoint) {
  // Far-away minimum: an uncapped quasi-Newton step would get there at once.
  const Vector target = (Vector(2) << 100.0, -40.0).finished();
  std::vector<Vector> points;
  const Objective f = [&](const Vector& x) {
    points.push_back(x);
    return Evaluation{0.5 * (x - target).squaredNorm(), x - target};
  };
  OptimizerConfig c;
  c.max_step = 5.0;
  const OptimResult r = minimize(f, Vector::Zero(2), c);
  EXPECT_LT((r.theta_opt - target).lpNorm<Eigen::Infinity>(), 1e-6);
  EXPECT_GE(r.iterations, 20);
  for (std::size_t k = 1; k < points.size(); ++k) {
    // Each trial is at most one capped step from some earlier point.
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < k; ++q) {
      nearest = std::min(nearest, (points[k] - points[q]).lpNorm<Eigen::Infinity>());
    }
    EXPECT_LE(nearest, 5.0 + 1e-12) << k;
  }
}

TEST(Minimize, NoCapReachesDistantMinimumQuickly) {
  const Vector target = (Vector(2) << 100.0, -40.0).finished();
  const Objective f = [&](const Vector& x) {
    return Evaluation{0.5 * (x - target).squaredNorm(), x - target};
  };
  OptimizerConfig c;
  c.max_step = 0.0;
  const OptimResult r = minimize(f, Vector::Zero(2), c);
  EXPECT_LT((r.theta_opt - target).lpNorm<Eigen::Infinity>(), 1e-6);
  EXPECT_LT(r.iterations, 20);
}

TEST(TerminationReason, StringRoundTrip) {
  for (auto r : {TerminationReason::kGradientTolerance, TerminationReason::kLossStagnation,
                 TerminationReason::kMaxIterations, TerminationReason::kLineSearchFailure}) {
    EXPECT_EQ(termination_reason_from_string(to_string(r)), r);
  }
  EXPECT_EQ(to_string(TerminationReason::kLossStagnation), "loss-stagnation");
  EXPECT_THROW(termination_reason_from_string("nope"), InputError);
}

}  // namespace
}  // namespace agrnn
