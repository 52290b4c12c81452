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

#include <atomic>
#include <cstddef>
#include <span>

#include "agrnn/common.hpp"
#include "agrnn/dataset.hpp"

namespace agrnn {

// One strictly positive, finite Gaussian width per feature.
class Bandwidths {
 public:
  explicit Bandwidths(Vector sigma);
  // All d entries equal to `sigma` (the isotropic kernel).
  static Bandwidths uniform(std::size_t d, double sigma);
  // sigma_j = exp(log_sigma_j).
  static Bandwidths from_log(const Vector& log_sigma);

  const Vector& values() const { return sigma_; }
  std::size_t size() const { return static_cast<std::size_t>(sigma_.size()); }
  double operator[](std::size_t j) const {
    return sigma_[static_cast<Eigen::Index>(j)];
  }
  Vector log() const { return sigma_.array().log().matrix(); }

 private:
  Vector sigma_;
};

struct LossReport {
  // Leave-one-out mean squared error.
  double loss = 0.0;
  // d loss / d log sigma_j.
  Vector gradient;
  std::size_t evaluations = 0;
};

// sum_j -(query_j - center_j)^2 / (2 sigma_j^2). Always <= 0.
double log_kernel(std::span<const double> query, std::span<const double> center,
                  const Bandwidths& sigma);

// Nadaraya-Watson estimate at `query`: kernel-weighted mean of the targets.
// Weights are shifted by the largest log-kernel so at least one equals 1.
double predict(const Dataset& train, const Bandwidths& sigma,
               std::span<const double> query);

Vector predict_batch(const Dataset& train, const Bandwidths& sigma,
                     const Matrix& queries, unsigned threads = 1);

double loo_loss(const Dataset& train, const Bandwidths& sigma,
                unsigned threads = 1);

// Loss and exact gradient with respect to log-bandwidths.
LossReport loo_loss_grad(const Dataset& train, const Vector& log_sigma,
                         unsigned threads = 1);

// Leave-one-out objective bound to one training set, reusable across many
// evaluations (the optimizer calls it once per trial point).
//
// For held-out point i, with a_j = 1 / (2 sigma_j^2) and
// D_ikj = (x_ij - x_kj)^2:
//   l_ik  = -sum_j a_j D_ikj,   w_ik = exp(l_ik - max_k l_ik)
//   yhat_i = sum_{k != i} w_ik y_k / sum_{k != i} w_ik
//   d yhat_i / d log sigma_j = 2 a_j sum_k w_ik D_ikj (y_k - yhat_i) / S_i
// The shift cancels in the ratio so it does not enter the derivative.
class LooObjective {
 public:
  explicit LooObjective(const Dataset& train, unsigned threads = 1);

  double loss(const Vector& log_sigma) const;
  LossReport loss_and_gradient(const Vector& log_sigma) const;

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  std::size_t evaluations() const { return evaluations_; }

 private:
  LossReport evaluate(const Vector& log_sigma, bool with_gradient) const;

  std::size_t n_;
  std::size_t d_;
  std::vector<double> x_;   // row-major copy
  std::vector<double> xt_;  // column-major copy
  std::vector<double> y_;
  unsigned threads_;
  mutable std::atomic<std::size_t> evaluations_{0};
};

}  // namespace agrnn
