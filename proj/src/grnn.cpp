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

#include "agrnn/grnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace agrnn {
namespace {

// Weights below exp(-60) relative to the largest one are dropped: they sit
// more than 26 orders of magnitude under the leading term of every sum.
constexpr double kNegligibleLogWeight = -60.0;

// a_j = 1 / (2 sigma_j^2) from log sigma_j.
Vector inverse_two_sigma_squared(const Vector& log_sigma) {
  Vector a(log_sigma.size());
  for (Eigen::Index j = 0; j < log_sigma.size(); ++j) {
    if (!std::isfinite(log_sigma[j])) {
      throw NumericalError("non-finite log bandwidth",
                           static_cast<std::size_t>(j));
    }
    a[j] = 0.5 * std::exp(-2.0 * log_sigma[j]);
    if (!std::isfinite(a[j])) {
      throw NumericalError("bandwidth too small, kernel overflows",
                           static_cast<std::size_t>(j));
    }
  }
  return a;
}

// Kernel-weighted mean of y over rows of x (row-major, d columns), skipping
// row `skip` when it is a valid index.
double weighted_mean(const double* query, const double* x, const double* y,
                     std::size_t n, std::size_t d, const double* a,
                     std::size_t skip, std::vector<double>& scratch) {
  scratch.resize(n);
  double shift = -std::numeric_limits<double>::infinity();
  std::size_t lead = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == skip) continue;
    const double* row = x + k * d;
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = query[j] - row[j];
      acc -= a[j] * diff * diff;
    }
    scratch[k] = acc;
    if (lead == n || acc > shift) {
      shift = acc;
      lead = k;
    }
  }
  // Averaging deviations from the leading target keeps a flat target exact.
  const double base = y[lead];
  CompensatedSum total;
  CompensatedSum weighted;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == skip || scratch[k] - shift < kNegligibleLogWeight) continue;
    const double w = std::exp(scratch[k] - shift);
    total.add(w);
    weighted.add(w * (y[k] - base));
  }
  return base + weighted.value() / total.value();
}

}  // namespace

Bandwidths::Bandwidths(Vector sigma) : sigma_(std::move(sigma)) {
  if (sigma_.size() == 0) throw ContractError("bandwidths must be non-empty");
  for (Eigen::Index j = 0; j < sigma_.size(); ++j) {
    if (!(sigma_[j] > 0.0) || !std::isfinite(sigma_[j])) {
      throw ContractError("bandwidth " + std::to_string(j) +
                          " must be positive and finite");
    }
  }
}

Bandwidths Bandwidths::uniform(std::size_t d, double sigma) {
  return Bandwidths(Vector::Constant(static_cast<Eigen::Index>(d), sigma));
}

Bandwidths Bandwidths::from_log(const Vector& log_sigma) {
  return Bandwidths(log_sigma.array().exp().matrix());
}

double log_kernel(std::span<const double> query, std::span<const double> center,
                  const Bandwidths& sigma) {
  if (query.size() != center.size() || query.size() != sigma.size()) {
    throw ContractError("log_kernel: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < query.size(); ++j) {
    const double diff = query[j] - center[j];
    acc -= diff * diff / (2.0 * sigma[j] * sigma[j]);
  }
  return acc;
}

double predict(const Dataset& train, const Bandwidths& sigma,
               std::span<const double> query) {
  const Matrix& x = train.features();
  if (query.size() != train.d() || sigma.size() != train.d()) {
    throw ContractError("predict: dimension mismatch");
  }
  const Vector a = inverse_two_sigma_squared(sigma.log());
  std::vector<double> scratch;
  const double value =
      weighted_mean(query.data(), x.data(), train.target().data(), train.n(),
                    train.d(), a.data(), train.n(), scratch);
  // Rounding may step a hair outside the hull of the targets.
  return std::clamp(value, train.target().minCoeff(), train.target().maxCoeff());
}

Vector predict_batch(const Dataset& train, const Bandwidths& sigma,
                     const Matrix& queries, unsigned threads) {
  if (queries.rows() > 0 && static_cast<std::size_t>(queries.cols()) != train.d()) {
    throw ContractError("predict_batch: dimension mismatch");
  }
  Vector out(queries.rows());
  parallel_for(static_cast<std::size_t>(queries.rows()), threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t q = begin; q < end; ++q) {
                   const auto row = static_cast<Eigen::Index>(q);
                   out[row] = predict(
                       train, sigma,
                       std::span<const double>(queries.row(row).data(),
                                               train.d()));
                 }
               });
  return out;
}

double loo_loss(const Dataset& train, const Bandwidths& sigma,
                unsigned threads) {
  if (sigma.size() != train.d()) throw ContractError("loo_loss: dimension mismatch");
  return LooObjective(train, threads).loss(sigma.log());
}

LossReport loo_loss_grad(const Dataset& train, const Vector& log_sigma,
                         unsigned threads) {
  if (static_cast<std::size_t>(log_sigma.size()) != train.d()) {
    throw ContractError("loo_loss_grad: dimension mismatch");
  }
  return LooObjective(train, threads).loss_and_gradient(log_sigma);
}

LooObjective::LooObjective(const Dataset& train, unsigned threads)
    : n_(train.n()), d_(train.d()), threads_(threads) {
  if (n_ < 2) throw InputError("leave-one-out loss needs n >= 2");
  x_.assign(train.features().data(), train.features().data() + n_ * d_);
  xt_.resize(n_ * d_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < d_; ++j) xt_[j * n_ + i] = x_[i * d_ + j];
  }
  y_.assign(train.target().data(), train.target().data() + n_);
}

double LooObjective::loss(const Vector& log_sigma) const {
  return evaluate(log_sigma, false).loss;
}

LossReport LooObjective::loss_and_gradient(const Vector& log_sigma) const {
  return evaluate(log_sigma, true);
}

LossReport LooObjective::evaluate(const Vector& log_sigma,
                                  bool with_gradient) const {
  if (static_cast<std::size_t>(log_sigma.size()) != d_) {
    throw ContractError("objective: dimension mismatch");
  }
  const Vector a = inverse_two_sigma_squared(log_sigma);
  const std::size_t n = n_;
  const std::size_t d = d_;

  // Per held-out point: residual and, optionally, sum_k w_ik D_ikj (y_k -
  // yhat_i) / S_i. Reduced afterwards in index order.
  std::vector<double> residual(n);
  std::vector<double> partial(with_gradient ? n * d : 0);

  parallel_for(n, threads_, [&](std::size_t begin, std::size_t end) {
    std::vector<double> logw(n);
    std::vector<std::size_t> active;
    active.reserve(n);
    std::vector<double> coef;
    coef.reserve(n);
    for (std::size_t i = begin; i < end; ++i) {
      const double* xi = x_.data() + i * d;
      std::fill(logw.begin(), logw.end(), 0.0);
      for (std::size_t j = 0; j < d; ++j) {
        const double aj = a[static_cast<Eigen::Index>(j)];
        const double xij = xi[j];
        const double* col = xt_.data() + j * n;
        for (std::size_t k = 0; k < n; ++k) {
          const double diff = xij - col[k];
          logw[k] -= aj * diff * diff;
        }
      }
      double shift = -std::numeric_limits<double>::infinity();
      std::size_t lead = n;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i && (lead == n || logw[k] > shift)) {
          shift = logw[k];
          lead = k;
        }
      }
      if (!std::isfinite(shift)) {
        throw NumericalError("all leave-one-out kernel weights vanish", i);
      }
      const double base = y_[lead];
      CompensatedSum total;
      CompensatedSum weighted;
      active.clear();
      for (std::size_t k = 0; k < n; ++k) {
        const double rel = logw[k] - shift;
        if (k == i || rel < kNegligibleLogWeight) continue;
        const double w = std::exp(rel);
        logw[k] = w;
        active.push_back(k);
        total.add(w);
        weighted.add(w * (y_[k] - base));
      }
      const double s = total.value();
      const double yhat = base + weighted.value() / s;
      residual[i] = y_[i] - yhat;
      if (!std::isfinite(residual[i])) {
        throw NumericalError("non-finite leave-one-out prediction", i);
      }
      if (!with_gradient) continue;

      coef.clear();
      for (std::size_t k : active) coef.push_back(logw[k] * (y_[k] - yhat));
      double* out = partial.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) {
        const double xij = xi[j];
        const double* col = xt_.data() + j * n;
        CompensatedSum acc;
        for (std::size_t t = 0; t < active.size(); ++t) {
          const double diff = xij - col[active[t]];
          acc.add(coef[t] * diff * diff);
        }
        out[j] = acc.value() / s;
      }
    }
  });

  LossReport report;
  CompensatedSum loss;
  for (std::size_t i = 0; i < n; ++i) loss.add(residual[i] * residual[i]);
  report.loss = loss.value() / static_cast<double>(n);
  report.evaluations = ++evaluations_;
  if (!with_gradient) return report;

  // d loss / d theta_j = (1/n) sum_i -2 r_i * 2 a_j * partial_ij
  report.gradient.resize(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    CompensatedSum g;
    for (std::size_t i = 0; i < n; ++i) g.add(residual[i] * partial[i * d + j]);
    const double value = -4.0 * a[static_cast<Eigen::Index>(j)] * g.value() /
                         static_cast<double>(n);
    if (!std::isfinite(value)) throw NumericalError("non-finite gradient", j);
    report.gradient[static_cast<Eigen::Index>(j)] = value;
  }
  return report;
}

}  // namespace agrnn
