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

#include "agrnn/dataset.hpp"

#include <cmath>
#include <set>
#include <utility>

namespace agrnn {
namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

Matrix ScalingRecord::apply(const Matrix& raw) const {
  if (raw.cols() != feature_min.size()) {
    throw ContractError("scaling record width does not match input");
  }
  Matrix out(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    if (constant[static_cast<std::size_t>(j)]) {
      out.col(j).setZero();
      continue;
    }
    const double lo = feature_min[j];
    const double span = feature_max[j] - lo;
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      out(i, j) = (raw(i, j) - lo) / span;
    }
  }
  return out;
}

Matrix ScalingRecord::invert_features(const Matrix& scaled) const {
  if (scaled.cols() != feature_min.size()) {
    throw ContractError("scaling record width does not match input");
  }
  Matrix out(scaled.rows(), scaled.cols());
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    const double lo = feature_min[j];
    const double span = feature_max[j] - lo;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
      out(i, j) = constant[static_cast<std::size_t>(j)]
                      ? lo
                      : lo + scaled(i, j) * span;
    }
  }
  return out;
}

Vector ScalingRecord::invert_target(const Vector& scaled) const {
  if (!target_min || !target_max) return scaled;
  const double lo = *target_min;
  const double span = *target_max - lo;
  if (span == 0.0) return Vector::Constant(scaled.size(), lo);
  return (scaled.array() * span + lo).matrix();
}

Dataset::Dataset(Matrix features, Vector target,
                 std::vector<std::string> feature_names,
                 std::optional<ScalingRecord> scaler)
    : features_(std::move(features)),
      target_(std::move(target)),
      names_(std::move(feature_names)),
      scaler_(std::move(scaler)) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw InputError("dataset needs at least one row and one feature");
  }
  if (target_.size() != features_.rows()) {
    throw InputError("target length " + std::to_string(target_.size()) +
                     " does not match row count " +
                     std::to_string(features_.rows()));
  }
  if (!all_finite(features_) || !target_.allFinite()) {
    throw InputError("dataset contains non-finite values");
  }
  if (names_.size() != d()) {
    throw InputError("expected " + std::to_string(d()) +
                     " feature names, got " + std::to_string(names_.size()));
  }
  std::set<std::string> unique(names_.begin(), names_.end());
  if (unique.size() != names_.size()) {
    throw InputError("feature names must be distinct");
  }
  if (scaler_) {
    if (features_.minCoeff() < 0.0 || features_.maxCoeff() > 1.0) {
      throw InputError("scaled dataset has features outside [0, 1]");
    }
  }
}

Dataset::Dataset(Matrix features, Vector target)
    : Dataset(features, std::move(target),
              default_names(static_cast<std::size_t>(features.cols()))) {}

std::size_t Dataset::feature_index(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return j;
  }
  throw InputError("unknown feature '" + std::string(name) + "'");
}

Dataset Dataset::select_columns(const std::vector<std::size_t>& columns) const {
  Matrix sub(features_.rows(), static_cast<Eigen::Index>(columns.size()));
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] >= d()) throw ContractError("column index out of range");
    sub.col(static_cast<Eigen::Index>(c)) =
        features_.col(static_cast<Eigen::Index>(columns[c]));
    names.push_back(names_[columns[c]]);
  }
  std::optional<ScalingRecord> scaler;
  if (scaler_) {
    ScalingRecord s;
    s.feature_min.resize(static_cast<Eigen::Index>(columns.size()));
    s.feature_max.resize(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto src = static_cast<Eigen::Index>(columns[c]);
      s.feature_min[static_cast<Eigen::Index>(c)] = scaler_->feature_min[src];
      s.feature_max[static_cast<Eigen::Index>(c)] = scaler_->feature_max[src];
      s.constant.push_back(scaler_->constant[columns[c]]);
    }
    s.target_min = scaler_->target_min;
    s.target_max = scaler_->target_max;
    scaler = std::move(s);
  }
  return Dataset(std::move(sub), target_, std::move(names), std::move(scaler));
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& rows) const {
  Matrix sub(static_cast<Eigen::Index>(rows.size()), features_.cols());
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= n()) throw ContractError("row index out of range");
    sub.row(static_cast<Eigen::Index>(r)) =
        features_.row(static_cast<Eigen::Index>(rows[r]));
    y[static_cast<Eigen::Index>(r)] = target_[static_cast<Eigen::Index>(rows[r])];
  }
  return Dataset(std::move(sub), std::move(y), names_, scaler_);
}

std::vector<std::string> Dataset::default_names(std::size_t d) {
  std::vector<std::string> names;
  names.reserve(d);
  for (std::size_t j = 0; j < d; ++j) names.push_back("X" + std::to_string(j + 1));
  return names;
}

Dataset min_max_scale(const Dataset& dataset, bool scale_target) {
  if (dataset.n() < 2) throw InputError("min-max scaling needs n >= 2");
  const Matrix& x = dataset.features();
  ScalingRecord record;
  record.feature_min = x.colwise().minCoeff().transpose();
  record.feature_max = x.colwise().maxCoeff().transpose();
  record.constant.resize(dataset.d());
  for (std::size_t j = 0; j < dataset.d(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    record.constant[j] = record.feature_max[jj] == record.feature_min[jj];
    if (record.constant[j]) {
      record.warnings.push_back("constant feature '" +
                                dataset.feature_names()[j] +
                                "' mapped to zeros");
    }
  }
  Matrix scaled = record.apply(x);
  // Guard against 1 + ulp from the division.
  scaled = scaled.cwiseMax(0.0).cwiseMin(1.0);

  Vector y = dataset.target();
  if (scale_target) {
    const double lo = y.minCoeff();
    const double hi = y.maxCoeff();
    record.target_min = lo;
    record.target_max = hi;
    if (hi == lo) {
      record.warnings.push_back("constant target mapped to zeros");
      y.setZero();
    } else {
      y = ((y.array() - lo) / (hi - lo)).matrix();
    }
  }
  return Dataset(std::move(scaled), std::move(y), dataset.feature_names(),
                 std::move(record));
}

}  // namespace agrnn
