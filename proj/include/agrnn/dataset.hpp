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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agrnn/common.hpp"

namespace agrnn {

// Per-column affine map to [0, 1] recorded from the original data.
struct ScalingRecord {
  Vector feature_min;
  Vector feature_max;
  // Columns with max == min. They are mapped to all zeros.
  std::vector<bool> constant;
  std::optional<double> target_min;
  std::optional<double> target_max;
  std::vector<std::string> warnings;

  // Maps raw feature rows into the unit cube using the recorded ranges.
  Matrix apply(const Matrix& raw) const;
  // Inverse of apply. Constant columns come back as their single value.
  Matrix invert_features(const Matrix& scaled) const;
  // Identity when target scaling was not enabled.
  Vector invert_target(const Vector& scaled) const;
};

// n x d feature matrix plus a length-n target.
//
// Immutable after construction. The constructor validates every invariant:
// n >= 1, d >= 1, finite entries, d distinct feature names, and unit-range
// columns when a scaler is attached.
class Dataset {
 public:
  Dataset(Matrix features, Vector target,
          std::vector<std::string> feature_names,
          std::optional<ScalingRecord> scaler = std::nullopt);

  // Names default to X1..Xd.
  Dataset(Matrix features, Vector target);

  const Matrix& features() const { return features_; }
  const Vector& target() const { return target_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  const std::optional<ScalingRecord>& scaler() const { return scaler_; }

  std::size_t n() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(features_.cols()); }

  // Throws InputError for unknown names.
  std::size_t feature_index(std::string_view name) const;

  // Copy keeping only the listed columns, in the given order.
  Dataset select_columns(const std::vector<std::size_t>& columns) const;
  // Copy keeping only the listed rows.
  Dataset select_rows(const std::vector<std::size_t>& rows) const;

  static std::vector<std::string> default_names(std::size_t d);

 private:
  Matrix features_;
  Vector target_;
  std::vector<std::string> names_;
  std::optional<ScalingRecord> scaler_;
};

// Rescales every feature column to [0, 1] by its own min/max (and the target
// too when scale_target is set). Requires n >= 2.
Dataset min_max_scale(const Dataset& dataset, bool scale_target = false);

}  // namespace agrnn
