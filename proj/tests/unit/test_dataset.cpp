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

#include <limits>

#include "agrnn/datagen.hpp"
#include "agrnn/dataset.hpp"
#include "oracles.hpp"

namespace agrnn {
namespace {

Dataset column_dataset(std::vector<double> col) {
  Matrix x(static_cast<Eigen::Index>(col.size()), 1);
  Vector y(static_cast<Eigen::Index>(col.size()));
  for (std::size_t i = 0; i < col.size(); ++i) {
    x(static_cast<Eigen::Index>(i), 0) = col[i];
    y[static_cast<Eigen::Index>(i)] = static_cast<double>(i);
  }
  return Dataset(x, y);
}

TEST(MinMaxScale, MapsColumnAffinely) {
  const Dataset s = min_max_scale(column_dataset({2, 4, 6}));
  EXPECT_DOUBLE_EQ(s.features()(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(s.features()(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(s.features()(2, 0), 1.0);
  ASSERT_TRUE(s.scaler().has_value());
  EXPECT_TRUE(s.scaler()->warnings.empty());
}

TEST(MinMaxScale, ConstantColumnBecomesZerosWithWarning) {
  const Dataset s = min_max_scale(column_dataset({5, 5, 5}));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_EQ(s.features()(i, 0), 0.0);
  ASSERT_EQ(s.scaler()->warnings.size(), 1u);
  EXPECT_TRUE(s.scaler()->constant[0]);
}

TEST(MinMaxScale, ButterflyColumnFillsUnitInterval) {
  const Dataset raw = gen_butterfly({500, 3});
  const Dataset s = min_max_scale(raw);
  const auto col = s.features().col(0);
  EXPECT_EQ(col.minCoeff(), 0.0);
  EXPECT_EQ(col.maxCoeff(), 1.0);
  for (Eigen::Index j = 0; j < s.features().cols(); ++j) {
    EXPECT_GE(s.features().col(j).minCoeff(), 0.0);
    EXPECT_LE(s.features().col(j).maxCoeff(), 1.0);
  }
}

TEST(MinMaxScale, TargetOnlyScaledWhenRequested) {
  const Dataset raw = gen_friedman({50, 6, 1.0, 2});
  EXPECT_EQ(min_max_scale(raw, false).target(), raw.target());
  const Dataset s = min_max_scale(raw, true);
  EXPECT_EQ(s.target().minCoeff(), 0.0);
  EXPECT_EQ(s.target().maxCoeff(), 1.0);
}

TEST(MinMaxScale, InverseReconstructsInputs) {
  const Dataset raw = gen_butterfly({300, 11});
  const Dataset s = min_max_scale(raw, true);
  const Matrix back = s.scaler()->invert_features(s.features());
  const Vector yback = s.scaler()->invert_target(s.target());
  // Relative to the column magnitude: a scaled double carries ~1e-16 of the
  // column range, which dominates entries close to zero.
  for (Eigen::Index j = 0; j < back.cols(); ++j) {
    const double scale = raw.features().col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < back.rows(); ++i) {
      EXPECT_LE(std::abs(back(i, j) - raw.features()(i, j)) / scale, 1e-12) << i << "," << j;
    }
  }
  const double yscale = raw.target().cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < yback.size(); ++i) {
    EXPECT_LE(std::abs(yback[i] - raw.target()[i]) / yscale, 1e-12);
  }
}

TEST(MinMaxScale, ApplyMatchesStoredColumns) {
  const Dataset raw = gen_friedman({40, 7, 0.5, 4});
  const Dataset s = min_max_scale(raw);
  EXPECT_TRUE(s.scaler()->apply(raw.features()).isApprox(s.features(), 1e-15));
}

TEST(MinMaxScale, NeedsTwoRows) {
  EXPECT_THROW(min_max_scale(column_dataset({1.0})), InputError);
}

TEST(Dataset, RejectsNonFinite) {
  Matrix x(2, 1);
  x << 1.0, std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Dataset(x, Vector::Zero(2)), InputError);
  Matrix ok(2, 1);
  ok << 1.0, 2.0;
  Vector y(2);
  y << 0.0, std::numeric_limits<double>::infinity();
  EXPECT_THROW(Dataset(ok, y), InputError);
}

TEST(Dataset, RejectsBadShapesAndNames) {
  EXPECT_THROW(Dataset(Matrix(0, 1), Vector(0)), InputError);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 0), Vector::Zero(2)), InputError);
  EXPECT_THROW(Dataset(Matrix::Zero(3, 1), Vector::Zero(2)), InputError);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 2), Vector::Zero(2), {"a", "a"}), InputError);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 2), Vector::Zero(2), {"a"}), InputError);
}

TEST(Dataset, ScalerRequiresUnitRange) {
  ScalingRecord rec;
  rec.feature_min = Vector::Zero(1);
  rec.feature_max = Vector::Ones(1);
  rec.constant = {false};
  Matrix x(2, 1);
  x << 0.0, 1.5;
  EXPECT_THROW(Dataset(x, Vector::Zero(2), {"a"}, rec), InputError);
}

TEST(Dataset, DefaultNamesAndLookup) {
  const Dataset ds(Matrix::Zero(2, 3), Vector::Zero(2));
  EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"X1", "X2", "X3"}));
  EXPECT_EQ(ds.feature_index("X3"), 2u);
  EXPECT_THROW(ds.feature_index("nope"), InputError);
}

TEST(Dataset, SelectColumnsAndRows) {
  const Dataset ds = gen_friedman({10, 6, 0.0, 1});
  const Dataset c = ds.select_columns({4, 0});
  EXPECT_EQ(c.feature_names(), (std::vector<std::string>{"x5", "x1"}));
  EXPECT_EQ(c.features().col(0), ds.features().col(4));
  const Dataset r = ds.select_rows({9, 2});
  EXPECT_EQ(r.n(), 2u);
  EXPECT_EQ(r.target()[0], ds.target()[9]);
  EXPECT_EQ(r.features().row(1), ds.features().row(2));
}

}  // namespace
}  // namespace agrnn
