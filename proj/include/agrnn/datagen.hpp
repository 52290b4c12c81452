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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agrnn/dataset.hpp"

namespace agrnn {

// Canonical weights of the Butterfly target network. Every user that keeps
// the default gets the same dataset family.
inline constexpr std::uint64_t kButterflyWeightSeed = 20200415;

struct ButterflySpec {
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  int hidden_units = 10;
  std::uint64_t weight_seed = kButterflyWeightSeed;
};

struct FriedmanSpec {
  std::size_t n = 1000;
  std::size_t d = 30;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
};

// Fixed one-hidden-layer tanh network mapping (X1, X2) to Y.
struct ButterflyNetwork {
  std::vector<double> w1, w2, bias, out;
  double out_bias = 0.0;

  static ButterflyNetwork from_seed(std::uint64_t weight_seed, int hidden_units);
  double operator()(double x1, double x2) const;
};

// Features X1, X2, J3, J4, J5, I6, I7, I8 with
//   J3 = log10(X1 + 5), J4 = X1^2 - X2^2, J5 = X1^4 - X2^4,
//   I7 = log10(I6 + 5), I8 = I6 + I7,
// X1, X2, I6 uniform on the open interval (-5, 5) and Y the network output.
Dataset gen_butterfly(const ButterflySpec& spec);

// One Butterfly feature row from its three free inputs.
std::array<double, 8> butterfly_features(double x1, double x2, double i6);

// Friedman #1: y = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5 + eps
// with all d features uniform on [0, 1]. Features are named x1..xd.
Dataset gen_friedman(const FriedmanSpec& spec);

double friedman_response(std::span<const double> x);

struct CsvLoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

// Comma separated, mandatory header, '.' decimals. Rows with a missing or
// non-numeric cell are dropped. Every non-target column becomes a feature.
Dataset load_csv(const std::string& path, std::string_view target_column,
                 CsvLoadReport* report = nullptr);
Dataset read_csv(std::istream& in, std::string_view target_column,
                 CsvLoadReport* report = nullptr);

// Writes features followed by the target column. Values use the shortest
// representation that parses back to the same double.
void write_csv(const Dataset& dataset, std::ostream& out,
               std::string_view target_name = "Y");
void save_csv(const Dataset& dataset, const std::string& path,
              std::string_view target_name = "Y");

// Copy with one column permuted by a seeded Fisher-Yates shuffle.
Dataset shuffle_column(const Dataset& dataset, std::string_view feature,
                       std::uint64_t seed);
// Same, with the permutation supplied by the caller.
Dataset permute_column(const Dataset& dataset, std::size_t column,
                       const std::vector<std::size_t>& permutation);

std::vector<std::size_t> fisher_yates_permutation(std::size_t n,
                                                  std::uint64_t seed);

}  // namespace agrnn
