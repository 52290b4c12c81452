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

#include "agrnn/datagen.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace agrnn {
namespace {

// Uniform on the open interval (lo, hi).
double open_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  double v = dist(rng);
  while (v <= lo) v = dist(rng);
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

void write_number(std::ostream& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}

}  // namespace

ButterflyNetwork ButterflyNetwork::from_seed(std::uint64_t weight_seed,
                                             int hidden_units) {
  if (hidden_units < 1) throw InputError("hidden_units must be >= 1");
  std::mt19937_64 rng(weight_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ButterflyNetwork net;
  for (int k = 0; k < hidden_units; ++k) {
    net.w1.push_back(normal(rng));
    net.w2.push_back(normal(rng));
    net.bias.push_back(normal(rng));
    net.out.push_back(normal(rng));
  }
  net.out_bias = normal(rng);
  return net;
}

double ButterflyNetwork::operator()(double x1, double x2) const {
  double y = out_bias;
  for (std::size_t k = 0; k < out.size(); ++k) {
    y += out[k] * std::tanh(w1[k] * x1 + w2[k] * x2 + bias[k]);
  }
  return y;
}

std::array<double, 8> butterfly_features(double x1, double x2, double i6) {
  const double i7 = std::log10(i6 + 5.0);
  return {x1,
          x2,
          std::log10(x1 + 5.0),
          x1 * x1 - x2 * x2,
          std::pow(x1, 4) - std::pow(x2, 4),
          i6,
          i7,
          i6 + i7};
}

Dataset gen_butterfly(const ButterflySpec& spec) {
  if (spec.n < 2) throw InputError("butterfly needs n >= 2");
  const ButterflyNetwork net =
      ButterflyNetwork::from_seed(spec.weight_seed, spec.hidden_units);
  std::mt19937_64 rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.n);
  Matrix x(n, 8);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x1 = open_uniform(rng, -5.0, 5.0);
    const double x2 = open_uniform(rng, -5.0, 5.0);
    const double i6 = open_uniform(rng, -5.0, 5.0);
    const auto row = butterfly_features(x1, x2, i6);
    for (Eigen::Index j = 0; j < 8; ++j) x(i, j) = row[static_cast<std::size_t>(j)];
    y[i] = net(x1, x2);
  }
  return Dataset(std::move(x), std::move(y),
                 {"X1", "X2", "J3", "J4", "J5", "I6", "I7", "I8"});
}

double friedman_response(std::span<const double> x) {
  if (x.size() < 5) throw ContractError("friedman_response needs 5 inputs");
  const double pi = std::numbers::pi;
  return 10.0 * std::sin(pi * x[0] * x[1]) +
         20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] + 5.0 * x[4];
}

Dataset gen_friedman(const FriedmanSpec& spec) {
  if (spec.d < 5) throw InputError("friedman needs d >= 5");
  if (spec.n < 2) throw InputError("friedman needs n >= 2");
  if (!(spec.noise_sd >= 0.0)) throw InputError("noise_sd must be >= 0");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);
  Matrix x(n, d);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = unit(rng);
    const double eps = noise(rng);
    y[i] = friedman_response(std::span<const double>(x.row(i).data(), 5)) +
           spec.noise_sd * eps;
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < spec.d; ++j) names.push_back("x" + std::to_string(j + 1));
  return Dataset(std::move(x), std::move(y), std::move(names));
}

Dataset read_csv(std::istream& in, std::string_view target_column,
                 CsvLoadReport* report) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw InputError("CSV input is empty");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  std::vector<std::string> header;
  for (auto f : split_fields(line)) header.push_back(unquote(f));
  std::size_t target = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == target_column) target = c;
  }
  if (target == header.size()) {
    throw InputError("target column '" + std::string(target_column) +
                     "' not found in CSV header");
  }
  if (header.size() < 2) throw InputError("CSV needs at least one feature column");

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != target) names.push_back(header[c]);
  }

  std::vector<double> values;
  std::vector<double> targets;
  CsvLoadReport stats;
  std::vector<double> row(header.size());
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++stats.rows_read;
    const auto fields = split_fields(line);
    bool ok = fields.size() == header.size();
    for (std::size_t c = 0; ok && c < fields.size(); ++c) {
      ok = parse_number(fields[c], row[c]);
    }
    if (!ok) {
      ++stats.rows_dropped;
      continue;
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == target) {
        targets.push_back(row[c]);
      } else {
        values.push_back(row[c]);
      }
    }
  }
  if (report) *report = stats;
  if (targets.empty()) {
    throw InputError("CSV has no usable rows (" +
                     std::to_string(stats.rows_dropped) + " dropped)");
  }
  const auto n = static_cast<Eigen::Index>(targets.size());
  const auto d = static_cast<Eigen::Index>(names.size());
  Matrix x = Eigen::Map<const Matrix>(values.data(), n, d);
  Vector y = Eigen::Map<const Vector>(targets.data(), n);
  return Dataset(std::move(x), std::move(y), std::move(names));
}

Dataset load_csv(const std::string& path, std::string_view target_column,
                 CsvLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in, target_column, report);
}

void write_csv(const Dataset& dataset, std::ostream& out,
               std::string_view target_name) {
  for (const auto& name : dataset.feature_names()) out << name << ',';
  out << target_name << '\n';
  const Matrix& x = dataset.features();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      write_number(out, x(i, j));
      out << ',';
    }
    write_number(out, dataset.target()[i]);
    out << '\n';
  }
}

void save_csv(const Dataset& dataset, const std::string& path,
              std::string_view target_name) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_csv(dataset, out, target_name);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<std::size_t> fisher_yates_permutation(std::size_t n,
                                                  std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  return perm;
}

Dataset permute_column(const Dataset& dataset, std::size_t column,
                       const std::vector<std::size_t>& permutation) {
  if (column >= dataset.d()) throw ContractError("column index out of range");
  if (permutation.size() != dataset.n()) {
    throw ContractError("permutation length does not match row count");
  }
  Matrix x = dataset.features();
  const auto col = static_cast<Eigen::Index>(column);
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    x(static_cast<Eigen::Index>(i), col) =
        dataset.features()(static_cast<Eigen::Index>(permutation[i]), col);
  }
  return Dataset(std::move(x), dataset.target(), dataset.feature_names(),
                 dataset.scaler());
}

Dataset shuffle_column(const Dataset& dataset, std::string_view feature,
                       std::uint64_t seed) {
  const std::size_t column = dataset.feature_index(feature);
  return permute_column(dataset, column,
                        fisher_yates_permutation(dataset.n(), seed));
}

}  // namespace agrnn
