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

#include "agrnn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agrnn/datagen.hpp"

namespace agrnn {
namespace {

std::span<const double> target_span(const Dataset& ds) {
  return {ds.target().data(), ds.n()};
}

std::vector<double> column(const Dataset& ds, std::size_t j) {
  const auto col = ds.features().col(static_cast<Eigen::Index>(j));
  return {col.begin(), col.end()};
}

int bin_of(double v, double lo, double hi, int bins) {
  if (hi <= lo) return 0;
  const int b = static_cast<int>((v - lo) / (hi - lo) * bins);
  return std::clamp(b, 0, bins - 1);
}

}  // namespace

std::string_view to_string(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::kFtest:
      return "ftest";
    case ScoreMethod::kMi:
      return "mi";
    case ScoreMethod::kRrelieff:
      return "rrelieff";
  }
  return "unknown";
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("pearson: length mismatch");
  const double n = static_cast<double>(x.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  if (sxx.value() <= 0.0 || syy.value() <= 0.0) return 0.0;
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

ScoreVector ftest_scores(const Dataset& dataset) {
  if (dataset.n() < 3) throw InputError("F-test needs n >= 3");
  ScoreVector out{ScoreMethod::kFtest, Vector(dataset.d()),
                  dataset.feature_names(), {}};
  const double dof = static_cast<double>(dataset.n()) - 2.0;
  for (std::size_t j = 0; j < dataset.d(); ++j) {
    const auto x = column(dataset, j);
    const auto jj = static_cast<Eigen::Index>(j);
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
      out.scores[jj] = 0.0;
      out.warnings.push_back("constant feature '" + dataset.feature_names()[j] +
                             "' scored 0");
      continue;
    }
    const double r = pearson(x, target_span(dataset));
    const double r2 = r * r;
    const double denom = 1.0 - r2;
    double f = denom > 0.0 ? r2 * dof / denom : kPerfectCorrelationScore;
    out.scores[jj] = std::min(f, kPerfectCorrelationScore);
  }
  return out;
}

ScoreVector mi_scores(const Dataset& dataset, int bins) {
  if (bins < 1) throw InputError("bins must be >= 1");
  if (dataset.n() < static_cast<std::size_t>(bins)) {
    throw InputError("mutual information needs n >= bins");
  }
  ScoreVector out{ScoreMethod::kMi, Vector(dataset.d()), dataset.feature_names(),
                  {}};
  const Vector& y = dataset.target();
  const double ylo = y.minCoeff();
  const double yhi = y.maxCoeff();
  const auto b = static_cast<std::size_t>(bins);
  std::vector<int> ybin(dataset.n());
  std::vector<double> py(b, 0.0);
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    ybin[i] = bin_of(y[static_cast<Eigen::Index>(i)], ylo, yhi, bins);
    py[static_cast<std::size_t>(ybin[i])] += 1.0;
  }
  const double n = static_cast<double>(dataset.n());
  for (std::size_t j = 0; j < dataset.d(); ++j) {
    const auto x = column(dataset, j);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    std::vector<double> joint(b * b, 0.0);
    std::vector<double> px(b, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto xb = static_cast<std::size_t>(bin_of(x[i], *lo, *hi, bins));
      joint[xb * b + static_cast<std::size_t>(ybin[i])] += 1.0;
      px[xb] += 1.0;
    }
    CompensatedSum mi;
    for (std::size_t u = 0; u < b; ++u) {
      for (std::size_t v = 0; v < b; ++v) {
        const double c = joint[u * b + v];
        if (c == 0.0) continue;
        mi.add(c / n * std::log(c * n / (px[u] * py[v])));
      }
    }
    out.scores[static_cast<Eigen::Index>(j)] = std::max(0.0, mi.value());
  }
  return out;
}

double cfs_merit(const Vector& feature_target_corr, const Matrix& feature_corr,
                 std::span<const std::size_t> subset) {
  if (subset.empty()) return 0.0;
  const double k = static_cast<double>(subset.size());
  double rcf = 0.0;
  for (std::size_t a : subset) {
    rcf += std::abs(feature_target_corr[static_cast<Eigen::Index>(a)]);
  }
  rcf /= k;
  double rff = 0.0;
  std::size_t pairs = 0;
  for (std::size_t p = 0; p < subset.size(); ++p) {
    for (std::size_t q = p + 1; q < subset.size(); ++q) {
      rff += std::abs(feature_corr(static_cast<Eigen::Index>(subset[p]),
                                   static_cast<Eigen::Index>(subset[q])));
      ++pairs;
    }
  }
  if (pairs > 0) rff /= static_cast<double>(pairs);
  return k * rcf / std::sqrt(k + k * (k - 1.0) * rff);
}

CfsResult cfs_select(const Dataset& dataset) {
  if (dataset.n() < 3) throw InputError("CFS needs n >= 3");
  const std::size_t d = dataset.d();
  std::vector<std::vector<double>> cols(d);
  for (std::size_t j = 0; j < d; ++j) cols[j] = column(dataset, j);

  Vector rcf(static_cast<Eigen::Index>(d));
  Matrix rff = Matrix::Identity(static_cast<Eigen::Index>(d),
                                static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a) {
    rcf[static_cast<Eigen::Index>(a)] = pearson(cols[a], target_span(dataset));
    for (std::size_t b = a + 1; b < d; ++b) {
      const double r = pearson(cols[a], cols[b]);
      rff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = r;
      rff(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = r;
    }
  }

  CfsResult result;
  std::vector<bool> used(d, false);
  while (true) {
    double best_merit = result.merit;
    std::size_t best = d;
    std::vector<std::size_t> trial = result.selected;
    trial.push_back(0);
    for (std::size_t c = 0; c < d; ++c) {
      if (used[c]) continue;
      trial.back() = c;
      const double m = cfs_merit(rcf, rff, trial);
      result.visited_merits.push_back(m);
      if (m > best_merit) {
        best_merit = m;
        best = c;
      }
    }
    if (best == d) break;
    used[best] = true;
    result.selected.push_back(best);
    result.merit = best_merit;
  }
  if (result.selected.empty()) {
    result.warnings.push_back("no feature has non-zero correlation with the target");
  }
  return result;
}

ScoreVector rrelieff_scores(const Dataset& dataset, const RreliefOptions& options) {
  const std::size_t n = dataset.n();
  const std::size_t d = dataset.d();
  if (options.k_neighbors < 1) throw InputError("k_neighbors must be >= 1");
  const auto k = static_cast<std::size_t>(options.k_neighbors);
  if (k >= n) throw InputError("k_neighbors must be smaller than n");
  const std::size_t m = options.sample_size == 0 ? n : options.sample_size;
  if (m > n) throw InputError("sample_size exceeds n");

  const Dataset scaled = min_max_scale(dataset, true);
  const Matrix& x = scaled.features();
  const Vector& y = scaled.target();

  // Rank weights are the same for every instance.
  std::vector<double> rank_weight(k);
  double total = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    const double z = static_cast<double>(r + 1) / options.rank_scale;
    rank_weight[r] = std::exp(-z * z);
    total += rank_weight[r];
  }
  for (auto& w : rank_weight) w /= total;

  const std::vector<std::size_t> order = fisher_yates_permutation(n, options.seed);
  CompensatedSum n_dc;
  std::vector<CompensatedSum> n_da(d), n_dcda(d);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t i = order[s];
    std::size_t filled = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == i) continue;
      dist[filled++] = {(x.row(static_cast<Eigen::Index>(i)) -
                         x.row(static_cast<Eigen::Index>(q)))
                            .squaredNorm(),
                        q};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k),
                      dist.begin() + static_cast<long>(filled));
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t q = dist[r].second;
      const double w = rank_weight[r];
      const double dc = std::abs(y[static_cast<Eigen::Index>(i)] -
                                 y[static_cast<Eigen::Index>(q)]);
      n_dc.add(dc * w);
      for (std::size_t a = 0; a < d; ++a) {
        const double da = std::abs(x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) -
                                   x(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(a)));
        n_da[a].add(da * w);
        n_dcda[a].add(dc * da * w);
      }
    }
  }

  ScoreVector out{ScoreMethod::kRrelieff, Vector(d), dataset.feature_names(), {}};
  const double ndc = n_dc.value();
  const double rest = static_cast<double>(m) - ndc;
  if (ndc <= 0.0) out.warnings.push_back("target is constant among neighbors");
  for (std::size_t a = 0; a < d; ++a) {
    const double both = n_dcda[a].value();
    const double left = ndc > 0.0 ? both / ndc : 0.0;
    const double right = rest > 0.0 ? (n_da[a].value() - both) / rest : 0.0;
    out.scores[static_cast<Eigen::Index>(a)] = left - right;
  }
  return out;
}

std::vector<std::size_t> top_k(const ScoreVector& scores, std::size_t k) {
  const auto d = static_cast<std::size_t>(scores.scores.size());
  if (k > d) {
    throw InputError("top_k: k = " + std::to_string(k) + " exceeds d = " +
                     std::to_string(d));
  }
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores.scores[static_cast<Eigen::Index>(a)] >
           scores.scores[static_cast<Eigen::Index>(b)];
  });
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> positive_scores(const ScoreVector& scores) {
  std::vector<std::size_t> out;
  for (Eigen::Index j = 0; j < scores.scores.size(); ++j) {
    if (scores.scores[j] > 0.0) out.push_back(static_cast<std::size_t>(j));
  }
  return out;
}

}  // namespace agrnn
