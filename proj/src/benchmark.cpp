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

#include "agrnn/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "agrnn/baselines.hpp"
#include "agrnn/datagen.hpp"
#include "agrnn/grnn.hpp"
#include "agrnn/selector.hpp"
#include "json.hpp"

namespace agrnn {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix gather(const Matrix& x, std::span<const std::size_t> rows,
              std::span<const std::size_t> cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          x(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    }
  }
  return out;
}

Vector gather(const Vector& y, std::span<const std::size_t> rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out[static_cast<Eigen::Index>(r)] = y[static_cast<Eigen::Index>(rows[r])];
  }
  return out;
}

struct RepeatOutcome {
  double mse = 0.0;
  double param = 0.0;
};

// Tunes the grid by CV on the training part, refits, scores the test part.
RepeatOutcome evaluate_repeat(const Evaluator& evaluator, const Matrix& x,
                              const Vector& y, std::span<const std::size_t> cols,
                              const SplitPlan& plan, int repeat,
                              const std::string& label,
                              const FitObserver& observer) {
  const std::vector<double> grid = evaluator.grid();
  std::vector<CompensatedSum> cv_error(grid.size());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    std::vector<std::size_t> fit_rows;
    for (std::size_t g = 0; g < plan.folds.size(); ++g) {
      if (g != f) fit_rows.insert(fit_rows.end(), plan.folds[g].begin(), plan.folds[g].end());
    }
    const auto& held = plan.folds[f];
    if (observer) observer({label, repeat, static_cast<int>(f), fit_rows, held});
    const Matrix pred = evaluator.predict_grid(gather(x, fit_rows, cols),
                                               gather(y, fit_rows),
                                               gather(x, held, cols));
    for (std::size_t r = 0; r < held.size(); ++r) {
      const double truth = y[static_cast<Eigen::Index>(held[r])];
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double e = pred(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(g)) - truth;
        cv_error[g].add(e * e);
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (cv_error[g].value() < cv_error[best].value()) best = g;
  }

  if (observer) observer({label, repeat, -1, plan.train, plan.test});
  const Matrix pred = evaluator.predict_grid(gather(x, plan.train, cols),
                                             gather(y, plan.train),
                                             gather(x, plan.test, cols));
  CompensatedSum sse;
  for (std::size_t r = 0; r < plan.test.size(); ++r) {
    const double e = pred(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(best)) -
                     y[static_cast<Eigen::Index>(plan.test[r])];
    sse.add(e * e);
  }
  return {sse.value() / static_cast<double>(plan.test.size()), grid[best]};
}

MethodReport evaluate_subset(const std::string& label,
                             const std::vector<std::size_t>& subset,
                             bool zero_selection, const Dataset& scaled,
                             const std::vector<SplitPlan>& plans,
                             const Evaluator& evaluator, unsigned threads,
                             const FitObserver& observer) {
  MethodReport report;
  report.method = label;
  report.zero_selection = zero_selection;
  for (std::size_t j : subset) report.selected.push_back(scaled.feature_names()[j]);
  report.count = subset.size();

  std::vector<std::size_t> cols = subset;
  if (cols.empty()) {
    cols.resize(scaled.d());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
  }
  std::vector<RepeatOutcome> outcomes(plans.size());
  parallel_for(plans.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      outcomes[r] = evaluate_repeat(evaluator, scaled.features(), scaled.target(),
                                    cols, plans[r], static_cast<int>(r), label,
                                    observer);
    }
  });
  CompensatedSum sum;
  for (const auto& o : outcomes) {
    report.mse.push_back(o.mse);
    report.chosen_param.push_back(o.param);
    sum.add(o.mse);
  }
  const double count = static_cast<double>(outcomes.size());
  report.mse_mean = sum.value() / count;
  if (outcomes.size() > 1) {
    CompensatedSum sq;
    for (double m : report.mse) sq.add((m - report.mse_mean) * (m - report.mse_mean));
    report.mse_std = std::sqrt(sq.value() / (count - 1.0));
  }
  return report;
}

json optimizer_to_json(const OptimizerConfig& c) {
  json j{{"memory", c.memory},
         {"max_iterations", c.max_iterations},
         {"grad_tol", c.grad_tol},
         {"rel_loss_tol", c.rel_loss_tol},
         {"init_sigma", c.init_sigma},
         {"restarts", c.restarts},
         {"seed", c.seed},
         {"armijo_c1", c.armijo_c1},
         {"backtrack_factor", c.backtrack_factor},
         {"max_backtracks", c.max_backtracks},
         {"restart_jitter", c.restart_jitter}};
  if (c.init_sigma_vector) {
    j["init_sigma_vector"] = std::vector<double>(c.init_sigma_vector->begin(),
                                                 c.init_sigma_vector->end());
  }
  return j;
}

OptimizerConfig optimizer_from_json(const json& j) {
  OptimizerConfig c;
  c.memory = j.at("memory").get<int>();
  c.max_iterations = j.at("max_iterations").get<int>();
  c.grad_tol = j.at("grad_tol").get<double>();
  c.rel_loss_tol = j.at("rel_loss_tol").get<double>();
  c.init_sigma = j.at("init_sigma").get<double>();
  c.restarts = j.at("restarts").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.armijo_c1 = j.at("armijo_c1").get<double>();
  c.backtrack_factor = j.at("backtrack_factor").get<double>();
  c.max_backtracks = j.at("max_backtracks").get<int>();
  c.restart_jitter = j.at("restart_jitter").get<double>();
  if (j.contains("init_sigma_vector")) {
    const auto v = j.at("init_sigma_vector").get<std::vector<double>>();
    c.init_sigma_vector = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  return c;
}

json config_to_json(const BenchmarkConfig& c) {
  std::vector<std::string> methods;
  for (Method m : c.methods) methods.emplace_back(to_string(m));
  return json{{"methods", methods},
              {"evaluator", std::string(to_string(c.evaluator))},
              {"train_fraction", c.train_fraction},
              {"cv_folds", c.cv_folds},
              {"repeats", c.repeats},
              {"seed", c.seed},
              {"target_column", c.target_column},
              {"dataset_name", c.dataset_name},
              {"scale_target", c.scale_target},
              {"threshold", c.threshold},
              {"mi_bins", c.mi_bins},
              {"relief_neighbors", c.relief_neighbors},
              {"optimizer", optimizer_to_json(c.optimizer)}};
}

BenchmarkConfig config_from_json(const json& j) {
  BenchmarkConfig c;
  c.methods.clear();
  for (const auto& m : j.at("methods")) c.methods.push_back(method_from_string(m.get<std::string>()));
  c.evaluator = evaluator_from_string(j.at("evaluator").get<std::string>());
  c.train_fraction = j.at("train_fraction").get<double>();
  c.cv_folds = j.at("cv_folds").get<int>();
  c.repeats = j.at("repeats").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.target_column = j.at("target_column").get<std::string>();
  c.dataset_name = j.at("dataset_name").get<std::string>();
  c.scale_target = j.at("scale_target").get<bool>();
  c.threshold = j.at("threshold").get<double>();
  c.mi_bins = j.at("mi_bins").get<int>();
  c.relief_neighbors = j.at("relief_neighbors").get<int>();
  c.optimizer = optimizer_from_json(j.at("optimizer"));
  return c;
}

json method_to_json(const MethodReport& m) {
  return json{{"method", m.method},
              {"count", m.count},
              {"selected", m.selected},
              {"zero_selection", m.zero_selection},
              {"mse_mean", m.mse_mean},
              {"mse_std", m.mse_std},
              {"mse", m.mse},
              {"chosen_param", m.chosen_param}};
}

MethodReport method_from_json(const json& j) {
  MethodReport m;
  m.method = j.at("method").get<std::string>();
  m.count = j.at("count").get<std::size_t>();
  m.selected = j.at("selected").get<std::vector<std::string>>();
  m.zero_selection = j.at("zero_selection").get<bool>();
  m.mse_mean = j.at("mse_mean").get<double>();
  m.mse_std = j.at("mse_std").get<double>();
  m.mse = j.at("mse").get<std::vector<double>>();
  m.chosen_param = j.at("chosen_param").get<std::vector<double>>();
  return m;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kAs:
      return "as";
    case Method::kFtest:
      return "ftest";
    case Method::kMi:
      return "mi";
    case Method::kCfs:
      return "cfs";
    case Method::kRrelieff:
      return "rrelieff";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::kAs, Method::kFtest, Method::kMi, Method::kCfs,
                   Method::kRrelieff}) {
    if (to_string(m) == name) return m;
  }
  throw InputError("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(EvaluatorKind kind) {
  return kind == EvaluatorKind::kKnn ? "knn" : "grnn-isotropic";
}

EvaluatorKind evaluator_from_string(std::string_view name) {
  if (name == "knn") return EvaluatorKind::kKnn;
  if (name == "grnn-isotropic") return EvaluatorKind::kGrnnIsotropic;
  throw InputError("unknown evaluator '" + std::string(name) + "'");
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto item = list.substr(start, comma == std::string_view::npos
                                             ? std::string_view::npos
                                             : comma - start);
    if (!item.empty()) {
      const Method m = method_from_string(item);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void BenchmarkConfig::validate(std::size_t n) const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InputError("train_fraction must lie in (0, 1)");
  }
  if (cv_folds < 2) throw InputError("cv_folds must be >= 2");
  if (repeats < 1) throw InputError("repeats must be >= 1");
  const auto train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (train < static_cast<std::size_t>(cv_folds) || train >= n) {
    throw InputError("split leaves " + std::to_string(train) +
                     " training rows; need at least cv_folds and one test row");
  }
  if (!(threshold > 0.0)) throw InputError("threshold must be positive");
  if (mi_bins < 1) throw InputError("mi_bins must be >= 1");
  if (relief_neighbors < 1) throw InputError("relief_neighbors must be >= 1");
  optimizer.validate();
}

Matrix KnnEvaluator::predict_grid(const Matrix& train_x, const Vector& train_y,
                                  const Matrix& query_x) const {
  const std::vector<double> ks = grid();
  const std::size_t n = static_cast<std::size_t>(train_x.rows());
  const std::size_t kmax = std::min<std::size_t>(n, 9);
  Matrix out(query_x.rows(), static_cast<Eigen::Index>(ks.size()));
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (Eigen::Index q = 0; q < query_x.rows(); ++q) {
    for (std::size_t i = 0; i < n; ++i) {
      dist[i] = {(train_x.row(static_cast<Eigen::Index>(i)) - query_x.row(q)).squaredNorm(), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(kmax), dist.end());
    double running = 0.0;
    std::size_t used = 0;
    for (std::size_t g = 0; g < ks.size(); ++g) {
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(ks[g]), kmax);
      while (used < k) running += train_y[static_cast<Eigen::Index>(dist[used++].second)];
      out(q, static_cast<Eigen::Index>(g)) = running / static_cast<double>(k);
    }
  }
  return out;
}

std::vector<double> IsotropicGrnnEvaluator::grid() const {
  std::vector<double> g(10);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = 0.02 * std::pow(100.0, static_cast<double>(i) / 9.0);
  }
  return g;
}

Matrix IsotropicGrnnEvaluator::predict_grid(const Matrix& train_x,
                                            const Vector& train_y,
                                            const Matrix& query_x) const {
  const std::vector<double> sigmas = grid();
  const Dataset train(train_x, train_y);
  Matrix out(query_x.rows(), static_cast<Eigen::Index>(sigmas.size()));
  for (std::size_t g = 0; g < sigmas.size(); ++g) {
    out.col(static_cast<Eigen::Index>(g)) =
        predict_batch(train, Bandwidths::uniform(train.d(), sigmas[g]), query_x);
  }
  return out;
}

std::unique_ptr<Evaluator> make_evaluator(EvaluatorKind kind) {
  if (kind == EvaluatorKind::kKnn) return std::make_unique<KnnEvaluator>();
  return std::make_unique<IsotropicGrnnEvaluator>();
}

SplitPlan make_split(std::size_t n, double train_fraction, int cv_folds,
                     std::uint64_t seed) {
  const std::vector<std::size_t> perm = fisher_yates_permutation(n, seed);
  const auto train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  SplitPlan plan;
  plan.train.assign(perm.begin(), perm.begin() + static_cast<long>(train));
  plan.test.assign(perm.begin() + static_cast<long>(train), perm.end());
  const auto folds = static_cast<std::size_t>(cv_folds);
  plan.folds.resize(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t begin = f * train / folds;
    const std::size_t end = (f + 1) * train / folds;
    plan.folds[f].assign(plan.train.begin() + static_cast<long>(begin),
                         plan.train.begin() + static_cast<long>(end));
  }
  return plan;
}

BenchmarkReport run_benchmark(const Dataset& dataset, const BenchmarkConfig& config,
                              const Evaluator* evaluator,
                              const FitObserver& observer) {
  config.validate(dataset.n());
  std::unique_ptr<Evaluator> owned;
  if (!evaluator) {
    owned = make_evaluator(config.evaluator);
    evaluator = owned.get();
  }

  BenchmarkReport report;
  report.dataset = config.dataset_name;
  report.n = dataset.n();
  report.d = dataset.d();
  report.seed = config.seed;
  report.config = config;
  report.notes = {
      "feature selection runs once on the full dataset before the repeated splits",
      "cross-validation tunes the evaluator hyperparameter on the training part",
      "ftest and mi keep as many features as rrelieff selects",
  };
  if (config.methods.empty()) return report;

  auto start = Clock::now();
  const Dataset scaled = min_max_scale(dataset, config.scale_target);
  std::vector<SplitPlan> plans;
  for (int r = 0; r < config.repeats; ++r) {
    plans.push_back(make_split(dataset.n(), config.train_fraction, config.cv_folds,
                               derive_seed(config.seed, static_cast<std::uint64_t>(r))));
  }
  report.timings["prepare"] = seconds_since(start);

  // ReliefF is needed for the F-test / MI feature count even when not listed.
  std::optional<ScoreVector> relief;
  auto relief_scores = [&]() -> const ScoreVector& {
    if (!relief) {
      const auto t = Clock::now();
      RreliefOptions opts;
      opts.k_neighbors = std::min<int>(config.relief_neighbors,
                                       static_cast<int>(dataset.n()) - 1);
      opts.seed = config.seed;
      relief = rrelieff_scores(scaled, opts);
      report.timings["select:rrelieff"] = seconds_since(t);
    }
    return *relief;
  };

  for (Method method : config.methods) {
    const std::string label(to_string(method));
    auto t = Clock::now();
    std::vector<std::size_t> subset;
    switch (method) {
      case Method::kAs: {
        SelectOptions opts;
        opts.scale_target = false;  // already scaled when requested
        opts.threads = config.threads;
        subset = select(scaled, config.optimizer, config.threshold, opts).selected_indices();
        break;
      }
      case Method::kFtest:
        subset = top_k(ftest_scores(scaled), positive_scores(relief_scores()).size());
        break;
      case Method::kMi:
        subset = top_k(mi_scores(scaled, config.mi_bins),
                       positive_scores(relief_scores()).size());
        break;
      case Method::kCfs:
        subset = cfs_select(scaled).selected;
        break;
      case Method::kRrelieff:
        subset = positive_scores(relief_scores());
        break;
    }
    std::sort(subset.begin(), subset.end());
    if (method != Method::kRrelieff) report.timings["select:" + label] = seconds_since(t);

    t = Clock::now();
    report.methods.push_back(evaluate_subset(label, subset, subset.empty(), scaled,
                                             plans, *evaluator, config.threads,
                                             observer));
    report.timings["evaluate:" + label] = seconds_since(t);
  }

  auto t = Clock::now();
  std::vector<std::size_t> all(dataset.d());
  std::iota(all.begin(), all.end(), std::size_t{0});
  report.full_features = evaluate_subset("all", all, false, scaled, plans,
                                         *evaluator, config.threads, observer);
  report.timings["evaluate:all"] = seconds_since(t);
  return report;
}

bool same_results(const BenchmarkReport& a, const BenchmarkReport& b) {
  return a.schema_version == b.schema_version && a.dataset == b.dataset &&
         a.n == b.n && a.d == b.d && a.seed == b.seed &&
         config_to_json(a.config) == config_to_json(b.config) &&
         a.methods == b.methods && a.full_features == b.full_features &&
         a.notes == b.notes;
}

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "text" || name == "text-table") return ReportFormat::kText;
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw InputError("unknown report format '" + std::string(name) + "'");
}

std::string format_mse(double mean, double std) {
  char buf[64];
  if (std >= 1e-3 || std == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.3f(±%.3f)", mean, std);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3f(±%.2e)", mean, std);
  }
  return buf;
}

std::string emit_report(const BenchmarkReport& report, ReportFormat format,
                        const EmitOptions& options) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kText: {
      char line[256];
      std::snprintf(line, sizeof(line), "%-10s %4s  %s\n", "Method", "#", "MSE");
      out << line;
      auto row = [&](const MethodReport& m) {
        std::snprintf(line, sizeof(line), "%-10s %4zu  %s%s\n", m.method.c_str(),
                      m.count, format_mse(m.mse_mean, m.mse_std).c_str(),
                      m.zero_selection ? "  [zero selection: all features]" : "");
        out << line;
      };
      for (const auto& m : report.methods) row(m);
      if (report.full_features && !report.methods.empty()) row(*report.full_features);
      break;
    }
    case ReportFormat::kJson: {
      json j;
      j["schema_version"] = report.schema_version;
      j["dataset"] = {{"name", report.dataset}, {"n", report.n}, {"d", report.d}};
      j["seed"] = report.seed;
      j["config"] = config_to_json(report.config);
      j["methods"] = json::array();
      for (const auto& m : report.methods) j["methods"].push_back(method_to_json(m));
      j["full_features"] = report.full_features ? method_to_json(*report.full_features)
                                                : json(nullptr);
      j["notes"] = report.notes;
      if (options.include_timings) j["timings"] = report.timings;
      out << j.dump(2) << '\n';
      break;
    }
    case ReportFormat::kCsv: {
      out << "dataset,method,count,selected,zero_selection,mse_mean,mse_std\n";
      auto row = [&](const MethodReport& m) {
        out << csv_escape(report.dataset) << ',' << m.method << ',' << m.count << ','
            << csv_escape(join(m.selected, ';')) << ','
            << (m.zero_selection ? "true" : "false") << ',' << json(m.mse_mean).dump()
            << ',' << json(m.mse_std).dump() << '\n';
      };
      for (const auto& m : report.methods) row(m);
      if (report.full_features && !report.methods.empty()) row(*report.full_features);
      break;
    }
  }
  return out.str();
}

BenchmarkReport parse_report_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid report JSON: ") + e.what());
  }
  try {
    BenchmarkReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw InputError("unsupported report schema_version " +
                       std::to_string(r.schema_version));
    }
    r.dataset = j.at("dataset").at("name").get<std::string>();
    r.n = j.at("dataset").at("n").get<std::size_t>();
    r.d = j.at("dataset").at("d").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = config_from_json(j.at("config"));
    for (const auto& m : j.at("methods")) r.methods.push_back(method_from_json(m));
    if (!j.at("full_features").is_null()) {
      r.full_features = method_from_json(j.at("full_features"));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("timings")) r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace agrnn
