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

#include "agrnn/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "agrnn/baselines.hpp"
#include "agrnn/benchmark.hpp"
#include "agrnn/datagen.hpp"
#include "agrnn/selector.hpp"
#include "agrnn/serialize.hpp"

namespace agrnn {
namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool verbose = false;
};

// Where a command gets its data: a CSV file or a built-in generator.
struct SourceOptions {
  std::string input;
  std::string target = "Y";
  std::string generate;
  std::optional<std::size_t> n;
  std::size_t d = 30;
  double noise_sd = 1.0;
  std::uint64_t weight_seed = kButterflyWeightSeed;

  void attach(CLI::App* cmd) {
    cmd->add_option("input", input, "CSV file with a header row");
    cmd->add_option("--target", target, "Target column of the CSV")
        ->capture_default_str();
    cmd->add_option("--generate", generate, "Use a synthetic dataset instead")
        ->check(CLI::IsMember({"butterfly", "friedman"}));
    cmd->add_option("--n", n, "Rows to generate");
    cmd->add_option("--d", d, "Friedman width")->capture_default_str();
    cmd->add_option("--noise-sd", noise_sd, "Friedman noise level")
        ->capture_default_str();
    cmd->add_option("--weight-seed", weight_seed, "Butterfly network weights")
        ->capture_default_str();
  }

  bool generated() const { return !generate.empty(); }

  Dataset make(std::uint64_t seed) const {
    if (generate == "butterfly") {
      ButterflySpec spec;
      if (n) spec.n = *n;
      spec.seed = seed;
      spec.weight_seed = weight_seed;
      return gen_butterfly(spec);
    }
    FriedmanSpec spec;
    if (n) spec.n = *n;
    spec.d = d;
    spec.noise_sd = noise_sd;
    spec.seed = seed;
    return gen_friedman(spec);
  }

  Dataset load(std::uint64_t seed, bool verbose, std::ostream& err) const {
    if (generated() == !input.empty()) {
      throw InputError("give either an input CSV or --generate");
    }
    if (generated()) return make(seed);
    CsvLoadReport report;
    Dataset ds = load_csv(input, target, &report);
    if (report.rows_dropped > 0) {
      err << "warning: dropped " << report.rows_dropped
          << " rows with missing or non-numeric cells\n";
    }
    if (verbose) {
      err << "loaded " << ds.n() << " rows, " << ds.d() << " features from "
          << input << "\n";
    }
    return ds;
  }

  std::string name() const {
    if (generated()) return generate;
    return std::filesystem::path(input).stem().string();
  }
};

void attach_optimizer(CLI::App* cmd, OptimizerConfig& c) {
  cmd->add_option("--memory", c.memory, "L-BFGS history length")
      ->capture_default_str();
  cmd->add_option("--max-iterations", c.max_iterations)->capture_default_str();
  cmd->add_option("--grad-tol", c.grad_tol)->capture_default_str();
  cmd->add_option("--rel-loss-tol", c.rel_loss_tol)->capture_default_str();
  cmd->add_option("--init-sigma", c.init_sigma)->capture_default_str();
  cmd->add_option("--restarts", c.restarts)->capture_default_str();
  cmd->add_option("--max-step", c.max_step, "Per-iteration cap on a log bandwidth change, 0 = none")
      ->capture_default_str();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << content;
  if (!file) throw IoError("failed writing '" + path + "'");
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

std::string expand_seed(std::string pattern, std::uint64_t seed) {
  const auto pos = pattern.find("{seed}");
  if (pos != std::string::npos) pattern.replace(pos, 6, std::to_string(seed));
  return pattern;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Anisotropic GRNN feature selection", "agrnn"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random choice")
      ->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();
  app.add_flag("--verbose,-v", global.verbose, "Progress on stderr");

  // select
  auto* select_cmd = app.add_subcommand("select", "Optimize bandwidths and select features");
  SourceOptions select_src;
  OptimizerConfig select_opt;
  double select_threshold = kDefaultThreshold;
  bool select_scale_target = false;
  std::string select_out;
  select_src.attach(select_cmd);
  attach_optimizer(select_cmd, select_opt);
  select_cmd->add_option("--threshold", select_threshold)->capture_default_str();
  select_cmd->add_flag("--scale-target", select_scale_target,
                       "Min-max scale the target too");
  select_cmd->add_option("--out", select_out, "JSON output file");

  // importance
  auto* imp_cmd = app.add_subcommand("importance", "Shuffle one feature and compare bandwidths");
  SourceOptions imp_src;
  OptimizerConfig imp_opt;
  std::string imp_feature;
  int imp_repeats = 20;
  double imp_threshold = kDefaultThreshold;
  bool imp_scale_target = false;
  std::string imp_out;
  imp_src.attach(imp_cmd);
  attach_optimizer(imp_cmd, imp_opt);
  imp_cmd->add_option("--feature", imp_feature, "Column to shuffle")->required();
  imp_cmd->add_option("--repeats", imp_repeats)->capture_default_str();
  imp_cmd->add_option("--threshold", imp_threshold)->capture_default_str();
  imp_cmd->add_flag("--scale-target", imp_scale_target);
  imp_cmd->add_option("--out", imp_out, "JSON output file");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Write a synthetic dataset as CSV");
  SourceOptions sim_src;
  std::vector<std::uint64_t> sim_seeds;
  std::string sim_out;
  sim_cmd->add_option("kind", sim_src.generate, "butterfly or friedman")
      ->required()
      ->check(CLI::IsMember({"butterfly", "friedman"}));
  sim_cmd->add_option("--n", sim_src.n, "Rows");
  sim_cmd->add_option("--d", sim_src.d, "Friedman width")->capture_default_str();
  sim_cmd->add_option("--noise-sd", sim_src.noise_sd)->capture_default_str();
  sim_cmd->add_option("--weight-seed", sim_src.weight_seed)->capture_default_str();
  sim_cmd->add_option("--seeds", sim_seeds,
                      "Several sample seeds; --out must then contain {seed}")
      ->delimiter(',');
  sim_cmd->add_option("--out", sim_out, "CSV output file");

  // baseline
  auto* base_cmd = app.add_subcommand("baseline", "Score features with a reference method");
  SourceOptions base_src;
  std::string base_method = "rrelieff";
  std::optional<std::size_t> base_k;
  int base_bins = 10;
  int base_neighbors = 10;
  std::size_t base_sample = 0;
  std::string base_out;
  base_src.attach(base_cmd);
  base_cmd->add_option("--method", base_method)
      ->capture_default_str()
      ->check(CLI::IsMember({"ftest", "mi", "cfs", "rrelieff"}));
  base_cmd->add_option("--k", base_k, "Keep the k best scores (default: positive scores)");
  base_cmd->add_option("--bins", base_bins, "Histogram bins for mi")->capture_default_str();
  base_cmd->add_option("--neighbors", base_neighbors, "RReliefF neighbors")
      ->capture_default_str();
  base_cmd->add_option("--sample-size", base_sample, "RReliefF instances, 0 = all")
      ->capture_default_str();
  base_cmd->add_option("--out", base_out, "JSON output file");

  // benchmark
  auto* bench_cmd = app.add_subcommand("benchmark", "Compare selectors with repeated splits");
  SourceOptions bench_src;
  BenchmarkConfig bench;
  std::string bench_methods = "ftest,mi,cfs,rrelieff,as";
  std::string bench_evaluator = "knn";
  std::string bench_format = "text";
  std::string bench_name;
  bool bench_raw_target = false;
  bool bench_timings = false;
  std::string bench_out;
  bench_src.attach(bench_cmd);
  attach_optimizer(bench_cmd, bench.optimizer);
  bench_cmd->add_option("--methods", bench_methods, "Comma separated subset of as,ftest,mi,cfs,rrelieff")
      ->capture_default_str();
  bench_cmd->add_option("--evaluator", bench_evaluator)
      ->capture_default_str()
      ->check(CLI::IsMember({"knn", "grnn-isotropic"}));
  bench_cmd->add_option("--repeats", bench.repeats)->capture_default_str();
  bench_cmd->add_option("--cv-folds", bench.cv_folds)->capture_default_str();
  bench_cmd->add_option("--train-fraction", bench.train_fraction)->capture_default_str();
  bench_cmd->add_option("--threshold", bench.threshold)->capture_default_str();
  bench_cmd->add_option("--mi-bins", bench.mi_bins)->capture_default_str();
  bench_cmd->add_option("--relief-neighbors", bench.relief_neighbors)->capture_default_str();
  bench_cmd->add_flag("--raw-target", bench_raw_target, "Report MSE on the unscaled target");
  bench_cmd->add_option("--dataset-name", bench_name);
  bench_cmd->add_option("--format", bench_format)
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "text-table", "json", "csv"}));
  bench_cmd->add_flag("--timings", bench_timings, "Include wall-clock timings");
  bench_cmd->add_option("--out", bench_out, "Report output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitInput;
  }

  if (select_cmd->parsed()) {
    const Dataset ds = select_src.load(global.seed, global.verbose, err);
    select_opt.seed = global.seed;
    SelectOptions opts;
    opts.scale_target = select_scale_target;
    opts.threads = global.threads;
    const SelectionResult result = select(ds, select_opt, select_threshold, opts);
    print_warnings(result.warnings, err);
    if (global.verbose) {
      err << "optimizer stopped after " << result.optim.iterations
          << " iterations (" << to_string(result.optim.termination_reason)
          << "), loss " << result.optim.loss_opt << "\n";
    }
    emit(select_out, selection_to_json(result), out);
  } else if (imp_cmd->parsed()) {
    imp_opt.seed = global.seed;
    ImportanceOptions opts;
    opts.threshold = imp_threshold;
    opts.scale_target = imp_scale_target;
    opts.threads = global.threads;
    ImportanceReport report;
    if (imp_src.generated()) {
      if (!imp_src.input.empty()) throw InputError("give either an input CSV or --generate");
      report = shuffle_importance(
          [&](std::uint64_t s) { return imp_src.make(s); }, imp_feature, imp_opt,
          imp_repeats, global.seed, opts);
    } else {
      const Dataset ds = imp_src.load(global.seed, global.verbose, err);
      report = shuffle_importance(ds, imp_feature, imp_opt, imp_repeats,
                                  global.seed, opts);
    }
    if (global.verbose) {
      err << imp_feature << (report.crossed_threshold ? " crossed" : " did not cross")
          << " the threshold\n";
    }
    emit(imp_out, importance_to_json(report), out);
  } else if (sim_cmd->parsed()) {
    if (sim_seeds.empty()) sim_seeds.push_back(global.seed);
    if (sim_seeds.size() > 1 && sim_out.find("{seed}") == std::string::npos) {
      throw InputError("--out must contain {seed} when several seeds are given");
    }
    for (std::uint64_t s : sim_seeds) {
      std::ostringstream csv;
      write_csv(sim_src.make(s), csv);
      const std::string path = expand_seed(sim_out, s);
      emit(path, csv.str(), out);
      if (global.verbose && !path.empty()) err << "wrote " << path << "\n";
    }
  } else if (base_cmd->parsed()) {
    const Dataset raw = base_src.load(global.seed, global.verbose, err);
    const Dataset ds = min_max_scale(raw, false);
    print_warnings(ds.scaler()->warnings, err);
    if (base_method == "cfs") {
      const CfsResult result = cfs_select(ds);
      print_warnings(result.warnings, err);
      emit(base_out, cfs_to_json(result, ds.feature_names()), out);
    } else {
      ScoreVector scores;
      if (base_method == "ftest") {
        scores = ftest_scores(ds);
      } else if (base_method == "mi") {
        scores = mi_scores(ds, base_bins);
      } else {
        RreliefOptions opts;
        opts.k_neighbors = base_neighbors;
        opts.sample_size = base_sample;
        opts.seed = global.seed;
        scores = rrelieff_scores(ds, opts);
      }
      print_warnings(scores.warnings, err);
      const auto kept = base_k ? top_k(scores, *base_k) : positive_scores(scores);
      emit(base_out, scores_to_json(scores, kept), out);
    }
  } else if (bench_cmd->parsed()) {
    const Dataset ds = bench_src.load(global.seed, global.verbose, err);
    bench.methods = parse_methods(bench_methods);
    bench.evaluator = evaluator_from_string(bench_evaluator);
    bench.seed = global.seed;
    bench.optimizer.seed = global.seed;
    bench.threads = global.threads;
    bench.scale_target = !bench_raw_target;
    bench.target_column = bench_src.generated() ? "Y" : bench_src.target;
    bench.dataset_name = bench_name.empty() ? bench_src.name() : bench_name;
    const BenchmarkReport report = run_benchmark(ds, bench);
    if (global.verbose) {
      for (const auto& [phase, secs] : report.timings) {
        err << phase << ": " << secs << " s\n";
      }
    }
    EmitOptions emit_opts;
    emit_opts.include_timings = bench_timings;
    emit(bench_out, emit_report(report, report_format_from_string(bench_format), emit_opts),
         out);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace agrnn
