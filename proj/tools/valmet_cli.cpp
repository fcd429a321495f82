/* Copyright 2026 The valmet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 evaluation error,
// 3 error-severity lint finding.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "valmet/aggregation.hpp"
#include "valmet/calibration.hpp"
#include "valmet/config.hpp"
#include "valmet/io.hpp"
#include "valmet/kernels/parallel.hpp"
#include "valmet/pipeline.hpp"
#include "valmet/report.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kEvaluation = 2;
constexpr int kLint = 3;

// VALMET_VERBOSITY: 0 silent, 1 warnings (default), 2 progress.
int verbosity() {
  const char* v = std::getenv("VALMET_VERBOSITY");
  if (!v || !*v) return 1;
  return std::atoi(v);
}

void log(int level, const std::string& msg) {
  if (verbosity() >= level) std::cerr << msg << '\n';
}

void report_warnings(const std::vector<valmet::PitfallWarning>& warnings) {
  if (!warnings.empty()) log(1, valmet::format_warnings(warnings));
}

int cmd_evaluate(const std::string& config_path, const std::string& out_path) {
  const auto cfg = valmet::load_config(config_path);
  log(2, "loading dataset");
  const auto ds = valmet::load_dataset(cfg);
  log(2, "evaluating " + std::to_string(ds.size()) + " items");
  const auto report = valmet::run(cfg, ds);
  report_warnings(report.warnings);
  valmet::write_file(out_path, valmet::report_to_json(report));
  log(2, "report written to " + out_path);
  return kOk;
}

int cmd_lint(const std::string& config_path) {
  const auto cfg = valmet::load_config(config_path);
  const auto ds = valmet::load_dataset(cfg);
  const auto warnings = valmet::lint_dataset(cfg, ds);
  std::cout << valmet::format_warnings(warnings);
  return valmet::has_blocking(warnings, cfg.linter) ? kLint : kOk;
}

int cmd_curves(const std::string& config_path, const std::string& out_path) {
  const auto cfg = valmet::load_config(config_path);
  const auto ds = valmet::load_dataset(cfg);
  const auto warnings = valmet::lint_dataset(cfg, ds);
  report_warnings(warnings);
  if (valmet::has_blocking(warnings, cfg.linter)) throw valmet::LintFailure(warnings);
  valmet::write_file(out_path, valmet::curves_to_json(valmet::evaluate_curves(cfg, ds)));
  return kOk;
}

std::vector<valmet::MetricRecord> load_records(const std::string& path) {
  const std::string text = valmet::read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    // A full report is one JSON document; records files hold one object per line.
    const json j = json::parse(text, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("records")) {
      return valmet::report_from_json(text).records;
    }
  }
  return valmet::records_from_jsonl(text, path);
}

int cmd_aggregate(const std::string& records_path, const std::string& spec_path,
                  const std::string& out_path) {
  const auto records = load_records(records_path);
  json spec;
  try {
    spec = json::parse(valmet::read_file(spec_path));
  } catch (const json::parse_error& e) {
    throw valmet::ParseError(spec_path + ": byte " + std::to_string(e.byte) + ": invalid JSON");
  }
  valmet::AggregateOperator op = valmet::AggregateOperator::mean;
  valmet::MissingPolicy policy = valmet::MissingPolicy::ignore;
  std::vector<std::string> grouping, strata;
  bool per_class = false;
  std::optional<std::string> rank_by;
  valmet::RankScheme scheme;
  try {
    for (const auto& [k, v] : spec.items()) {
      if (k == "operator") {
        op = valmet::aggregate_operator_from_string(v.get<std::string>());
      } else if (k == "missing_policy") {
        policy = valmet::missing_policy_from_string(v.get<std::string>());
      } else if (k == "grouping") {
        grouping = v.get<std::vector<std::string>>();
      } else if (k == "stratify_by") {
        strata = v.get<std::vector<std::string>>();
      } else if (k == "per_class") {
        per_class = v.get<bool>();
      } else if (k == "rank") {
        rank_by = v.at("by").get<std::string>();
        if (v.contains("order")) scheme.order = valmet::rank_order_from_string(v["order"].get<std::string>());
        scheme.op = op;
        if (v.contains("operator")) scheme.op = valmet::aggregate_operator_from_string(v["operator"].get<std::string>());
      } else {
        throw valmet::ParameterError("unknown key '" + k + "'");
      }
    }
  } catch (const json::exception& e) {
    throw valmet::ParseError(spec_path + ": " + e.what());
  } catch (const valmet::ParameterError& e) {
    throw valmet::ParseError(spec_path + ": " + e.what());
  }

  valmet::AggregationSection section;
  if (rank_by) {
    std::map<std::string, std::map<std::string, std::vector<valmet::MetricRecord>>> by_metric;
    std::vector<valmet::MetricRecord> rest;
    for (const auto& r : records) {
      const auto it = r.metadata.find(*rank_by);
      if (it == r.metadata.end()) {
        throw valmet::AggregationError("record of item '" + r.item_id + "' lacks ranking key '" + *rank_by + "'");
      }
      by_metric[r.metric_id][it->second].push_back(r);
    }
    for (const auto& [metric, per_algorithm] : by_metric) {
      section.rankings[metric] = valmet::rank(per_algorithm, scheme, policy);
    }
    auto grouped = grouping;
    grouped.insert(grouped.begin(), *rank_by);
    const auto agg = valmet::aggregate_records(records, op, grouped, policy, per_class, strata);
    section.aggregates = agg.aggregates;
    section.per_class = agg.per_class;
    section.stratified = agg.stratified;
  } else {
    section = valmet::aggregate_records(records, op, grouping, policy, per_class, strata);
  }
  const std::string out = valmet::aggregation_to_json(section);
  if (out_path.empty()) {
    std::cout << out;
  } else {
    valmet::write_file(out_path, out);
  }
  return kOk;
}

int cmd_simulate(int64_t n, int64_t trials, uint64_t seed, int bins) {
  const double mean = valmet::calibration_bias_sim(n, trials, seed, bins);
  const json j{{"n", n}, {"trials", trials}, {"seed", seed}, {"bins", bins}, {"mean_ece", mean}};
  std::cout << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valmet: validation metrics and pitfall linter for image analysis"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

  std::string config, out, records, spec;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a dataset and write a report");
  evaluate->add_option("--config", config, "Configuration file")->required();
  evaluate->add_option("--out", out, "Report file")->required();

  auto* lint = app.add_subcommand("lint", "Print pitfall warnings for a configuration");
  lint->add_option("--config", config, "Configuration file")->required();

  auto* curves = app.add_subcommand("curves", "Write ROC/PR/FROC curves");
  curves->add_option("--config", config, "Configuration file")->required();
  curves->add_option("--out", out, "Curve file")->required();

  auto* aggregate = app.add_subcommand("aggregate", "Aggregate metric records");
  aggregate->add_option("--records", records, "Records (JSON lines or a report)")->required();
  aggregate->add_option("--spec", spec, "Aggregation spec")->required();
  aggregate->add_option("--out", out, "Output file (default: standard output)");

  int64_t n = 0, trials = 0;
  uint64_t seed = 0;
  int bins = 10;
  auto* simulate = app.add_subcommand("simulate-calibration",
                                      "Mean ECE of a perfectly calibrated model");
  simulate->add_option("--n", n, "Sample size")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--trials", trials, "Number of trials")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Random seed")->required();
  simulate->add_option("--bins", bins, "Equal-width bins")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (threads > 0) valmet::kernels::set_num_threads(threads);

  try {
    if (*evaluate) return cmd_evaluate(config, out);
    if (*lint) return cmd_lint(config);
    if (*curves) return cmd_curves(config, out);
    if (*aggregate) return cmd_aggregate(records, spec, out);
    if (*simulate) return cmd_simulate(n, trials, seed, bins);
  } catch (const valmet::LintFailure& e) {
    std::cerr << "error: " << e.what() << '\n' << valmet::format_warnings(e.warnings());
    return kLint;
  } catch (const valmet::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEvaluation;
  }
  return kUsage;
}
