// Copyright 2026 The flowswarm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowswarm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "flowswarm/allocator.hpp"
#include "flowswarm/definitions.hpp"
#include "flowswarm/error.hpp"
#include "flowswarm/metrics.hpp"
#include "flowswarm/swarmsim.hpp"
#include "json.hpp"

namespace flowswarm::cli {
namespace {

namespace fs = std::filesystem;

bool ends_with(const std::string& text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

ExperimentSpec load_experiment(const fs::path& path) {
  return parse_edf(read_text_file(path), directory_resolver(path.parent_path()));
}

ClusterSpec load_cluster(const fs::path& path) {
  return parse_cluster(read_text_file(path), path.parent_path());
}

int cmd_validate(const std::vector<std::string>& paths, std::ostream& err) {
  // CDFs named on the command line take precedence over the EDF's directory.
  std::map<std::string, ServiceSpec> given;
  std::map<std::string, std::string> problems;
  bool io_failure = false;
  std::vector<std::string> order;
  std::map<std::string, std::string> texts;

  for (const auto& path : paths) {
    try {
      texts[path] = read_text_file(path);
      order.push_back(path);
    } catch (const IoError& e) {
      err << path << ": " << e.what() << "\n";
      io_failure = true;
    }
  }
  for (const auto& path : order) {
    if (!ends_with(path, ".cdf.json")) continue;
    try {
      ServiceSpec spec = parse_cdf(texts[path]);
      given.emplace(spec.name, std::move(spec));
    } catch (const DefinitionError& e) {
      problems[path] = e.diagnostic().to_string();
    }
  }
  for (const auto& path : order) {
    try {
      if (ends_with(path, ".edf.json")) {
        const auto fallback = directory_resolver(fs::path(path).parent_path());
        parse_edf(texts[path], [&](const std::string& name) -> std::optional<ServiceSpec> {
          if (auto it = given.find(name); it != given.end()) return it->second;
          return fallback(name);
        });
      } else if (ends_with(path, ".cluster.json")) {
        parse_cluster(texts[path], fs::path(path).parent_path());
      } else if (!ends_with(path, ".cdf.json")) {
        problems[path] = "unrecognised file type (expected .cdf.json, .edf.json or .cluster.json)";
      }
    } catch (const DefinitionError& e) {
      problems[path] = e.diagnostic().to_string();
    }
  }
  for (const auto& path : order) {
    if (auto it = problems.find(path); it != problems.end()) {
      err << path << ": " << it->second << "\n";
    }
  }
  if (io_failure) return kInternalError;
  return problems.empty() ? kOk : kValidationFailure;
}

int cmd_allocate(const std::string& edf, const std::string& cluster_path,
                 std::optional<std::uint64_t> seed, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  SimConfig cfg;
  cfg.experiment = load_experiment(edf);
  cfg.cluster = load_cluster(cluster_path);
  cfg.seed = seed.value_or(cfg.cluster.seed);
  const IterationOutcome round = run_iteration(cfg, 0);
  const std::string report = explain(round.allocation);
  if (out_path.empty()) {
    out << report;
  } else {
    write_file(out_path, report);
  }
  if (!round.allocation.feasible) {
    err << "infeasible allocation; unassigned:";
    for (std::size_t j : round.allocation.unassigned) {
      err << " " << round.allocation.service_names[j];
    }
    err << "\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_simulate(const std::string& edf, const std::string& cluster_path, std::size_t iterations,
                 std::uint64_t seed, const std::string& out_dir, std::ostream& err) {
  SimConfig cfg;
  cfg.experiment = load_experiment(edf);
  cfg.cluster = load_cluster(cluster_path);
  cfg.seed = seed;
  cfg.iterations = iterations;
  std::vector<AllocationResult> results;
  for (auto& run : run_experiment(cfg)) results.push_back(std::move(run.allocation));
  const AllocationHistory history = AllocationHistory::from_results(std::move(results));

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  const fs::path dir(out_dir);

  write_file(dir / "allocations.csv", emit_report(history, ReportFormat::Csv));

  const auto by_cost = fairness_series(history);
  const auto by_count = allocation_count_fairness_series(history);
  std::string fairness = "iteration,jain_cost,jain_count\n";
  for (std::size_t t = 0; t < by_cost.size(); ++t) {
    fairness += fmt::format("{},{},{}\n", t, format_number(by_cost[t]), format_number(by_count[t]));
  }
  write_file(dir / "fairness.csv", fairness);

  const CostDispersion d = cost_dispersion(history);
  const Eigen::MatrixXi freq = allocation_frequency(history);
  std::size_t infeasible = 0;
  for (const auto& r : history.iterations) infeasible += r.feasible ? 0 : 1;
  nlohmann::ordered_json summary;
  summary["iterations"] = history.iterations.size();
  summary["infeasible_iterations"] = infeasible;
  summary["assignments"] = d.samples;
  summary["mean_cost"] = d.mean;
  summary["std_deviation"] = d.std_deviation;
  summary["coefficient_of_variation"] = d.coefficient_of_variation;
  summary["final_jain_cost"] = by_cost.back();
  summary["final_jain_count"] = by_count.back();
  nlohmann::ordered_json per_worker = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < history.workers.size(); ++i) {
    per_worker[history.workers[i].value()] = freq.row(static_cast<Eigen::Index>(i)).sum();
  }
  summary["allocations_per_worker"] = std::move(per_worker);
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  if (infeasible > 0) {
    err << infeasible << " of " << history.iterations.size() << " iterations were infeasible\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_scaling(const std::string& template_path, std::size_t max_workers,
                std::size_t max_services, std::uint64_t seed, const std::string& out_path,
                std::ostream& out) {
  SimConfig cfg;
  cfg.cluster = load_cluster(template_path);
  cfg.seed = seed;
  ServiceEntry probe;
  probe.inline_definition = true;
  probe.definition.name = "svc";
  probe.definition.entrypoint = "run";
  probe.definition.predefined_cost = 50.0;
  cfg.experiment.name = "scaling";
  cfg.experiment.services.push_back(probe);

  std::vector<std::size_t> workers;
  std::vector<std::size_t> services;
  for (std::size_t w = 1; w <= max_workers; ++w) workers.push_back(w);
  for (std::size_t s = 1; s <= max_services; ++s) services.push_back(s);
  const std::string csv = scaling_to_csv(measure_scaling(workers, services, cfg));
  if (out_path.empty()) {
    out << csv;
  } else {
    write_file(out_path, csv);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Declarative experiment orchestration: validate definitions, allocate "
               "services to workers, simulate swarms."};
  app.name(args.empty() ? "flowswarm" : args.front());
  app.require_subcommand(1);

  std::vector<std::string> validate_paths;
  auto* validate_cmd = app.add_subcommand("validate", "Check CDF/EDF/cluster files");
  validate_cmd->add_option("paths", validate_paths, "Definition files")->required();

  std::string edf;
  std::string cluster;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  auto* allocate_cmd = app.add_subcommand("allocate", "Run one allocation round");
  allocate_cmd->add_option("--edf", edf, "Experiment definition")->required();
  allocate_cmd->add_option("--cluster", cluster, "Cluster description")->required();
  allocate_cmd->add_option("--seed", seed, "Workload seed (default: cluster seed)");
  allocate_cmd->add_option("--out", out_path, "Report file (default: stdout)");

  std::size_t iterations = 0;
  std::uint64_t required_seed = 0;
  std::string out_dir;
  auto* simulate_cmd = app.add_subcommand("simulate", "Repeat allocation rounds and report");
  simulate_cmd->add_option("--edf", edf, "Experiment definition")->required();
  simulate_cmd->add_option("--cluster", cluster, "Cluster description")->required();
  simulate_cmd->add_option("--iterations", iterations, "Number of rounds")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", required_seed, "Workload seed")->required();
  simulate_cmd->add_option("--out-dir", out_dir, "Report directory")->required();

  std::string cluster_template;
  std::size_t max_workers = 0;
  std::size_t max_services = 0;
  auto* scaling_cmd = app.add_subcommand("scaling", "Simulated start-up time grid");
  scaling_cmd->add_option("--cluster-template", cluster_template, "Cluster description")
      ->required();
  scaling_cmd->add_option("--max-workers", max_workers, "Largest worker count")
      ->required()
      ->check(CLI::PositiveNumber);
  scaling_cmd->add_option("--max-services", max_services, "Largest service count")
      ->required()
      ->check(CLI::PositiveNumber);
  scaling_cmd->add_option("--seed", required_seed, "Workload seed")->required();
  scaling_cmd->add_option("--out", out_path, "CSV file (default: stdout)");

  std::vector<std::string> argv_rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationFailure;
  }

  try {
    if (*validate_cmd) return cmd_validate(validate_paths, err);
    if (*allocate_cmd) return cmd_allocate(edf, cluster, seed, out_path, out, err);
    if (*simulate_cmd) {
      return cmd_simulate(edf, cluster, iterations, required_seed, out_dir, err);
    }
    if (*scaling_cmd) {
      return cmd_scaling(cluster_template, max_workers, max_services, required_seed, out_path,
                         out);
    }
  } catch (const DefinitionError& e) {
    err << "error: " << e.diagnostic().to_string() << "\n";
    return kValidationFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  } catch (const EmptyProblem& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace flowswarm::cli
