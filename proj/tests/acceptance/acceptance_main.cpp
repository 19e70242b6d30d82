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

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/core.h>

#include "flowswarm/allocator.hpp"
#include "flowswarm/cli.hpp"
#include "flowswarm/costing.hpp"
#include "flowswarm/definitions.hpp"
#include "flowswarm/error.hpp"
#include "flowswarm/mcmf.hpp"
#include "flowswarm/metrics.hpp"
#include "flowswarm/swarmsim.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace flowswarm;

namespace {

const fs::path kFixtures = FLOWSWARM_FIXTURE_DIR;

// Result of one criterion: pass flag plus a short measured summary.
struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

SimConfig load_config(const std::string& edf, const std::string& cluster) {
  SimConfig cfg;
  cfg.experiment = parse_edf(read_text_file(kFixtures / edf), directory_resolver(kFixtures));
  cfg.cluster = parse_cluster(read_text_file(kFixtures / cluster), kFixtures);
  cfg.seed = cfg.cluster.seed;
  return cfg;
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "flowswarm");
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out != nullptr) *out = o.str();
  return code;
}

Verdict cost_exactness() {
  Verdict v;
  const struct {
    const char* name;
    double got, want;
  } cases[] = {
      {"eps(100,0.5)", resource_cost_cpu(100.0, 0.5), 6.25},
      {"eta(100,0.5)", resource_cost_vram(100.0, 0.5), 6.25},
      {"zeta(100,0.25)", resource_cost_swap(100.0, 0.25), 25.0},
      {"theta(100,1)", resource_cost_bandwidth(100.0, 1.0), 0.0},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    const double err = std::abs(c.got - c.want);
    worst = std::max(worst, err);
    if (!(err <= 1e-12)) v.fail(fmt::format("{} = {} (want {})", c.name, c.got, c.want));
  }
  if (v.pass) v.detail = fmt::format("max abs error {:g}", worst);
  return v;
}

// Criteria 2 and 3 share one randomized suite: every flow solved inside
// allocate is checked with verify().
struct RandomSuite {
  int instances = 0;
  int mismatches = 0;
  std::string first_mismatch;
  long long solves = 0;
  long long violations = 0;
  long long general_networks = 0;
};

RandomSuite randomized_suite() {
  RandomSuite s;
  std::mt19937_64 rng(20260101);
  const std::vector<std::string> tags = {"camera", "gpu", "arm"};
  AllocateOptions options;
  options.on_solve = [&](std::size_t, const FlowNetwork& net, const FlowResult& flow) {
    ++s.solves;
    s.violations += static_cast<long long>(verify(net, flow).size());
  };
  for (int k = 0; k < 1200; ++k) {
    oracle::AllocationProblem p;
    const int m = 1 + static_cast<int>(rng() % 5);
    const int n = 1 + static_cast<int>(rng() % 4);
    std::vector<WorkerState> workers;
    for (int i = 0; i < m; ++i) {
      WorkerState w;
      w.id = AgentId("w" + std::to_string(i));
      std::array<double, 4> b{};
      for (double& x : b) x = testing_support::random_real(rng, 0, 1);
      w.workload = WorkloadSample::from_vector(Eigen::Vector4d(b[0], b[1], b[2], b[3]));
      for (const auto& t : tags) {
        if (rng() % 3 != 0) w.profile.capabilities.insert(t);
      }
      p.workloads.push_back(b);
      p.offered.push_back(w.profile.capabilities);
      workers.push_back(std::move(w));
    }
    std::vector<ServiceSpec> services;
    for (int j = 0; j < n; ++j) {
      ServiceSpec z;
      z.name = "s" + std::to_string(j);
      z.entrypoint = "run";
      z.predefined_cost = testing_support::random_real(rng, 0, 100);
      for (const auto& t : tags) {
        if (rng() % 4 == 0) z.required_capabilities.insert(t);
      }
      p.alphas.push_back(z.predefined_cost);
      p.required.push_back(z.required_capabilities);
      services.push_back(std::move(z));
    }
    DependencyMatrix xi = DependencyMatrix::Zero(n, n);
    if (n >= 2 && rng() % 2 == 0) {
      const int a = static_cast<int>(rng() % n);
      const int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
      xi(a, b) = true;
      p.dependencies.push_back({a, b});
    }
    const CostWeights weights = testing_support::random_weights(rng);
    p.weights = {weights.cpu, weights.vram, weights.swap, weights.bandwidth};
    p.discount = testing_support::random_real(rng, 0.5, 1.0);

    const AllocationResult got = allocate(workers, services, xi, weights, p.discount, options);
    const oracle::AllocationOptimum want = oracle::exhaustive_allocation(p);
    ++s.instances;
    if (static_cast<int>(got.assignments.size()) != want.assigned_services ||
        got.scaled_cost != want.cost) {
      if (s.mismatches++ == 0) {
        s.first_mismatch = fmt::format("instance {}: got ({}, {}), oracle ({}, {})", k,
                                       got.assignments.size(), got.scaled_cost,
                                       want.assigned_services, want.cost);
      }
    }
  }

  // General networks outside the allocator's bipartite shape.
  for (int k = 0; k < 1000; ++k) {
    const int nv = 2 + static_cast<int>(rng() % 9);
    FlowNetwork net(nv, 0, nv - 1);
    for (int e = static_cast<int>(rng() % 30); e > 0; --e) {
      net.add_edge(static_cast<VertexIndex>(rng() % nv), static_cast<VertexIndex>(rng() % nv),
                   static_cast<FlowQuantity>(rng() % 6), static_cast<CostValue>(rng() % 50));
    }
    s.violations += static_cast<long long>(verify(net, solve(net)).size());
    ++s.general_networks;
  }
  return s;
}

Verdict optimality(const RandomSuite& s) {
  Verdict v;
  if (s.instances < 1000) v.fail(fmt::format("only {} instances", s.instances));
  if (s.mismatches > 0) v.fail(fmt::format("{} mismatches; {}", s.mismatches, s.first_mismatch));
  if (v.pass) v.detail = fmt::format("{} instances, 0 mismatches on the 1e6 grid", s.instances);
  return v;
}

Verdict flow_validity(const RandomSuite& s) {
  Verdict v;
  if (s.violations > 0) v.fail(fmt::format("{} violations", s.violations));
  if (v.pass) {
    v.detail = fmt::format("{} allocator solves + {} general networks, 0 violations", s.solves,
                           s.general_networks);
  }
  return v;
}

Verdict balanced_rounds() {
  Verdict v;
  SimConfig cfg = load_config("experiment.edf.json", "cluster12.cluster.json");
  cfg.iterations = 100;
  const auto runs = run_experiment(cfg);
  const auto services = cfg.experiment.effective_services();
  const std::size_t m = cfg.cluster.workers.size();
  const std::size_t n = services.size();
  if (m != 12 || n != 6) v.fail("fixture is not 12 workers x 6 services");

  int infeasible = 0, not_min = 0, not_optimal = 0;
  std::vector<AllocationResult> results;
  for (std::size_t t = 0; t < runs.size(); ++t) {
    const IterationOutcome& r = runs[t];
    if (!r.allocation.feasible) ++infeasible;

    // Independent integer-grid cost table for this iteration's workloads.
    std::vector<std::vector<std::int64_t>> grid(m, std::vector<std::int64_t>(n, -1));
    for (std::size_t i = 0; i < m; ++i) {
      const auto& have = cfg.cluster.workers[i].profile.capabilities;
      const WorkloadSample& w = r.workloads[i];
      for (std::size_t j = 0; j < n; ++j) {
        const auto& need = services[j].required_capabilities;
        if (!std::includes(have.begin(), have.end(), need.begin(), need.end())) continue;
        grid[i][j] = oracle::to_grid(oracle::edge_cost(
            services[j].predefined_cost, w.cpu, w.vram, w.swap, w.bandwidth, 0.25, 0.25, 0.25, 0.25));
      }
    }
    // (b) no assigned service could move to a free feasible worker that is
    // cheaper for it, and the total equals the exhaustive optimum.
    std::set<std::size_t> used;
    for (const auto& a : r.allocation.assignments) used.insert(a.worker);
    for (const auto& a : r.allocation.assignments) {
      for (std::size_t i = 0; i < m; ++i) {
        if (used.count(i) || grid[i][a.service] < 0) continue;
        if (grid[i][a.service] < grid[a.worker][a.service]) ++not_min;
      }
    }
    const auto best = oracle::dp_assignment(grid);
    if (!best || *best != r.allocation.scaled_cost) ++not_optimal;
    results.push_back(r.allocation);
  }
  const AllocationHistory history = AllocationHistory::from_results(results);
  const double jain = fairness_series(history).back();
  const Eigen::MatrixXi freq = allocation_frequency(history);
  const long active = (freq.rowwise().sum().array() > 0).count();

  if (runs.size() != 100) v.fail("wrong iteration count");
  if (infeasible > 0) v.fail(fmt::format("(a) {} infeasible iterations", infeasible));
  if (not_min > 0) v.fail(fmt::format("(b) {} services with a cheaper free worker", not_min));
  if (not_optimal > 0) v.fail(fmt::format("(b) {} iterations off the oracle optimum", not_optimal));
  if (!(jain < 0.75)) v.fail(fmt::format("(c) final Jain {:.4f} >= 0.75", jain));
  if (v.pass) {
    v.detail = fmt::format("100/100 feasible, all optimal, final Jain {:.4f}, {} of 12 workers active",
                           jain, active);
  }
  return v;
}

Verdict scaling_shape() {
  Verdict v;
  std::string csv;
  const int code = run_cli({"scaling", "--cluster-template", (kFixtures / "cluster12.cluster.json").string(),
                            "--max-workers", "12", "--max-services", "12", "--seed", "42"},
                           &csv);
  if (code != cli::kOk) {
    v.fail(fmt::format("scaling exited {}", code));
    return v;
  }
  // grid[w][s] from the CSV.
  std::vector<std::vector<double>> grid(13, std::vector<double>(13, -1));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    unsigned w = 0, s = 0;
    long long ms = 0;
    if (std::sscanf(line.c_str(), "%u,%u,%lld", &w, &s, &ms) != 3 || w > 12 || s > 12) {
      v.fail("unparseable row: " + line);
      return v;
    }
    grid[w][s] = static_cast<double>(ms);
    ++rows;
  }
  if (rows != 144) v.fail(fmt::format("{} rows", rows));

  double worst_r2 = 1.0, worst_ratio = 1.0;
  for (int w = 1; w <= 12; ++w) {
    Eigen::MatrixXd x(12, 2);
    Eigen::VectorXd y(12);
    for (int s = 1; s <= 12; ++s) {
      x(s - 1, 0) = 1.0;
      x(s - 1, 1) = s;
      y[s - 1] = grid[w][s];
      if (s > 1 && grid[w][s] < grid[w][s - 1]) v.fail(fmt::format("(a) decrease at w={} s={}", w, s));
    }
    const Eigen::VectorXd coef = x.colPivHouseholderQr().solve(y);
    const double ss_res = (y - x * coef).squaredNorm();
    const double ss_tot = (y.array() - y.mean()).square().sum();
    const double r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    worst_r2 = std::min(worst_r2, r2);
  }
  for (int s = 1; s <= 12; ++s) {
    double lo = grid[1][s], hi = grid[1][s];
    for (int w = 2; w <= 12; ++w) {
      lo = std::min(lo, grid[w][s]);
      hi = std::max(hi, grid[w][s]);
    }
    worst_ratio = std::max(worst_ratio, hi / lo);
  }
  if (!(worst_r2 >= 0.95)) v.fail(fmt::format("(a) R^2 {:.4f} < 0.95", worst_r2));
  if (!(worst_ratio <= 1.25)) v.fail(fmt::format("(b) max/min {:.4f} > 1.25", worst_ratio));
  if (v.pass) v.detail = fmt::format("min R^2 {:.6f}, max worker-axis ratio {:.4f}", worst_r2, worst_ratio);
  return v;
}

Verdict jain_algebra() {
  Verdict v;
  double worst = 0.0;
  for (int n = 1; n <= 32; ++n) {
    for (double c : {1.0, 0.3, 17.1875, 99.0}) {
      if (jains_index(Eigen::VectorXd::Constant(n, c)) != 1.0) {
        v.fail(fmt::format("equal vector n={} c={} not exactly 1", n, c));
      }
      for (int k = 1; k <= n; ++k) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        x.head(k).setConstant(c);
        const double err = std::abs(jains_index(x) - static_cast<double>(k) / n);
        worst = std::max(worst, err);
        if (!(err <= 1e-12)) v.fail(fmt::format("k={} n={} error {:g}", k, n, err));
      }
    }
  }
  if (v.pass) v.detail = fmt::format("n <= 32, max |J - k/n| = {:g}", worst);
  return v;
}

Verdict format_round_trip() {
  Verdict v;
  std::mt19937_64 rng(777);
  int cdf = 0, edf = 0, fuzzed = 0, diagnostics = 0;
  for (int k = 0; k < 600; ++k, ++cdf) {
    const ServiceSpec s = testing_support::random_service(rng, testing_support::random_word(rng));
    if (!(parse_cdf(serialize_cdf(s)) == s)) v.fail("CDF round trip differs: " + serialize_cdf(s));
  }
  for (int k = 0; k < 600; ++k, ++edf) {
    const auto g = testing_support::random_experiment(rng);
    const ServiceResolver resolver = [&](const std::string& name) -> std::optional<ServiceSpec> {
      auto it = g.library.find(name);
      if (it == g.library.end()) return std::nullopt;
      return it->second;
    };
    if (!(parse_edf(serialize_edf(g.spec), resolver) == g.spec)) {
      v.fail("EDF round trip differs: " + serialize_edf(g.spec));
    }
  }
  const std::vector<std::string> seeds = {read_text_file(kFixtures / "slam.cdf.json"),
                                          read_text_file(kFixtures / "pooled.edf.json"),
                                          read_text_file(kFixtures / "toy.cluster.json")};
  for (int k = 0; k < 5000; ++k, ++fuzzed) {
    std::string doc = seeds[k % seeds.size()];
    for (int edits = 1 + static_cast<int>(rng() % 5); edits > 0; --edits) {
      const std::size_t pos = rng() % (doc.size() + 1);
      switch (rng() % 3) {
        case 0: doc.insert(pos, 1, static_cast<char>(rng() % 256)); break;
        case 1: if (pos < doc.size()) doc.erase(pos, 1 + rng() % 6); break;
        default: if (pos < doc.size()) doc[pos] = "{}[],:\"0123456789-.etfn "[rng() % 24];
      }
    }
    try {
      switch (k % 3) {
        case 0: parse_cdf(doc); break;
        case 1: parse_edf(doc, directory_resolver(kFixtures)); break;
        default: parse_cluster(doc, kFixtures);
      }
    } catch (const DefinitionError& e) {
      ++diagnostics;
      if (e.diagnostic().message.empty()) v.fail("diagnostic without message");
    } catch (const std::exception& e) {
      v.fail(fmt::format("fuzz case {} escaped as non-diagnostic: {}", k, e.what()));
    }
  }
  if (v.pass) {
    v.detail = fmt::format("{} CDF + {} EDF round trips, {} fuzzed docs ({} diagnostics, 0 crashes)",
                           cdf, edf, fuzzed, diagnostics);
  }
  return v;
}

Verdict simulate_determinism() {
  Verdict v;
  const fs::path base = fs::temp_directory_path() / "flowswarm_acceptance";
  fs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    const int code = run_cli({"simulate", "--edf", (kFixtures / "pooled.edf.json").string(),
                              "--cluster", (kFixtures / "cluster12.cluster.json").string(),
                              "--iterations", "100", "--seed", "42", "--out-dir",
                              (base / run).string()});
    if (code != cli::kOk) v.fail(fmt::format("simulate run {} exited {}", run, code));
  }
  std::size_t bytes = 0, files = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const std::string a = read_text_file(entry.path());
    const fs::path other = base / "b" / entry.path().filename();
    if (!fs::exists(other) || read_text_file(other) != a) {
      v.fail(entry.path().filename().string() + " differs");
    }
    bytes += a.size();
    ++files;
  }
  if (files != 3) v.fail(fmt::format("{} output files", files));
  if (v.pass) v.detail = fmt::format("{} files, {} bytes, identical", files, bytes);
  fs::remove_all(base);
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int number, const char* name, const std::function<Verdict()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::cout << fmt::format("[{}] {} {}: {} ({:.2f} s)\n", v.pass ? "PASS" : "FAIL", number, name,
                             v.detail, seconds)
              << std::flush;
  };

  RandomSuite suite;
  report(1, "cost-function exactness", cost_exactness);
  report(2, "allocator optimality vs exhaustive oracle", [&] {
    suite = randomized_suite();
    return optimality(suite);
  });
  report(3, "flow validity", [&] { return flow_validity(suite); });
  report(4, "12 workers x 6 services, 100 rounds", balanced_rounds);
  report(5, "scaling shape", scaling_shape);
  report(6, "Jain's index algebra", jain_algebra);
  report(7, "format round trip and fuzzing", format_round_trip);
  report(8, "simulate determinism", simulate_determinism);
  std::cout << fmt::format("{} of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
