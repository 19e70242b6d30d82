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

#include "flowswarm/allocator.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/core.h>

#include "flowswarm/error.hpp"

namespace flowswarm {

std::string unit_label(const AllocationUnit& unit, std::span<const std::string> service_names) {
  auto name = [&](std::size_t j) {
    return j < service_names.size() ? service_names[j] : fmt::format("#{}", j);
  };
  if (!unit.is_pool()) return unit.members.empty() ? std::string("?") : name(unit.members.front());
  std::string out = "pool{";
  for (std::size_t k = 0; k < unit.members.size(); ++k) {
    if (k > 0) out += "+";
    out += name(unit.members[k]);
  }
  return out + "}";
}

std::vector<std::vector<std::size_t>> dependency_components(const DependencyMatrix& dependencies) {
  if (dependencies.rows() != dependencies.cols()) {
    throw DomainError("dependency matrix must be square");
  }
  const auto n = static_cast<std::size_t>(dependencies.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!dependencies(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j))) continue;
      if (k == j) throw DomainError("dependency matrix must have a zero diagonal");
      const std::size_t a = find(k);
      const std::size_t b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t root = find(j);
    if (slot[root] == n) {
      slot[root] = components.size();
      components.emplace_back();
    }
    components[slot[root]].push_back(j);
  }
  return components;
}

std::vector<std::vector<AllocationUnit>> enumerate_unit_configurations(
    const DependencyMatrix& dependencies, std::size_t max_configurations) {
  const auto components = dependency_components(dependencies);
  std::vector<std::size_t> multi;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (components[c].size() >= 2) multi.push_back(c);
  }
  if (multi.size() >= 63 || (std::uint64_t{1} << multi.size()) > max_configurations) {
    throw TooManyComponents(fmt::format(
        "{} dependency components give more than {} configurations", multi.size(),
        max_configurations));
  }
  const std::uint64_t count = std::uint64_t{1} << multi.size();
  std::vector<std::vector<AllocationUnit>> configurations;
  configurations.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<AllocationUnit> units;
    for (std::size_t c = 0; c < components.size(); ++c) {
      const auto pos = std::find(multi.begin(), multi.end(), c);
      const bool split =
          pos == multi.end() || ((mask >> static_cast<std::size_t>(pos - multi.begin())) & 1U);
      if (split) {
        for (std::size_t j : components[c]) units.push_back({{j}});
      } else {
        units.push_back({components[c]});
      }
    }
    std::sort(units.begin(), units.end(), [](const AllocationUnit& a, const AllocationUnit& b) {
      return a.members.front() < b.members.front();
    });
    configurations.push_back(std::move(units));
  }
  return configurations;
}

FlowNetwork build_network(const CostMatrix& unit_costs) {
  if (unit_costs.workers() == 0) throw EmptyProblem("no workers to allocate to");
  if (unit_costs.units() == 0) throw EmptyProblem("no services to allocate");
  const NetworkLayout layout{unit_costs.workers(), unit_costs.units()};
  FlowNetwork net(layout.vertices(), layout.source(), layout.sink());
  for (Eigen::Index i = 0; i < layout.workers; ++i) {
    net.add_edge(layout.source(), layout.worker(i), 1, 0);
  }
  for (Eigen::Index i = 0; i < layout.workers; ++i) {
    for (Eigen::Index u = 0; u < layout.units; ++u) {
      if (unit_costs.feasible(i, u)) {
        net.add_edge(layout.worker(i), layout.unit(u), 1, unit_costs.scaled(i, u));
      }
    }
  }
  for (Eigen::Index u = 0; u < layout.units; ++u) {
    net.add_edge(layout.unit(u), layout.sink(), 1, 0);
  }
  return net;
}

const ServiceAssignment* AllocationResult::assignment_for(std::size_t service) const {
  auto it = std::find_if(assignments.begin(), assignments.end(),
                         [&](const ServiceAssignment& a) { return a.service == service; });
  return it == assignments.end() ? nullptr : &*it;
}

namespace {

std::string configuration_label(const std::vector<AllocationUnit>& units,
                                std::span<const std::string> names) {
  std::string label;
  for (const auto& unit : units) {
    if (!unit.is_pool()) continue;
    if (!label.empty()) label += " ";
    label += unit_label(unit, names);
  }
  return label.empty() ? "singles" : label;
}

}  // namespace

AllocationResult allocate(const AllocationInput& input, const AllocateOptions& options) {
  const auto m = static_cast<Eigen::Index>(input.workers.size());
  const auto n = static_cast<Eigen::Index>(input.services.size());
  if (m == 0) throw EmptyProblem("no workers to allocate to");
  if (n == 0) throw EmptyProblem("no services to allocate");
  if (input.service_costs.rows() != m || input.service_costs.cols() != n ||
      input.capability.rows() != m || input.capability.cols() != n ||
      input.dependencies.rows() != n || input.dependencies.cols() != n) {
    throw DomainError("allocation input matrices do not match the rosters");
  }

  const auto configurations =
      enumerate_unit_configurations(input.dependencies, options.max_configurations);

  // Column index of every distinct unit in one shared cost matrix.
  std::vector<std::vector<std::size_t>> all_units;
  auto column_of = [&](const AllocationUnit& unit) {
    auto it = std::find(all_units.begin(), all_units.end(), unit.members);
    if (it != all_units.end()) return static_cast<Eigen::Index>(it - all_units.begin());
    all_units.push_back(unit.members);
    return static_cast<Eigen::Index>(all_units.size() - 1);
  };
  std::vector<std::vector<Eigen::Index>> columns;
  for (const auto& config : configurations) {
    auto& cols = columns.emplace_back();
    for (const auto& unit : config) cols.push_back(column_of(unit));
  }
  const CostMatrix costs = unit_cost_matrix(input.service_costs, input.capability, all_units,
                                            input.pool_discount);

  AllocationResult best;
  bool have_best = false;
  std::vector<ConfigurationOutcome> outcomes;
  for (std::size_t k = 0; k < configurations.size(); ++k) {
    const auto& units = configurations[k];
    const CostMatrix unit_costs = costs.select_units(columns[k]);
    const FlowNetwork net = build_network(unit_costs);
    const FlowResult flow = solve(net);
    if (options.on_solve) options.on_solve(k, net, flow);

    AllocationResult candidate;
    const NetworkLayout layout{m, static_cast<Eigen::Index>(units.size())};
    for (EdgeIndex e = 0; e < net.num_edges(); ++e) {
      const FlowEdge& edge = net.edge(e);
      if (flow.flow[static_cast<std::size_t>(e)] == 0) continue;
      if (edge.from < layout.worker(0) || edge.from > layout.worker(m - 1)) continue;
      if (edge.to < layout.unit(0) || edge.to >= layout.sink()) continue;
      const Eigen::Index i = edge.from - layout.worker(0);
      const Eigen::Index u = edge.to - layout.unit(0);
      const AllocationUnit& unit = units[static_cast<std::size_t>(u)];
      const std::size_t slot = candidate.units.size();
      candidate.units.push_back({unit, unit_label(unit, input.services),
                                 static_cast<std::size_t>(i),
                                 input.workers[static_cast<std::size_t>(i)],
                                 *unit_costs.at(i, u), unit_costs.scaled(i, u)});
      for (std::size_t j : unit.members) {
        const double share =
            unit.is_pool()
                ? input.pool_discount * input.service_costs(i, static_cast<Eigen::Index>(j))
                : *unit_costs.at(i, u);
        candidate.assignments.push_back({j, input.services[j], static_cast<std::size_t>(i),
                                         input.workers[static_cast<std::size_t>(i)], slot,
                                         share});
      }
    }
    std::sort(candidate.assignments.begin(), candidate.assignments.end(),
              [](const ServiceAssignment& a, const ServiceAssignment& b) {
                return a.service < b.service;
              });
    candidate.scaled_cost = flow.total_cost;
    candidate.chosen_configuration = k;
    outcomes.push_back({configuration_label(units, input.services),
                        candidate.assignments.size(), candidate.scaled_cost});

    const bool better =
        !have_best || candidate.assignments.size() > best.assignments.size() ||
        (candidate.assignments.size() == best.assignments.size() &&
         candidate.scaled_cost < best.scaled_cost);
    if (better) {
      best = std::move(candidate);
      have_best = true;
    }
  }

  best.service_names = input.services;
  best.worker_ids = input.workers;
  best.configurations = std::move(outcomes);
  best.total_cost = static_cast<double>(best.scaled_cost) / costs.scale();
  for (std::size_t j = 0; j < input.services.size(); ++j) {
    if (best.assignment_for(j) == nullptr) best.unassigned.push_back(j);
  }
  best.feasible = best.unassigned.empty();
  // Unit slots refer to the chosen candidate's units; re-point after sort.
  for (auto& a : best.assignments) {
    for (std::size_t s = 0; s < best.units.size(); ++s) {
      const auto& members = best.units[s].unit.members;
      if (std::find(members.begin(), members.end(), a.service) != members.end()) a.unit = s;
    }
  }
  return best;
}

AllocationResult allocate(std::span<const WorkerState> workers,
                          std::span<const ServiceSpec> services,
                          const DependencyMatrix& dependencies, const CostWeights& weights,
                          double pool_discount, const AllocateOptions& options) {
  if (workers.empty()) throw EmptyProblem("no workers to allocate to");
  if (services.empty()) throw EmptyProblem("no services to allocate");
  validate(weights);
  AllocationInput input;
  std::vector<WorkloadSample> workloads;
  std::vector<double> alphas;
  for (const auto& w : workers) {
    input.workers.push_back(w.id);
    workloads.push_back(w.workload);
  }
  for (const auto& s : services) {
    input.services.push_back(s.name);
    alphas.push_back(s.predefined_cost);
  }
  input.service_costs = service_cost_matrix(workloads, alphas, weights);
  input.capability = build_capability_matrix(workers, services);
  input.dependencies = dependencies;
  input.pool_discount = pool_discount;
  return allocate(input, options);
}

std::string explain(const AllocationResult& result) {
  std::string out;
  out += fmt::format("allocation: {}\n", result.feasible ? "feasible" : "infeasible");
  out += fmt::format("assigned services: {} of {}\n", result.assignments.size(),
                     result.service_names.size());
  out += fmt::format("total cost: {:.6f}\n", result.total_cost);
  if (!result.configurations.empty()) {
    out += fmt::format("configuration: {} of {} ({})\n", result.chosen_configuration + 1,
                       result.configurations.size(),
                       result.configurations[result.chosen_configuration].label);
  }

  std::size_t service_w = 7;
  std::size_t worker_w = 6;
  std::size_t unit_w = 4;
  for (const auto& a : result.assignments) {
    service_w = std::max(service_w, a.service_name.size());
    worker_w = std::max(worker_w, a.worker_id.value().size());
    unit_w = std::max(unit_w, result.units[a.unit].label.size());
  }
  out += "\n";
  out += fmt::format("{:<{}}  {:<{}}  {:<{}}  {:>12}\n", "service", service_w, "worker",
                     worker_w, "unit", unit_w, "cost");
  for (const auto& a : result.assignments) {
    out += fmt::format("{:<{}}  {:<{}}  {:<{}}  {:>12.6f}\n", a.service_name, service_w,
                       a.worker_id.value(), worker_w, result.units[a.unit].label, unit_w,
                       a.cost);
  }

  if (!result.unassigned.empty()) {
    out += "\nunassigned:";
    for (std::size_t j : result.unassigned) out += " " + result.service_names[j];
    out += "\n";
  }

  if (result.configurations.size() > 1) {
    out += "\nconfigurations:\n";
    for (std::size_t k = 0; k < result.configurations.size(); ++k) {
      const auto& c = result.configurations[k];
      out += fmt::format("  [{}] {}: assigned {}, cost {:.6f}, {}\n", k + 1, c.label,
                         c.assigned_services,
                         static_cast<double>(c.scaled_cost) / kCostScale,
                         k == result.chosen_configuration ? "chosen" : "rejected");
    }
  }
  return out;
}

}  // namespace flowswarm
