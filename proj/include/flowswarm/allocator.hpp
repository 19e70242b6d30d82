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

// Service allocation: builds the worker→unit flow network for each
// pooled/split configuration of the dependency components, solves it, and
// keeps the best outcome.

#ifndef FLOWSWARM_ALLOCATOR_HPP
#define FLOWSWARM_ALLOCATOR_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowswarm/costing.hpp"
#include "flowswarm/definitions.hpp"
#include "flowswarm/mcmf.hpp"
#include "flowswarm/model.hpp"

namespace flowswarm {

// A single service, or a pool of two or more services placed together.
struct AllocationUnit {
  std::vector<std::size_t> members;  // ascending service indices

  bool is_pool() const { return members.size() >= 2; }
  friend bool operator==(const AllocationUnit&, const AllocationUnit&) = default;
};

// "name" for singles, "pool{a+b}" for pools.
std::string unit_label(const AllocationUnit& unit, std::span<const std::string> service_names);

// Connected components of Ξ taken as undirected, each ascending, ordered by
// smallest member.
std::vector<std::vector<std::size_t>> dependency_components(const DependencyMatrix& dependencies);

// Every way of either pooling or splitting each multi-service component:
// 2^C configurations for C such components. Configuration k splits the
// components whose bit is set in k, so the all-pooled configuration comes
// first. Units inside a configuration are ordered by smallest member.
// Throws TooManyComponents when 2^C exceeds max_configurations.
std::vector<std::vector<AllocationUnit>> enumerate_unit_configurations(
    const DependencyMatrix& dependencies, std::size_t max_configurations = 4096);

// Vertex numbering used by build_network: source 0, workers 1..m, units
// m+1..m+n, sink m+n+1.
struct NetworkLayout {
  Eigen::Index workers = 0;
  Eigen::Index units = 0;

  VertexIndex source() const { return 0; }
  VertexIndex worker(Eigen::Index i) const { return static_cast<VertexIndex>(1 + i); }
  VertexIndex unit(Eigen::Index u) const { return static_cast<VertexIndex>(1 + workers + u); }
  VertexIndex sink() const { return static_cast<VertexIndex>(1 + workers + units); }
  VertexIndex vertices() const { return static_cast<VertexIndex>(2 + workers + units); }
};

// source→worker (cap 1, cost 0) for each worker; worker→unit (cap 1,
// integerized cost) for each feasible pair in (worker, unit) order;
// unit→sink (cap 1, cost 0). Throws EmptyProblem without workers or units.
FlowNetwork build_network(const CostMatrix& unit_costs);

struct ServiceAssignment {
  std::size_t service = 0;
  std::string service_name;
  std::size_t worker = 0;
  AgentId worker_id;
  std::size_t unit = 0;  // index into AllocationResult::units
  double cost = 0.0;     // this service's share of the unit cost

  friend bool operator==(const ServiceAssignment&, const ServiceAssignment&) = default;
};

struct UnitAssignment {
  AllocationUnit unit;
  std::string label;
  std::size_t worker = 0;
  AgentId worker_id;
  double cost = 0.0;
  std::int64_t scaled_cost = 0;

  friend bool operator==(const UnitAssignment&, const UnitAssignment&) = default;
};

struct ConfigurationOutcome {
  std::string label;
  std::size_t assigned_services = 0;
  std::int64_t scaled_cost = 0;

  friend bool operator==(const ConfigurationOutcome&, const ConfigurationOutcome&) = default;
};

struct AllocationResult {
  std::vector<std::string> service_names;
  std::vector<AgentId> worker_ids;
  std::vector<ServiceAssignment> assignments;  // ascending service index
  std::vector<UnitAssignment> units;
  std::vector<std::size_t> unassigned;  // service indices
  std::int64_t scaled_cost = 0;
  double total_cost = 0.0;  // scaled_cost / scale
  bool feasible = false;
  std::size_t chosen_configuration = 0;
  std::vector<ConfigurationOutcome> configurations;

  // Worker hosting `service`, or nullptr when unassigned.
  const ServiceAssignment* assignment_for(std::size_t service) const;

  friend bool operator==(const AllocationResult&, const AllocationResult&) = default;
};

// Everything the allocator needs once costs are known. service_costs and
// capability are workers × services.
struct AllocationInput {
  std::vector<AgentId> workers;
  std::vector<std::string> services;
  Eigen::MatrixXd service_costs;
  CapabilityMatrix capability;
  DependencyMatrix dependencies;
  double pool_discount = ExperimentSpec::kDefaultPoolDiscount;
};

struct AllocateOptions {
  std::size_t max_configurations = 4096;
  // Called after each configuration's flow problem is solved.
  std::function<void(std::size_t configuration, const FlowNetwork&, const FlowResult&)> on_solve;
};

// Solves one flow problem per unit configuration and keeps the one that
// assigns the most services, then the cheapest on the integer grid, then
// the earliest. Infeasibility is reported through `feasible`/`unassigned`.
AllocationResult allocate(const AllocationInput& input, const AllocateOptions& options = {});

// Computes costs from the workers' current workload samples.
AllocationResult allocate(std::span<const WorkerState> workers,
                          std::span<const ServiceSpec> services,
                          const DependencyMatrix& dependencies,
                          const CostWeights& weights, double pool_discount,
                          const AllocateOptions& options = {});

// Plain-text table of assignments, costs and configurations considered.
std::string explain(const AllocationResult& result);

}  // namespace flowswarm

#endif  // FLOWSWARM_ALLOCATOR_HPP
