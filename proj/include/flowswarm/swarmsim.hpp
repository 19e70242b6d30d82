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

// Deterministic simulation of one swarm bootstrapping an experiment: joins,
// polled cost rows, allocation, overlay registration, image fetch and
// service start, all on an integer-millisecond logical clock.

#ifndef FLOWSWARM_SWARMSIM_HPP
#define FLOWSWARM_SWARMSIM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowswarm/allocator.hpp"
#include "flowswarm/definitions.hpp"
#include "flowswarm/kv_registry.hpp"
#include "flowswarm/model.hpp"

namespace flowswarm {

// Simulated durations in milliseconds. These are configuration, not
// measurements.
struct LatencyModel {
  std::int64_t cost_per_service_ms = 5;
  std::int64_t poll_rtt_ms = 2;
  std::int64_t solve_per_configuration_ms = 1;
  double fetch_base_ms = 500.0;
  double fetch_per_mb_ms = 2.0;

  // base + per_mb · size, rounded to the nearest millisecond.
  std::int64_t fetch_ms(double image_size_mb) const;
};

struct SimConfig {
  ClusterSpec cluster;
  ExperimentSpec experiment;
  std::uint64_t seed = 0;
  std::size_t iterations = 1;
  LatencyModel latency;
  bool parallel_cost_calc = true;
};

// Throws DomainError for zero iterations or an empty cluster.
void validate(const SimConfig& config);

// Per-worker workload source. Streams are keyed by (seed, worker id) so a
// worker's samples do not depend on roster order.
class WorkloadGenerator {
 public:
  WorkloadGenerator(WorkloadModel model, std::uint64_t seed, const AgentId& worker);

  WorkloadSample sample(std::uint64_t iteration) const;
  // UniformNoise: the persistent level the jitter is applied around.
  const Eigen::Vector4d& level() const { return level_; }

 private:
  WorkloadModel model_;
  std::uint64_t stream_;
  Eigen::Vector4d level_;
};

enum class EventKind { Join, CostRequest, CostReply, AllocationComputed, FetchStarted, ServiceStarted };

const char* to_string(EventKind kind);

struct SimEvent {
  std::int64_t tick = 0;
  EventKind kind = EventKind::Join;
  std::string worker;   // empty for swarm-wide events
  std::string service;  // Fetch/ServiceStarted only
  std::string detail;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct PhaseTimings {
  std::int64_t cost_ms = 0;        // swarm start → last cost reply
  std::int64_t allocation_ms = 0;  // solving
  std::int64_t deploy_ms = 0;      // allocation → last service start
  std::int64_t elapsed_ms = 0;     // sum of the three

  friend bool operator==(const PhaseTimings&, const PhaseTimings&) = default;
};

struct SimTrace {
  std::string swarm_id;
  std::vector<SimEvent> events;  // non-decreasing ticks
  PhaseTimings timings;

  friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

struct IterationOutcome {
  AllocationResult allocation;
  SimTrace trace;
  KvRegistry registry;
  SwarmState swarm;
  std::vector<WorkloadSample> workloads;  // cluster order
};

IterationOutcome run_iteration(const SimConfig& config, std::size_t iteration);

// `config.iterations` independent rounds with re-sampled workloads.
std::vector<IterationOutcome> run_experiment(const SimConfig& config);

// One JSON object per event and line.
std::string trace_to_jsonl(const SimTrace& trace);

struct ScalingCell {
  std::size_t workers = 0;
  std::size_t services = 0;
  std::int64_t elapsed_ms = 0;

  friend bool operator==(const ScalingCell&, const ScalingCell&) = default;
};

// One simulated round per (workers, services) cell. Workers and services are
// taken from `base` in order and cycled (with suffixed names) when a cell
// needs more than it provides; dependencies are dropped.
std::vector<ScalingCell> measure_scaling(std::span<const std::size_t> worker_counts,
                                         std::span<const std::size_t> service_counts,
                                         const SimConfig& base);

// Header "workers,services,elapsed_ms".
std::string scaling_to_csv(std::span<const ScalingCell> cells);

}  // namespace flowswarm

#endif  // FLOWSWARM_SWARMSIM_HPP
