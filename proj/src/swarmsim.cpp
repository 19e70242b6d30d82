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

#include "flowswarm/swarmsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/core.h>

#include "flowswarm/costing.hpp"
#include "flowswarm/detail/random.hpp"
#include "flowswarm/error.hpp"
#include "json.hpp"

namespace flowswarm {

std::int64_t LatencyModel::fetch_ms(double image_size_mb) const {
  return std::llround(fetch_base_ms + fetch_per_mb_ms * image_size_mb);
}

void validate(const SimConfig& config) {
  if (config.iterations < 1) throw DomainError("iterations must be at least 1");
  if (config.cluster.workers.empty()) throw EmptyProblem("cluster has no workers");
  if (config.experiment.services.empty()) throw EmptyProblem("experiment has no services");
  const LatencyModel& l = config.latency;
  if (l.cost_per_service_ms < 0 || l.poll_rtt_ms < 0 || l.solve_per_configuration_ms < 0 ||
      !(l.fetch_base_ms >= 0.0) || !(l.fetch_per_mb_ms >= 0.0)) {
    throw DomainError("latencies must be non-negative");
  }
}

WorkloadGenerator::WorkloadGenerator(WorkloadModel model, std::uint64_t seed,
                                     const AgentId& worker)
    : model_(std::move(model)),
      stream_(detail::mix(seed, detail::fnv1a(worker.value()))),
      level_(model_.center) {
  if (model_.kind == WorkloadModel::Kind::UniformNoise) {
    std::mt19937_64 rng(stream_);
    for (int r = 0; r < 4; ++r) {
      level_[r] += detail::uniform(rng, -model_.half_width, model_.half_width);
    }
    level_ = level_.cwiseMax(0.0).cwiseMin(1.0);
  }
  if (model_.kind == WorkloadModel::Kind::Trace && model_.trace.empty()) {
    throw DomainError("trace workload without samples");
  }
}

WorkloadSample WorkloadGenerator::sample(std::uint64_t iteration) const {
  switch (model_.kind) {
    case WorkloadModel::Kind::Fixed:
      return WorkloadSample::from_vector(model_.center, iteration);
    case WorkloadModel::Kind::Trace:
      return WorkloadSample::from_vector(model_.trace[iteration % model_.trace.size()],
                                         iteration);
    case WorkloadModel::Kind::UniformNoise: {
      std::mt19937_64 rng(detail::mix(stream_, iteration + 1));
      Eigen::Vector4d beta = level_;
      for (int r = 0; r < 4; ++r) beta[r] += detail::uniform(rng, -model_.jitter, model_.jitter);
      return WorkloadSample::from_vector(beta.cwiseMax(0.0).cwiseMin(1.0), iteration);
    }
  }
  return {};
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Join: return "Join";
    case EventKind::CostRequest: return "CostRequest";
    case EventKind::CostReply: return "CostReply";
    case EventKind::AllocationComputed: return "AllocationComputed";
    case EventKind::FetchStarted: return "FetchStarted";
    case EventKind::ServiceStarted: return "ServiceStarted";
  }
  return "?";
}

IterationOutcome run_iteration(const SimConfig& config, std::size_t iteration) {
  validate(config);
  const auto& cluster = config.cluster;
  const auto services = config.experiment.effective_services();
  const std::size_t m = cluster.workers.size();
  const std::size_t n = services.size();

  IterationOutcome out;
  SimTrace& trace = out.trace;
  auto emit = [&](std::int64_t tick, EventKind kind, std::string worker,
                  std::string service = {}, std::string detail = {}) {
    trace.events.push_back({tick, kind, std::move(worker), std::move(service), std::move(detail)});
  };

  out.swarm = new_swarm(AgentId("master"), detail::mix(config.seed, iteration));
  trace.swarm_id = out.swarm.swarm_id;
  const std::string ns = "swarm/" + out.swarm.swarm_id + "/";
  out.registry.put(ns + "overlay/subnet", config.experiment.network.subnet);
  std::string ports;
  for (auto p : config.experiment.network.ports) {
    ports += (ports.empty() ? "" : ",") + std::to_string(p);
  }
  out.registry.put(ns + "overlay/ports", ports);

  // Join time depends on the environment and is excluded: every worker is
  // present at tick 0.
  for (const auto& w : cluster.workers) {
    WorkerState state;
    state.id = w.id;
    state.profile = w.profile;
    state.workload = WorkloadGenerator(w.workload, config.seed, w.id).sample(iteration);
    out.workloads.push_back(state.workload);
    out.swarm = join_worker(std::move(out.swarm), std::move(state));
    emit(0, EventKind::Join, w.id.value());
  }

  // Cost rows: each worker evaluates the services one after another; workers
  // run side by side when parallel_cost_calc is set, otherwise the master
  // polls them in turn. Rows are committed in worker order.
  std::vector<double> alphas;
  for (const auto& s : services) alphas.push_back(s.predefined_cost);
  AllocationInput input;
  input.service_costs.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  const LatencyModel& lat = config.latency;
  const std::int64_t row_ms =
      lat.poll_rtt_ms + lat.cost_per_service_ms * static_cast<std::int64_t>(n);
  std::int64_t cost_end = 0;
  std::int64_t cursor = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t request = config.parallel_cost_calc ? 0 : cursor;
    const std::int64_t reply = request + row_ms;
    input.service_costs.row(static_cast<Eigen::Index>(i)) =
        service_cost_row(out.workloads[i], alphas, config.experiment.weights);
    emit(request, EventKind::CostRequest, cluster.workers[i].id.value());
    emit(reply, EventKind::CostReply, cluster.workers[i].id.value());
    cursor = reply;
    cost_end = std::max(cost_end, reply);
  }

  for (const auto& w : cluster.workers) input.workers.push_back(w.id);
  for (const auto& s : services) input.services.push_back(s.name);
  input.capability = build_capability_matrix(out.swarm.workers, services);
  input.dependencies = build_dependency_matrix(config.experiment);
  input.pool_discount = config.experiment.pool_discount;
  out.allocation = allocate(input);

  const std::int64_t allocated_at =
      cost_end + lat.solve_per_configuration_ms *
                     static_cast<std::int64_t>(out.allocation.configurations.size());
  emit(allocated_at, EventKind::AllocationComputed, "", "",
       fmt::format("assigned {} of {}", out.allocation.assignments.size(), n));

  // Each hosting worker joins the overlay, then fetches and starts its
  // unit's services one after another.
  std::vector<const UnitAssignment*> hosted;
  for (const auto& u : out.allocation.units) hosted.push_back(&u);
  std::sort(hosted.begin(), hosted.end(),
            [](const UnitAssignment* a, const UnitAssignment* b) { return a->worker < b->worker; });
  std::int64_t last_start = allocated_at;
  for (const UnitAssignment* u : hosted) {
    const std::string& worker = u->worker_id.value();
    out.swarm = set_worker_status(std::move(out.swarm), u->worker_id, WorkerStatus::Allocated);
    out.registry.put(ns + "overlay/members/" + worker, u->label);
    std::int64_t t = allocated_at;
    for (std::size_t j : u->unit.members) {
      emit(t, EventKind::FetchStarted, worker, services[j].name);
      t += lat.fetch_ms(services[j].image_size_mb);
      emit(t, EventKind::ServiceStarted, worker, services[j].name);
    }
    out.swarm = set_worker_status(std::move(out.swarm), u->worker_id, WorkerStatus::Running);
    last_start = std::max(last_start, t);
  }

  std::stable_sort(trace.events.begin(), trace.events.end(),
                   [](const SimEvent& a, const SimEvent& b) { return a.tick < b.tick; });
  trace.timings.cost_ms = cost_end;
  trace.timings.allocation_ms = allocated_at - cost_end;
  trace.timings.deploy_ms = last_start - allocated_at;
  trace.timings.elapsed_ms =
      trace.timings.cost_ms + trace.timings.allocation_ms + trace.timings.deploy_ms;
  return out;
}

std::vector<IterationOutcome> run_experiment(const SimConfig& config) {
  validate(config);
  std::vector<IterationOutcome> runs;
  runs.reserve(config.iterations);
  for (std::size_t k = 0; k < config.iterations; ++k) runs.push_back(run_iteration(config, k));
  return runs;
}

std::string trace_to_jsonl(const SimTrace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    nlohmann::ordered_json j;
    j["tick"] = e.tick;
    j["kind"] = to_string(e.kind);
    if (!e.worker.empty()) j["worker"] = e.worker;
    if (!e.service.empty()) j["service"] = e.service;
    if (!e.detail.empty()) j["detail"] = e.detail;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

template <typename T, typename Rename>
std::vector<T> cycle(const std::vector<T>& pool, std::size_t count, Rename rename) {
  std::vector<T> out;
  for (std::size_t k = 0; k < count; ++k) {
    T item = pool[k % pool.size()];
    const std::size_t copy = k / pool.size();
    if (copy > 0) rename(item, copy + 1);
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

std::vector<ScalingCell> measure_scaling(std::span<const std::size_t> worker_counts,
                                         std::span<const std::size_t> service_counts,
                                         const SimConfig& base) {
  if (worker_counts.empty() || service_counts.empty()) {
    throw DomainError("scaling ranges must be non-empty");
  }
  validate(base);
  std::vector<ScalingCell> cells;
  for (std::size_t w : worker_counts) {
    for (std::size_t s : service_counts) {
      if (w == 0 || s == 0) throw DomainError("scaling cells need at least one worker and service");
      SimConfig cfg = base;
      cfg.iterations = 1;
      cfg.cluster.workers = cycle(base.cluster.workers, w, [](ClusterWorker& cw, std::size_t k) {
        cw.id = AgentId(fmt::format("{}-{}", cw.id.value(), k));
      });
      cfg.experiment.services =
          cycle(base.experiment.services, s, [](ServiceEntry& e, std::size_t k) {
            e.definition.name = fmt::format("{}-{}", e.definition.name, k);
          });
      cfg.experiment.dependencies.clear();
      cells.push_back({w, s, run_iteration(cfg, 0).trace.timings.elapsed_ms});
    }
  }
  return cells;
}

std::string scaling_to_csv(std::span<const ScalingCell> cells) {
  std::string out = "workers,services,elapsed_ms\n";
  for (const auto& c : cells) out += fmt::format("{},{},{}\n", c.workers, c.services, c.elapsed_ms);
  return out;
}

}  // namespace flowswarm
