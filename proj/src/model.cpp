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

#include "flowswarm/model.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <utility>

#include <fmt/core.h>

#include "flowswarm/detail/random.hpp"
#include "flowswarm/error.hpp"

namespace flowswarm {

std::string Diagnostic::to_string() const {
  std::string out;
  if (line > 0) out += fmt::format("line {}, column {}: ", line, column);
  if (!field.empty()) out += fmt::format("{}: ", field);
  out += message;
  return out;
}

AgentId::AgentId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) throw DomainError("agent id must be non-empty");
}

void validate(const HardwareProfile& profile) {
  if (profile.cpu_cores <= 0) throw DomainError("cpu_cores must be positive");
  if (profile.vram_mb < 0) throw DomainError("vram_mb must be non-negative");
  if (profile.swap_mb < 0) throw DomainError("swap_mb must be non-negative");
  if (!(profile.bandwidth_mbps > 0.0)) {
    throw DomainError("bandwidth_mbps must be positive");
  }
}

WorkloadSample WorkloadSample::from_vector(const Eigen::Vector4d& beta,
                                           std::uint64_t timestamp) {
  return {beta[0], beta[1], beta[2], beta[3], timestamp};
}

void validate(const WorkloadSample& sample) {
  const Eigen::Vector4d beta = sample.as_vector();
  // Written so NaN fails too.
  if (!((beta.array() >= 0.0).all() && (beta.array() <= 1.0).all())) {
    throw DomainError("workload values must lie in [0,1]");
  }
}

const char* to_string(WorkerStatus status) {
  switch (status) {
    case WorkerStatus::Joined: return "Joined";
    case WorkerStatus::Allocated: return "Allocated";
    case WorkerStatus::Running: return "Running";
    case WorkerStatus::Left: return "Left";
  }
  return "?";
}

bool is_valid_transition(WorkerStatus from, WorkerStatus to) {
  if (to == WorkerStatus::Left) return true;
  return (from == WorkerStatus::Joined && to == WorkerStatus::Allocated) ||
         (from == WorkerStatus::Allocated && to == WorkerStatus::Running);
}

const WorkerState* SwarmState::find_worker(const AgentId& id) const {
  auto it = std::find_if(workers.begin(), workers.end(),
                         [&](const WorkerState& w) { return w.id == id; });
  return it == workers.end() ? nullptr : &*it;
}

std::optional<Role> SwarmState::role_of(const AgentId& id) const {
  if (id == master) return Role::Master;
  if (find_worker(id) != nullptr) return Role::Worker;
  return std::nullopt;
}

std::string uuid_from_entropy(std::uint64_t entropy) {
  std::uint64_t hi = detail::splitmix64(entropy);
  std::uint64_t lo = detail::splitmix64(hi ^ 0x5bd1e995ULL);
  hi = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;
  lo = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;
  return fmt::format("{:08x}-{:04x}-{:04x}-{:04x}-{:012x}", hi >> 32,
                     (hi >> 16) & 0xffff, hi & 0xffff, lo >> 48,
                     lo & 0xffffffffffffULL);
}

SwarmState new_swarm(AgentId master, std::uint64_t entropy) {
  if (master.empty()) throw DomainError("master id must be non-empty");
  SwarmState swarm;
  swarm.swarm_id = uuid_from_entropy(entropy);
  swarm.master = std::move(master);
  return swarm;
}

SwarmState new_swarm(AgentId master) {
  static std::atomic<std::uint64_t> counter{0};
  static const std::uint64_t process_entropy =
      (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^
      static_cast<std::uint64_t>(
          std::chrono::steady_clock::now().time_since_epoch().count());
  return new_swarm(std::move(master),
                   detail::mix(process_entropy, counter.fetch_add(1)));
}

SwarmState join_worker(SwarmState swarm, WorkerState worker) {
  if (worker.id.empty()) throw DomainError("worker id must be non-empty");
  if (worker.id == swarm.master) {
    throw MasterConflict("agent '" + worker.id.value() +
                         "' is the master and cannot join as a worker");
  }
  if (swarm.find_worker(worker.id) != nullptr) {
    throw DuplicateAgent("agent '" + worker.id.value() +
                         "' already joined the swarm");
  }
  worker.status = WorkerStatus::Joined;
  swarm.workers.push_back(std::move(worker));
  return swarm;
}

SwarmState set_worker_status(SwarmState swarm, const AgentId& id,
                             WorkerStatus status) {
  auto it = std::find_if(swarm.workers.begin(), swarm.workers.end(),
                         [&](const WorkerState& w) { return w.id == id; });
  if (it == swarm.workers.end()) {
    throw UnknownAgent("no worker '" + id.value() + "' in swarm");
  }
  if (!is_valid_transition(it->status, status)) {
    throw InvalidTransition(fmt::format("worker '{}': {} -> {} not allowed",
                                        id.value(), to_string(it->status),
                                        to_string(status)));
  }
  it->status = status;
  return swarm;
}

SwarmState leave_worker(SwarmState swarm, const AgentId& id) {
  return set_worker_status(std::move(swarm), id, WorkerStatus::Left);
}

}  // namespace flowswarm
