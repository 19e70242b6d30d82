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

// Swarm vocabulary: agents, roles, hardware profiles, live workload samples
// and the master-owned swarm state.

#ifndef FLOWSWARM_MODEL_HPP
#define FLOWSWARM_MODEL_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace flowswarm {

// Opaque, non-empty agent identifier.
class AgentId {
 public:
  AgentId() = default;
  explicit AgentId(std::string value);

  const std::string& value() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const AgentId&, const AgentId&) = default;

 private:
  std::string value_;
};

enum class Role { Master, Worker };

using CapabilitySet = std::set<std::string>;

struct HardwareProfile {
  CapabilitySet capabilities;
  std::int64_t cpu_cores = 1;
  std::int64_t vram_mb = 0;
  std::int64_t swap_mb = 0;
  double bandwidth_mbps = 100.0;

  friend bool operator==(const HardwareProfile&, const HardwareProfile&) = default;
};

// Throws DomainError when a numeric field is out of range.
void validate(const HardwareProfile& profile);

// One workload measurement. Every β lies in [0,1]. cpu/vram/swap are
// utilizations; `bandwidth` is the value fed to the bandwidth cost
// α·(1−β)⁴, so a larger sample lowers that cost term.
struct WorkloadSample {
  double cpu = 0.0;
  double vram = 0.0;
  double swap = 0.0;
  double bandwidth = 0.0;
  std::uint64_t timestamp = 0;

  // (cpu, vram, swap, bandwidth)
  Eigen::Vector4d as_vector() const { return {cpu, vram, swap, bandwidth}; }
  static WorkloadSample from_vector(const Eigen::Vector4d& beta,
                                    std::uint64_t timestamp = 0);

  friend bool operator==(const WorkloadSample&, const WorkloadSample&) = default;
};

void validate(const WorkloadSample& sample);

enum class WorkerStatus { Joined, Allocated, Running, Left };

const char* to_string(WorkerStatus status);

// Joined→Allocated→Running, and any state→Left.
bool is_valid_transition(WorkerStatus from, WorkerStatus to);

struct WorkerState {
  AgentId id;
  HardwareProfile profile;
  WorkloadSample workload;
  WorkerStatus status = WorkerStatus::Joined;

  friend bool operator==(const WorkerState&, const WorkerState&) = default;
};

struct SwarmState {
  std::string swarm_id;
  AgentId master;
  std::vector<WorkerState> workers;

  const WorkerState* find_worker(const AgentId& id) const;
  std::optional<Role> role_of(const AgentId& id) const;
};

// Fresh swarm with no workers. The id is derived from `entropy`, so equal
// entropy gives equal ids; the single-argument form draws fresh entropy.
SwarmState new_swarm(AgentId master);
SwarmState new_swarm(AgentId master, std::uint64_t entropy);

// Adds `worker` with status Joined.
SwarmState join_worker(SwarmState swarm, WorkerState worker);

SwarmState set_worker_status(SwarmState swarm, const AgentId& id,
                             WorkerStatus status);

// Marks the worker Left. Left workers keep their slot so ids stay unique.
SwarmState leave_worker(SwarmState swarm, const AgentId& id);

// Formats 128 bits derived from `entropy` as a version-4 style UUID string.
std::string uuid_from_entropy(std::uint64_t entropy);

}  // namespace flowswarm

#endif  // FLOWSWARM_MODEL_HPP
