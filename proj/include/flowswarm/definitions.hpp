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

// Container, experiment and cluster definition documents (JSON).
//
// Parsing is total: every input either yields a spec or throws a
// DefinitionError subclass carrying a Diagnostic. Serialization is canonical
// (fixed key order, defaults elided) and parse(serialize(x)) == x.

#ifndef FLOWSWARM_DEFINITIONS_HPP
#define FLOWSWARM_DEFINITIONS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "flowswarm/model.hpp"

namespace flowswarm {

struct VolumeMount {
  std::string host_path;
  std::string container_path;

  friend bool operator==(const VolumeMount&, const VolumeMount&) = default;
};

// One container definition file (CDF).
struct ServiceSpec {
  static constexpr double kDefaultImageSizeMb = 100.0;

  std::string name;
  std::string base_os;
  std::vector<std::string> packages;
  std::vector<std::string> repositories;
  std::vector<VolumeMount> volumes;
  std::string entrypoint;
  double predefined_cost = 0.0;  // α ∈ [0,100]
  CapabilitySet required_capabilities;
  double image_size_mb = kDefaultImageSizeMb;

  friend bool operator==(const ServiceSpec&, const ServiceSpec&) = default;
};

// Weights of the four resource cost terms; they sum to one.
struct CostWeights {
  double cpu = 0.25;
  double vram = 0.25;
  double swap = 0.25;
  double bandwidth = 0.25;

  Eigen::Vector4d as_vector() const { return {cpu, vram, swap, bandwidth}; }

  friend bool operator==(const CostWeights&, const CostWeights&) = default;
};

// Throws WeightError unless every weight is in [0,1] and the sum is 1±1e-9.
void validate(const CostWeights& weights);

struct NetworkConfig {
  std::string subnet = "10.0.0.0/24";
  std::vector<std::uint16_t> ports;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// Per-experiment override of what a CDF declares.
struct ServiceOverride {
  std::optional<double> predefined_cost;
  std::optional<CapabilitySet> required_capabilities;

  bool empty() const { return !predefined_cost && !required_capabilities; }
  friend bool operator==(const ServiceOverride&, const ServiceOverride&) = default;
};

struct ServiceEntry {
  ServiceSpec definition;          // as declared (inline or resolved CDF)
  bool inline_definition = false;  // false: referenced by name
  ServiceOverride override;

  // The definition with the experiment's overrides applied.
  ServiceSpec effective() const;

  friend bool operator==(const ServiceEntry&, const ServiceEntry&) = default;
};

// One experiment definition file (EDF).
struct ExperimentSpec {
  static constexpr double kDefaultPoolDiscount = 0.9;

  std::string name;
  std::vector<ServiceEntry> services;
  // (dependent, dependency) pairs, stored as written.
  std::vector<std::pair<std::string, std::string>> dependencies;
  NetworkConfig network;
  CostWeights weights;
  double pool_discount = kDefaultPoolDiscount;  // γ ∈ (0,1]

  std::vector<ServiceSpec> effective_services() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

// Workload generator attached to a simulated worker.
struct WorkloadModel {
  enum class Kind { Fixed, UniformNoise, Trace };

  Kind kind = Kind::UniformNoise;
  // Fixed: the sample. UniformNoise: centre of the per-worker level.
  Eigen::Vector4d center{0.3, 0.3, 0.1, 0.3};
  // UniformNoise: the worker's persistent level is drawn once from
  // center ± half_width; each iteration adds an independent ± jitter draw.
  double half_width = 0.1;
  double jitter = 0.01;
  // Trace: rows of (cpu, vram, swap, bandwidth), replayed cyclically.
  std::string trace_file;
  std::vector<Eigen::Vector4d> trace;

  // Compares only the fields meaningful for the kind.
  friend bool operator==(const WorkloadModel& a, const WorkloadModel& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Fixed: return a.center == b.center;
      case Kind::UniformNoise:
        return a.center == b.center && a.half_width == b.half_width &&
               a.jitter == b.jitter;
      case Kind::Trace: return a.trace_file == b.trace_file && a.trace == b.trace;
    }
    return false;
  }
};

struct ClusterWorker {
  AgentId id;
  HardwareProfile profile;
  WorkloadModel workload;

  friend bool operator==(const ClusterWorker&, const ClusterWorker&) = default;
};

struct ClusterSpec {
  std::vector<ClusterWorker> workers;
  std::uint64_t seed = 0;

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

using ServiceResolver =
    std::function<std::optional<ServiceSpec>(const std::string& name)>;

ServiceSpec parse_cdf(std::string_view document);
std::string serialize_cdf(const ServiceSpec& spec);

ExperimentSpec parse_edf(std::string_view document,
                         const ServiceResolver& resolver);
std::string serialize_edf(const ExperimentSpec& spec);

// Trace files named by workers are loaded relative to `base_dir`.
ClusterSpec parse_cluster(std::string_view document,
                          const std::filesystem::path& base_dir = {});
std::string serialize_cluster(const ClusterSpec& spec);

// Resolver that loads `<dir>/<name>.cdf.json`.
ServiceResolver directory_resolver(std::filesystem::path dir);

// Whitespace/comma separated rows of four β values; '#' starts a comment.
std::vector<Eigen::Vector4d> parse_workload_trace(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace flowswarm

#endif  // FLOWSWARM_DEFINITIONS_HPP
