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

#include "flowswarm/costing.hpp"

#include <algorithm>
#include <cfenv>
#include <limits>

#include <fmt/core.h>

namespace flowswarm {

double edge_cost(double alpha, const WorkloadSample& workload,
                 const CostWeights& weights) {
  // Summed term by term in (cpu, vram, swap, bandwidth) order so the result
  // does not depend on vectorized reduction order.
  const Eigen::Vector4d terms = resource_costs(alpha, workload.as_vector());
  return terms[0] * weights.cpu + terms[1] * weights.vram + terms[2] * weights.swap +
         terms[3] * weights.bandwidth;
}

Eigen::RowVectorXd service_cost_row(const WorkloadSample& workload,
                                    std::span<const double> alphas,
                                    const CostWeights& weights) {
  Eigen::RowVectorXd row(static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    row[static_cast<Eigen::Index>(j)] = edge_cost(alphas[j], workload, weights);
  }
  return row;
}

Eigen::MatrixXd service_cost_matrix(std::span<const WorkloadSample> workloads,
                                    std::span<const double> alphas,
                                    const CostWeights& weights) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(workloads.size()),
                    static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t i = 0; i < workloads.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = service_cost_row(workloads[i], alphas, weights);
  }
  return a;
}

CapabilityMatrix build_capability_matrix(std::span<const CapabilitySet> offered,
                                         std::span<const CapabilitySet> required) {
  CapabilityMatrix h(static_cast<Eigen::Index>(offered.size()),
                     static_cast<Eigen::Index>(required.size()));
  for (std::size_t i = 0; i < offered.size(); ++i) {
    for (std::size_t j = 0; j < required.size(); ++j) {
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::includes(
          offered[i].begin(), offered[i].end(), required[j].begin(), required[j].end());
    }
  }
  return h;
}

CapabilityMatrix build_capability_matrix(std::span<const WorkerState> workers,
                                         std::span<const ServiceSpec> services) {
  std::vector<CapabilitySet> offered;
  std::vector<CapabilitySet> required;
  for (const auto& w : workers) offered.push_back(w.profile.capabilities);
  for (const auto& s : services) required.push_back(s.required_capabilities);
  return build_capability_matrix(offered, required);
}

DependencyMatrix build_dependency_matrix(
    std::span<const std::string> service_names,
    std::span<const std::pair<std::string, std::string>> dependencies) {
  const auto n = static_cast<Eigen::Index>(service_names.size());
  DependencyMatrix xi = DependencyMatrix::Constant(n, n, false);
  auto index_of = [&](const std::string& name) {
    auto it = std::find(service_names.begin(), service_names.end(), name);
    if (it == service_names.end()) throw DomainError("unknown service '" + name + "'");
    return static_cast<Eigen::Index>(it - service_names.begin());
  };
  for (const auto& [dependent, dependency] : dependencies) {
    const Eigen::Index k = index_of(dependent);
    const Eigen::Index j = index_of(dependency);
    if (k == j) throw DomainError("service '" + dependent + "' depends on itself");
    xi(k, j) = true;
  }
  return xi;
}

DependencyMatrix build_dependency_matrix(const ExperimentSpec& experiment) {
  std::vector<std::string> names;
  for (const auto& entry : experiment.services) names.push_back(entry.definition.name);
  return build_dependency_matrix(names, experiment.dependencies);
}

double pooled_cost(std::span<const double> member_alphas,
                   const WorkloadSample& workload, const CostWeights& weights,
                   double discount) {
  if (member_alphas.size() < 2) {
    throw PoolTooSmall(fmt::format("a pool needs at least two services, got {}",
                                   member_alphas.size()));
  }
  if (!(discount > 0.0 && discount <= 1.0)) throw DomainError("pool discount outside (0,1]");
  double sum = 0.0;
  for (double alpha : member_alphas) sum += edge_cost(alpha, workload, weights);
  return discount * sum;
}

bool pooled_capability(std::span<const std::size_t> members, Eigen::Index worker,
                       const CapabilityMatrix& capability) {
  return std::all_of(members.begin(), members.end(), [&](std::size_t j) {
    return capability(worker, static_cast<Eigen::Index>(j));
  });
}

CostMatrix::CostMatrix(Eigen::MatrixXd cost, Matrix<bool> feasible, double scale)
    : cost_(std::move(cost)), feasible_(std::move(feasible)), scale_(scale) {
  if (cost_.rows() != feasible_.rows() || cost_.cols() != feasible_.cols()) {
    throw DomainError("cost and feasibility matrices differ in shape");
  }
  for (Eigen::Index i = 0; i < cost_.rows(); ++i) {
    for (Eigen::Index u = 0; u < cost_.cols(); ++u) {
      if (feasible_(i, u) && !(cost_(i, u) >= 0.0 && std::isfinite(cost_(i, u)))) {
        throw DomainError("feasible cost entries must be finite and non-negative");
      }
      if (!feasible_(i, u)) cost_(i, u) = std::numeric_limits<double>::quiet_NaN();
    }
  }
}

std::optional<double> CostMatrix::at(Eigen::Index worker, Eigen::Index unit) const {
  if (!feasible_(worker, unit)) return std::nullopt;
  return cost_(worker, unit);
}

std::int64_t CostMatrix::scaled(Eigen::Index worker, Eigen::Index unit) const {
  return integerize_cost(cost_(worker, unit), scale_);
}

IntegerCostMatrix CostMatrix::integerized() const {
  IntegerCostMatrix out(cost_.rows(), cost_.cols());
  for (Eigen::Index i = 0; i < cost_.rows(); ++i) {
    for (Eigen::Index u = 0; u < cost_.cols(); ++u) {
      out(i, u) = feasible_(i, u) ? scaled(i, u) : -1;
    }
  }
  return out;
}

CostMatrix CostMatrix::select_units(std::span<const Eigen::Index> columns) const {
  CostMatrix out;
  out.scale_ = scale_;
  out.cost_.resize(cost_.rows(), static_cast<Eigen::Index>(columns.size()));
  out.feasible_.resize(cost_.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out.cost_.col(static_cast<Eigen::Index>(c)) = cost_.col(columns[c]);
    out.feasible_.col(static_cast<Eigen::Index>(c)) = feasible_.col(columns[c]);
  }
  return out;
}

CostMatrix unit_cost_matrix(const Eigen::MatrixXd& service_costs,
                            const CapabilityMatrix& capability,
                            std::span<const std::vector<std::size_t>> units,
                            double discount) {
  if (service_costs.rows() != capability.rows() || service_costs.cols() != capability.cols()) {
    throw DomainError("service cost and capability matrices differ in shape");
  }
  if (!(discount > 0.0 && discount <= 1.0)) throw DomainError("pool discount outside (0,1]");
  const Eigen::Index m = service_costs.rows();
  const auto n_units = static_cast<Eigen::Index>(units.size());
  Eigen::MatrixXd cost(m, n_units);
  Matrix<bool> feasible(m, n_units);
  for (Eigen::Index u = 0; u < n_units; ++u) {
    const auto& members = units[static_cast<std::size_t>(u)];
    if (members.empty()) throw DomainError("allocation unit without services");
    for (Eigen::Index i = 0; i < m; ++i) {
      feasible(i, u) = pooled_capability(members, i, capability);
      if (members.size() == 1) {
        cost(i, u) = service_costs(i, static_cast<Eigen::Index>(members.front()));
      } else {
        double sum = 0.0;
        for (std::size_t j : members) sum += service_costs(i, static_cast<Eigen::Index>(j));
        cost(i, u) = discount * sum;
      }
    }
  }
  return CostMatrix(std::move(cost), std::move(feasible));
}

std::int64_t integerize_cost(double cost, double scale) {
  // nearbyint honours the current rounding mode; the default mode is
  // round-half-to-even.
  return static_cast<std::int64_t>(std::nearbyint(cost * scale));
}

}  // namespace flowswarm
