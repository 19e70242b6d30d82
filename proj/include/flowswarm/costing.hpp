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

// Workload-sensitive cost model: per-resource cost functions, the aggregate
// worker/service edge cost, capability and dependency matrices, and the
// pooled-service cost/capability rules.

#ifndef FLOWSWARM_COSTING_HPP
#define FLOWSWARM_COSTING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "flowswarm/definitions.hpp"
#include "flowswarm/error.hpp"
#include "flowswarm/model.hpp"

namespace flowswarm {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// H: workers × services, true iff the worker can host the service.
using CapabilityMatrix = Matrix<bool>;
// Ξ: services × services, (k, j) true iff service k depends on service j.
using DependencyMatrix = Matrix<bool>;
// C: workers × units, 1 on feasible pairs.
using CapacityMatrix = Matrix<int>;
using IntegerCostMatrix = Matrix<std::int64_t>;

// Costs are multiplied by this and rounded half-to-even before solving.
inline constexpr double kCostScale = 1e6;

namespace detail {

template <typename Scalar>
void check_cost_domain(Scalar alpha, Scalar beta) {
  // Negated comparisons so NaN is rejected.
  if (!(alpha >= Scalar(0) && alpha <= Scalar(100))) {
    throw DomainError("predefined cost outside [0,100]");
  }
  if (!(beta >= Scalar(0) && beta <= Scalar(1))) {
    throw DomainError("workload outside [0,1]");
  }
}

template <typename Scalar>
Scalar fourth_power(Scalar x) {
  const Scalar sq = x * x;
  return sq * sq;
}

}  // namespace detail

// ε = α·β⁴
template <typename Scalar>
Scalar resource_cost_cpu(Scalar alpha, Scalar beta) {
  detail::check_cost_domain(alpha, beta);
  return alpha * detail::fourth_power(beta);
}

// η = α·β⁴
template <typename Scalar>
Scalar resource_cost_vram(Scalar alpha, Scalar beta) {
  detail::check_cost_domain(alpha, beta);
  return alpha * detail::fourth_power(beta);
}

// ζ = α·β, rising earlier than ε and η.
template <typename Scalar>
Scalar resource_cost_swap(Scalar alpha, Scalar beta) {
  detail::check_cost_domain(alpha, beta);
  return alpha * beta;
}

// θ = α·(1−β)⁴
template <typename Scalar>
Scalar resource_cost_bandwidth(Scalar alpha, Scalar beta) {
  detail::check_cost_domain(alpha, beta);
  return alpha * detail::fourth_power(Scalar(1) - beta);
}

// (ε, η, ζ, θ) for β = (cpu, vram, swap, bandwidth).
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 1> resource_costs(
    Scalar alpha, const Eigen::Matrix<Scalar, 4, 1>& beta) {
  return {resource_cost_cpu(alpha, beta[0]), resource_cost_vram(alpha, beta[1]),
          resource_cost_swap(alpha, beta[2]),
          resource_cost_bandwidth(alpha, beta[3])};
}

// a_uv: weighted sum of the four resource costs.
double edge_cost(double alpha, const WorkloadSample& workload,
                 const CostWeights& weights);

// Rows are workers, columns services; entry is edge_cost. This is the raw
// m×n cost matrix before feasibility and pooling are applied.
Eigen::MatrixXd service_cost_matrix(std::span<const WorkloadSample> workloads,
                                    std::span<const double> alphas,
                                    const CostWeights& weights);

// Single worker's row of service_cost_matrix; what a worker reports back
// when polled.
Eigen::RowVectorXd service_cost_row(const WorkloadSample& workload,
                                    std::span<const double> alphas,
                                    const CostWeights& weights);

// H by tag inclusion: required ⊆ offered.
CapabilityMatrix build_capability_matrix(std::span<const CapabilitySet> offered,
                                         std::span<const CapabilitySet> required);
CapabilityMatrix build_capability_matrix(std::span<const WorkerState> workers,
                                         std::span<const ServiceSpec> services);

// Ξ from (dependent, dependency) name pairs. Throws DomainError on
// unknown names or self-dependencies.
DependencyMatrix build_dependency_matrix(
    std::span<const std::string> service_names,
    std::span<const std::pair<std::string, std::string>> dependencies);
DependencyMatrix build_dependency_matrix(const ExperimentSpec& experiment);

// γ·Σ edge_cost over the pool members. Throws PoolTooSmall for fewer than
// two members and DomainError for γ outside (0,1].
double pooled_cost(std::span<const double> member_alphas,
                   const WorkloadSample& workload, const CostWeights& weights,
                   double discount);

// Logical AND of H over the member columns for one worker row.
bool pooled_capability(std::span<const std::size_t> members,
                       Eigen::Index worker, const CapabilityMatrix& capability);

// Cost matrix over allocation units (a unit is a list of member service
// indices; singles have one member). Infeasible entries hold no value.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(Eigen::MatrixXd cost, Matrix<bool> feasible,
             double scale = kCostScale);

  Eigen::Index workers() const { return cost_.rows(); }
  Eigen::Index units() const { return cost_.cols(); }
  double scale() const { return scale_; }

  bool feasible(Eigen::Index worker, Eigen::Index unit) const {
    return feasible_(worker, unit);
  }
  std::optional<double> at(Eigen::Index worker, Eigen::Index unit) const;
  // Precondition: feasible(worker, unit).
  std::int64_t scaled(Eigen::Index worker, Eigen::Index unit) const;

  const Matrix<bool>& feasibility() const { return feasible_; }
  // Infeasible entries are NaN here; use feasibility() to mask.
  const Eigen::MatrixXd& values() const { return cost_; }
  // Infeasible entries are -1.
  IntegerCostMatrix integerized() const;
  CapacityMatrix capacities() const { return feasible_.cast<int>(); }

  // Keeps only the given unit columns, in that order.
  CostMatrix select_units(std::span<const Eigen::Index> columns) const;

 private:
  Eigen::MatrixXd cost_;
  Matrix<bool> feasible_;
  double scale_ = kCostScale;
};

// Units' costs from the service cost matrix: singles copy the column, pools
// take γ times the member sum; feasibility is the H-conjunction.
CostMatrix unit_cost_matrix(const Eigen::MatrixXd& service_costs,
                            const CapabilityMatrix& capability,
                            std::span<const std::vector<std::size_t>> units,
                            double discount);

// round-half-to-even(cost · scale)
std::int64_t integerize_cost(double cost, double scale = kCostScale);

}  // namespace flowswarm

#endif  // FLOWSWARM_COSTING_HPP
