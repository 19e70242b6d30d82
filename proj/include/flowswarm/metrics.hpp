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

// Fairness and dispersion over allocation histories.

#ifndef FLOWSWARM_METRICS_HPP
#define FLOWSWARM_METRICS_HPP

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowswarm/allocator.hpp"
#include "flowswarm/error.hpp"
#include "flowswarm/model.hpp"

namespace flowswarm {

// (Σx)² / (n·Σx²). Throws DomainError on empty input, negative entries or
// an all-zero vector.
template <typename Derived>
typename Derived::Scalar jains_index(const Eigen::MatrixBase<Derived>& x);

double jains_index(std::span<const double> x);

struct AllocationHistory {
  std::vector<AgentId> workers;
  std::vector<std::string> services;
  std::vector<AllocationResult> iterations;

  // Rosters are taken from the first result; throws DomainError if a later
  // result disagrees.
  static AllocationHistory from_results(std::vector<AllocationResult> results);
};

// Workers × iterations; column t holds each worker's allocated cost summed
// over iterations 0..t.
Eigen::MatrixXd cumulative_worker_costs(const AllocationHistory& history);

// Jain's index over cumulative per-worker allocated cost, one value per
// iteration. An iteration where every cumulative cost is still zero counts
// as perfectly even (1).
std::vector<double> fairness_series(const AllocationHistory& history);

// Same, over cumulative per-worker assignment counts.
std::vector<double> allocation_count_fairness_series(const AllocationHistory& history);

struct CostDispersion {
  double std_deviation = 0.0;             // population σ
  double coefficient_of_variation = 0.0;  // σ/μ, 0 when μ = 0
  double mean = 0.0;
  std::size_t samples = 0;
};

// Over every per-service assignment cost in every iteration.
CostDispersion cost_dispersion(const AllocationHistory& history);

// Workers × services assignment counts.
Eigen::MatrixXi allocation_frequency(const AllocationHistory& history);

enum class ReportFormat { Csv, Json };

// Rows (iteration, worker, service, cost, jain_cumulative) ordered by
// iteration, then service.
std::string emit_report(const AllocationHistory& history, ReportFormat format);

// Shortest text that reads back as the same double.
std::string format_number(double value);

// --- implementation ---

template <typename Derived>
typename Derived::Scalar jains_index(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) throw DomainError("Jain's index of an empty vector");
  if (!(x.array() >= Scalar(0)).all()) {
    throw DomainError("Jain's index needs non-negative values");
  }
  const Scalar peak = x.maxCoeff();
  if (!(peak > Scalar(0))) throw DomainError("Jain's index of an all-zero vector");
  // The index is scale-invariant; normalizing by the peak makes equal
  // entries exactly 1 and keeps the squares from overflowing.
  const auto y = (x.derived().template cast<Scalar>() / peak).eval();
  const Scalar sum = y.sum();
  return sum * sum / (static_cast<Scalar>(y.size()) * y.squaredNorm());
}

}  // namespace flowswarm

#endif  // FLOWSWARM_METRICS_HPP
