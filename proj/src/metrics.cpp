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

#include "flowswarm/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include <fmt/core.h>

#include "flowswarm/error.hpp"
#include "json.hpp"

namespace flowswarm {

double jains_index(std::span<const double> x) {
  return jains_index(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
}

AllocationHistory AllocationHistory::from_results(std::vector<AllocationResult> results) {
  AllocationHistory h;
  if (!results.empty()) {
    h.workers = results.front().worker_ids;
    h.services = results.front().service_names;
  }
  for (const auto& r : results) {
    if (r.worker_ids != h.workers || r.service_names != h.services) {
      throw DomainError("allocation history iterations use different rosters");
    }
  }
  h.iterations = std::move(results);
  return h;
}

namespace {

void require_non_empty(const AllocationHistory& history) {
  if (history.iterations.empty()) throw EmptyHistory("allocation history is empty");
}

template <typename Value>
std::vector<double> cumulative_jain(const AllocationHistory& history, Value value) {
  require_non_empty(history);
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(history.workers.size()));
  std::vector<double> series;
  for (const auto& result : history.iterations) {
    for (const auto& a : result.assignments) {
      totals[static_cast<Eigen::Index>(a.worker)] += value(a);
    }
    series.push_back(totals.squaredNorm() > 0.0 ? jains_index(totals) : 1.0);
  }
  return series;
}

}  // namespace

Eigen::MatrixXd cumulative_worker_costs(const AllocationHistory& history) {
  require_non_empty(history);
  const auto m = static_cast<Eigen::Index>(history.workers.size());
  const auto t = static_cast<Eigen::Index>(history.iterations.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, t);
  Eigen::VectorXd running = Eigen::VectorXd::Zero(m);
  for (Eigen::Index k = 0; k < t; ++k) {
    for (const auto& a : history.iterations[static_cast<std::size_t>(k)].assignments) {
      running[static_cast<Eigen::Index>(a.worker)] += a.cost;
    }
    out.col(k) = running;
  }
  return out;
}

std::vector<double> fairness_series(const AllocationHistory& history) {
  return cumulative_jain(history, [](const ServiceAssignment& a) { return a.cost; });
}

std::vector<double> allocation_count_fairness_series(const AllocationHistory& history) {
  return cumulative_jain(history, [](const ServiceAssignment&) { return 1.0; });
}

CostDispersion cost_dispersion(const AllocationHistory& history) {
  require_non_empty(history);
  std::vector<double> costs;
  for (const auto& result : history.iterations) {
    for (const auto& a : result.assignments) costs.push_back(a.cost);
  }
  CostDispersion d;
  d.samples = costs.size();
  if (costs.empty()) return d;
  const Eigen::Map<const Eigen::VectorXd> x(costs.data(), static_cast<Eigen::Index>(costs.size()));
  d.mean = x.mean();
  d.std_deviation = std::sqrt((x.array() - d.mean).square().mean());
  d.coefficient_of_variation = d.mean != 0.0 ? d.std_deviation / d.mean : 0.0;
  return d;
}

Eigen::MatrixXi allocation_frequency(const AllocationHistory& history) {
  require_non_empty(history);
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(history.workers.size()),
                                                 static_cast<Eigen::Index>(history.services.size()));
  for (const auto& result : history.iterations) {
    for (const auto& a : result.assignments) {
      ++counts(static_cast<Eigen::Index>(a.worker), static_cast<Eigen::Index>(a.service));
    }
  }
  return counts;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return fmt::format("{}", value);
  return std::string(buf.data(), end);
}

std::string emit_report(const AllocationHistory& history, ReportFormat format) {
  require_non_empty(history);
  const std::vector<double> jain = fairness_series(history);
  if (format == ReportFormat::Csv) {
    std::string out = "iteration,worker,service,cost,jain_cumulative\n";
    for (std::size_t t = 0; t < history.iterations.size(); ++t) {
      for (const auto& a : history.iterations[t].assignments) {
        out += fmt::format("{},{},{},{},{}\n", t, a.worker_id.value(), a.service_name,
                           format_number(a.cost), format_number(jain[t]));
      }
    }
    return out;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < history.iterations.size(); ++t) {
    for (const auto& a : history.iterations[t].assignments) {
      nlohmann::ordered_json row;
      row["iteration"] = t;
      row["worker"] = a.worker_id.value();
      row["service"] = a.service_name;
      row["cost"] = a.cost;
      row["jain_cumulative"] = jain[t];
      rows.push_back(std::move(row));
    }
  }
  return rows.dump(2) + "\n";
}

}  // namespace flowswarm
