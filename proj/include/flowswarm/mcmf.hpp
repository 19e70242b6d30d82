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

// Minimum-cost maximum-flow over integer capacities and non-negative integer
// costs, with an independent checker for capacity and conservation.

#ifndef FLOWSWARM_MCMF_HPP
#define FLOWSWARM_MCMF_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace flowswarm {

using VertexIndex = std::int32_t;
using EdgeIndex = std::int32_t;
using FlowQuantity = std::int64_t;
using CostValue = std::int64_t;

struct FlowEdge {
  VertexIndex from = 0;
  VertexIndex to = 0;
  FlowQuantity capacity = 0;
  CostValue cost = 0;

  friend bool operator==(const FlowEdge&, const FlowEdge&) = default;
};

// Directed graph with a distinguished source and sink. Edges keep their
// insertion index, which is also the solver's tie-breaking order.
class FlowNetwork {
 public:
  FlowNetwork(VertexIndex num_vertices, VertexIndex source, VertexIndex sink);

  EdgeIndex add_edge(VertexIndex from, VertexIndex to, FlowQuantity capacity,
                     CostValue cost);

  VertexIndex num_vertices() const { return num_vertices_; }
  EdgeIndex num_edges() const { return static_cast<EdgeIndex>(edges_.size()); }
  VertexIndex source() const { return source_; }
  VertexIndex sink() const { return sink_; }
  const FlowEdge& edge(EdgeIndex e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<FlowEdge>& edges() const { return edges_; }

  // Throws MalformedNetwork on dangling vertices, negative capacities or
  // costs, or source == sink.
  void validate() const;

  friend bool operator==(const FlowNetwork&, const FlowNetwork&) = default;

 private:
  VertexIndex num_vertices_;
  VertexIndex source_;
  VertexIndex sink_;
  std::vector<FlowEdge> edges_;
};

struct FlowResult {
  std::vector<FlowQuantity> flow;  // per edge, by edge index
  FlowQuantity total_flow = 0;
  CostValue total_cost = 0;

  friend bool operator==(const FlowResult&, const FlowResult&) = default;
};

// Maximum flow of minimum cost. Successive shortest augmenting paths
// (Dijkstra on reduced costs); deterministic for a fixed input.
FlowResult solve(const FlowNetwork& network);

struct FlowViolation {
  enum class Kind { Shape, NegativeFlow, Capacity, Conservation, FlowValue, Cost };

  Kind kind;
  EdgeIndex edge = -1;      // set for NegativeFlow / Capacity
  VertexIndex vertex = -1;  // set for Conservation
  std::string message;
};

// Empty on a valid flow. Checks 0 ≤ f ≤ c per edge, conservation at every
// vertex other than source and sink, and that total_flow / total_cost match
// the per-edge flows.
std::vector<FlowViolation> verify(const FlowNetwork& network, const FlowResult& result);

// DIMACS-style text: "p min N M", "n ID s|t" designators and
// "a U V LOW CAP COST" arcs, 1-based vertex ids. Lower bounds must be 0.
std::string to_dimacs(const FlowNetwork& network);
FlowNetwork from_dimacs(std::string_view text);

}  // namespace flowswarm

#endif  // FLOWSWARM_MCMF_HPP
