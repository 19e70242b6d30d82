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

#include "flowswarm/mcmf.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>
#include <utility>

#include <fmt/core.h>

#include "flowswarm/error.hpp"

namespace flowswarm {

FlowNetwork::FlowNetwork(VertexIndex num_vertices, VertexIndex source, VertexIndex sink)
    : num_vertices_(num_vertices), source_(source), sink_(sink) {}

EdgeIndex FlowNetwork::add_edge(VertexIndex from, VertexIndex to,
                                FlowQuantity capacity, CostValue cost) {
  edges_.push_back({from, to, capacity, cost});
  return static_cast<EdgeIndex>(edges_.size() - 1);
}

void FlowNetwork::validate() const {
  auto in_range = [&](VertexIndex v) { return v >= 0 && v < num_vertices_; };
  if (num_vertices_ < 2) throw MalformedNetwork("a flow network needs at least two vertices");
  if (!in_range(source_) || !in_range(sink_)) {
    throw MalformedNetwork("source or sink outside the vertex range");
  }
  if (source_ == sink_) throw MalformedNetwork("source and sink must differ");
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const FlowEdge& edge = edges_[e];
    if (!in_range(edge.from) || !in_range(edge.to)) {
      throw MalformedNetwork(fmt::format("edge {} ({} -> {}) references a missing vertex",
                                         e, edge.from, edge.to));
    }
    if (edge.capacity < 0) throw MalformedNetwork(fmt::format("edge {} has negative capacity", e));
    if (edge.cost < 0) throw MalformedNetwork(fmt::format("edge {} has negative cost", e));
  }
}

namespace {

// Residual arc 2e is edge e forward, 2e+1 its reverse.
struct Residual {
  VertexIndex to;
  FlowQuantity capacity;
  CostValue cost;
};

}  // namespace

FlowResult solve(const FlowNetwork& network) {
  network.validate();
  const auto n = static_cast<std::size_t>(network.num_vertices());
  const auto& edges = network.edges();

  std::vector<Residual> arcs;
  arcs.reserve(edges.size() * 2);
  std::vector<std::vector<std::int32_t>> out(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const FlowEdge& edge = edges[e];
    out[static_cast<std::size_t>(edge.from)].push_back(static_cast<std::int32_t>(arcs.size()));
    arcs.push_back({edge.to, edge.capacity, edge.cost});
    out[static_cast<std::size_t>(edge.to)].push_back(static_cast<std::int32_t>(arcs.size()));
    arcs.push_back({edge.from, 0, -edge.cost});
  }

  constexpr CostValue kInf = std::numeric_limits<CostValue>::max();
  const auto s = static_cast<std::size_t>(network.source());
  const auto t = static_cast<std::size_t>(network.sink());
  std::vector<CostValue> potential(n, 0);
  std::vector<CostValue> dist(n);
  std::vector<std::int32_t> parent_arc(n);

  FlowResult result;
  result.flow.assign(edges.size(), 0);

  using Entry = std::pair<CostValue, VertexIndex>;
  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    dist[s] = 0;
    // Ties on distance go to the lower vertex index.
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    queue.push({0, static_cast<VertexIndex>(s)});
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      const auto uu = static_cast<std::size_t>(u);
      if (d != dist[uu]) continue;
      for (std::int32_t a : out[uu]) {
        const Residual& arc = arcs[static_cast<std::size_t>(a)];
        if (arc.capacity <= 0) continue;
        const auto v = static_cast<std::size_t>(arc.to);
        const CostValue reduced = arc.cost + potential[uu] - potential[v];
        if (d + reduced < dist[v]) {
          dist[v] = d + reduced;
          parent_arc[v] = a;
          queue.push({dist[v], arc.to});
        }
      }
    }
    if (dist[t] == kInf) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] != kInf) potential[v] += dist[v];
    }

    FlowQuantity bottleneck = std::numeric_limits<FlowQuantity>::max();
    for (std::size_t v = t; v != s;) {
      const auto a = static_cast<std::size_t>(parent_arc[v]);
      bottleneck = std::min(bottleneck, arcs[a].capacity);
      v = static_cast<std::size_t>(arcs[a ^ 1].to);
    }
    for (std::size_t v = t; v != s;) {
      const auto a = static_cast<std::size_t>(parent_arc[v]);
      arcs[a].capacity -= bottleneck;
      arcs[a ^ 1].capacity += bottleneck;
      v = static_cast<std::size_t>(arcs[a ^ 1].to);
    }
    result.total_flow += bottleneck;
  }

  for (std::size_t e = 0; e < edges.size(); ++e) {
    result.flow[e] = arcs[2 * e + 1].capacity;
    result.total_cost += result.flow[e] * edges[e].cost;
  }
  return result;
}

std::vector<FlowViolation> verify(const FlowNetwork& network, const FlowResult& result) {
  using Kind = FlowViolation::Kind;
  std::vector<FlowViolation> issues;
  const auto& edges = network.edges();
  if (result.flow.size() != edges.size()) {
    issues.push_back({Kind::Shape, -1, -1,
                      fmt::format("flow has {} entries for {} edges", result.flow.size(),
                                  edges.size())});
    return issues;
  }

  const auto n = static_cast<std::size_t>(std::max<VertexIndex>(network.num_vertices(), 0));
  std::vector<FlowQuantity> inflow(n, 0);
  std::vector<FlowQuantity> outflow(n, 0);
  CostValue cost = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const FlowEdge& edge = edges[e];
    const FlowQuantity f = result.flow[e];
    const auto index = static_cast<EdgeIndex>(e);
    if (f < 0) {
      issues.push_back({Kind::NegativeFlow, index, -1,
                        fmt::format("edge {} ({} -> {}): negative flow {}", e, edge.from,
                                    edge.to, f)});
    }
    if (f > edge.capacity) {
      issues.push_back({Kind::Capacity, index, -1,
                        fmt::format("edge {} ({} -> {}): flow {} exceeds capacity {}", e,
                                    edge.from, edge.to, f, edge.capacity)});
    }
    if (edge.from >= 0 && static_cast<std::size_t>(edge.from) < n) {
      outflow[static_cast<std::size_t>(edge.from)] += f;
    }
    if (edge.to >= 0 && static_cast<std::size_t>(edge.to) < n) {
      inflow[static_cast<std::size_t>(edge.to)] += f;
    }
    cost += f * edge.cost;
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto vertex = static_cast<VertexIndex>(v);
    if (vertex == network.source() || vertex == network.sink()) continue;
    if (inflow[v] != outflow[v]) {
      issues.push_back({Kind::Conservation, -1, vertex,
                        fmt::format("vertex {}: inflow {} != outflow {}", v, inflow[v],
                                    outflow[v])});
    }
  }
  if (network.source() >= 0 && static_cast<std::size_t>(network.source()) < n) {
    const auto s = static_cast<std::size_t>(network.source());
    const FlowQuantity value = outflow[s] - inflow[s];
    if (value != result.total_flow) {
      issues.push_back({Kind::FlowValue, -1, -1,
                        fmt::format("reported flow value {} but source emits {}",
                                    result.total_flow, value)});
    }
  }
  if (cost != result.total_cost) {
    issues.push_back({Kind::Cost, -1, -1,
                      fmt::format("reported cost {} but edges sum to {}", result.total_cost,
                                  cost)});
  }
  return issues;
}

std::string to_dimacs(const FlowNetwork& network) {
  std::string out = "c flowswarm min-cost max-flow network\n";
  out += fmt::format("p min {} {}\n", network.num_vertices(), network.num_edges());
  out += fmt::format("n {} s\n", network.source() + 1);
  out += fmt::format("n {} t\n", network.sink() + 1);
  for (const FlowEdge& e : network.edges()) {
    out += fmt::format("a {} {} 0 {} {}\n", e.from + 1, e.to + 1, e.capacity, e.cost);
  }
  return out;
}

FlowNetwork from_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::pair<VertexIndex, EdgeIndex>> header;
  VertexIndex source = -1;
  VertexIndex sink = -1;
  std::vector<FlowEdge> edges;
  auto fail = [&](const std::string& what) -> MalformedNetwork {
    return MalformedNetwork(fmt::format("dimacs line {}: {}", line_no, what));
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      long long nodes = 0;
      long long arcs = 0;
      if (!(fields >> kind >> nodes >> arcs) || kind != "min" || nodes < 0 || arcs < 0) {
        throw fail("expected 'p min NODES ARCS'");
      }
      if (header) throw fail("duplicate problem line");
      header = {static_cast<VertexIndex>(nodes), static_cast<EdgeIndex>(arcs)};
    } else if (tag == "n") {
      long long id = 0;
      std::string role;
      if (!(fields >> id >> role) || (role != "s" && role != "t")) {
        throw fail("expected 'n ID s' or 'n ID t'");
      }
      (role == "s" ? source : sink) = static_cast<VertexIndex>(id - 1);
    } else if (tag == "a") {
      long long u = 0, v = 0, low = 0, cap = 0, cost = 0;
      if (!(fields >> u >> v >> low >> cap >> cost)) throw fail("expected 'a U V LOW CAP COST'");
      if (low != 0) throw fail("lower bounds are not supported");
      edges.push_back({static_cast<VertexIndex>(u - 1), static_cast<VertexIndex>(v - 1), cap, cost});
    } else {
      throw fail("unknown line type '" + tag + "'");
    }
  }
  if (!header) throw MalformedNetwork("dimacs: missing problem line");
  if (static_cast<EdgeIndex>(edges.size()) != header->second) {
    throw MalformedNetwork(fmt::format("dimacs: header declares {} arcs, found {}",
                                       header->second, edges.size()));
  }
  FlowNetwork network(header->first, source, sink);
  for (const FlowEdge& e : edges) network.add_edge(e.from, e.to, e.capacity, e.cost);
  network.validate();
  return network;
}

}  // namespace flowswarm
