// Copyright 2026 The snorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// The local immersibility test around a single interior edge. The block of
// tetrahedra around the edge becomes a layered directed graph: vertex
// (i, level) sits at interface i of the fan, level 1 next to the edge's first
// endpoint and level 2 next to the second. Each fan tetrahedron contributes
// one edge per disk type meeting the edge, with the disk's coordinate as
// capacity. Interfaces 0 and m are the same face, cut open.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "snorm/gluing.hpp"
#include "snorm/normal_coords.hpp"
#include "snorm/triangulation.hpp"

namespace snorm {

struct FlowEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Count capacity;
  std::size_t position = 0;  // fan position
  int disk = 0;
};

struct BlockFlowGraph {
  std::size_t edge = 0;
  std::size_t fan_length = 0;
  std::vector<FlowEdge> edges;  // 4 per fan position, in position order

  std::size_t vertex_count() const { return 2 * (fan_length + 1); }
  static std::size_t vertex(std::size_t interface, int level) { return 2 * interface + (level - 1); }
  std::size_t s1() const { return vertex(0, 1); }
  std::size_t s2() const { return vertex(0, 2); }
  std::size_t t1() const { return vertex(fan_length, 1); }
  std::size_t t2() const { return vertex(fan_length, 2); }

  Count capacity_out(std::size_t v) const {
    Count c = 0;
    for (const auto& e : edges)
      if (e.from == v) c += e.capacity;
    return c;
  }
};

inline BlockFlowGraph build_block_graph(const Triangulation& tri, const NormalCoordinates& n,
                                        const Skeleton& sk, std::size_t edge) {
  require_length(tri, n);
  if (edge >= sk.edges.size()) throw std::out_of_range("build_block_graph: no such edge class");
  const auto& ec = sk.edges[edge];
  if (ec.boundary) throw std::invalid_argument("build_block_graph: edge class is on the boundary");
  BlockFlowGraph g;
  g.edge = edge;
  g.fan_length = ec.fan.size();
  for (std::size_t p = 0; p < ec.fan.size(); ++p) {
    const auto& f = ec.fan[p];
    auto cd = complement(f.x1, f.x2);
    const int disks[4] = {tri_type(f.x1), tri_type(f.x2), quad_type(f.x1, cd[0]),
                          quad_type(f.x1, cd[1])};
    for (int d : disks) {
      int in = arc_cut_vertex(d, f.enter_face) == f.x1 ? 1 : 2;
      int out = arc_cut_vertex(d, f.exit_face) == f.x1 ? 1 : 2;
      g.edges.push_back({BlockFlowGraph::vertex(p, in), BlockFlowGraph::vertex(p + 1, out),
                         n(f.tet, d), p, d});
    }
  }
  return g;
}

struct FlowResult {
  Count value = 0;
  std::vector<Count> flow;  // per edge of the graph
};

/// Exact maximum flow by augmenting paths with capacity scaling: O(E^2 log C)
/// arithmetic operations, so polynomial in the bit length of the capacities.
/// `capacities` overrides the graph's own capacities when non-empty.
inline FlowResult max_flow(const BlockFlowGraph& g, std::size_t source, std::size_t sink,
                           const std::vector<Count>& capacities = {}) {
  const std::size_t nv = g.vertex_count();
  if (source >= nv || sink >= nv) throw std::out_of_range("max_flow: no such vertex");
  const std::size_t ne = g.edges.size();
  std::vector<Count> cap(ne);
  for (std::size_t i = 0; i < ne; ++i) cap[i] = capacities.empty() ? g.edges[i].capacity : capacities.at(i);

  FlowResult r;
  r.flow.assign(ne, 0);
  if (source == sink) return r;

  // Residual arcs: 2i is edge i forward, 2i+1 its reverse.
  std::vector<std::vector<std::size_t>> adj(nv);
  for (std::size_t i = 0; i < ne; ++i) {
    adj[g.edges[i].from].push_back(2 * i);
    adj[g.edges[i].to].push_back(2 * i + 1);
  }
  auto head = [&](std::size_t a) { return a % 2 == 0 ? g.edges[a / 2].to : g.edges[a / 2].from; };
  auto residual = [&](std::size_t a) -> Count {
    return a % 2 == 0 ? Count(cap[a / 2] - r.flow[a / 2]) : r.flow[a / 2];
  };

  Count max_cap = 0;
  for (const auto& c : cap) max_cap = std::max(max_cap, c);
  if (max_cap == 0) return r;
  Count delta = 1;
  while (delta * 2 <= max_cap) delta *= 2;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> via(nv);
  while (delta >= 1) {
    for (;;) {
      std::fill(via.begin(), via.end(), kNone);
      std::vector<char> seen(nv, 0);
      std::queue<std::size_t> q;
      q.push(source);
      seen[source] = 1;
      while (!q.empty() && !seen[sink]) {
        auto v = q.front();
        q.pop();
        for (auto a : adj[v]) {
          auto w = head(a);
          if (seen[w] || residual(a) < delta) continue;
          seen[w] = 1;
          via[w] = a;
          q.push(w);
        }
      }
      if (!seen[sink]) break;
      Count bottleneck = -1;
      for (auto v = sink; v != source; v = head(via[v] ^ 1)) {
        Count res = residual(via[v]);
        if (bottleneck < 0 || res < bottleneck) bottleneck = res;
      }
      for (auto v = sink; v != source; v = head(via[v] ^ 1)) {
        auto a = via[v];
        if (a % 2 == 0)
          r.flow[a / 2] += bottleneck;
        else
          r.flow[a / 2] -= bottleneck;
      }
      r.value += bottleneck;
    }
    delta /= 2;
  }
  return r;
}

struct LocalVerdict {
  std::size_t edge = 0;
  bool immersible = false;
  Count flow_value = 0;
  Count bound = 0;  // total capacity leaving s1
  BlockFlowGraph graph;
  FlowResult flow;
};

/// Immersibility of the block around `edge`: the maximum s1 -> t1 flow must
/// saturate the edges leaving s1.
inline LocalVerdict local_immersibility_test(const Triangulation& tri, const NormalCoordinates& n,
                                             const Skeleton& sk, std::size_t edge) {
  LocalVerdict v;
  v.edge = edge;
  v.graph = build_block_graph(tri, n, sk, edge);
  v.flow = max_flow(v.graph, v.graph.s1(), v.graph.t1());
  v.flow_value = v.flow.value;
  v.bound = v.graph.capacity_out(v.graph.s1());
  v.immersible = v.flow_value == v.bound;
  return v;
}

/// Runs the local test on every interior edge. With jobs > 1 edges are split
/// across threads; the result does not depend on the job count.
inline std::vector<LocalVerdict> local_check_all(const Triangulation& tri, const NormalCoordinates& n,
                                                 const Skeleton& sk, unsigned jobs = 1) {
  std::vector<std::size_t> interior;
  for (const auto& e : sk.edges)
    if (!e.boundary) interior.push_back(e.id);
  std::vector<LocalVerdict> out(interior.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < interior.size(); i += stride)
      out[i] = local_immersibility_test(tri, n, sk, interior[i]);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, interior.size()))));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    for (auto& t : pool) t.join();
  }
  return out;
}

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct FlowPath {
  std::vector<std::size_t> edges;  // one graph edge per fan position
  Count multiplicity;
};

// Decomposes an acyclic flow into source-sink paths, always taking the
// lowest-numbered edge with remaining flow.
inline std::vector<FlowPath> decompose(const BlockFlowGraph& g, std::vector<Count> flow,
                                       std::size_t source, std::size_t sink) {
  std::vector<FlowPath> paths;
  for (;;) {
    FlowPath p;
    std::size_t v = source;
    while (v != sink) {
      std::size_t pick = g.edges.size();
      for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].from == v && flow[i] > 0) {
          pick = i;
          break;
        }
      if (pick == g.edges.size()) break;
      p.edges.push_back(pick);
      v = g.edges[pick].to;
    }
    if (p.edges.empty()) break;
    if (v != sink) throw std::logic_error("decompose: flow does not reach the sink");
    p.multiplicity = flow[p.edges.front()];
    for (auto e : p.edges) p.multiplicity = std::min(p.multiplicity, flow[e]);
    for (auto e : p.edges) flow[e] -= p.multiplicity;
    paths.push_back(std::move(p));
  }
  return paths;
}

}  // namespace detail

/// Turns a saturating s1 -> t1 flow into local gluings on the block of
/// `edge`: the residual capacities carry a saturating s2 -> t2 flow, both
/// flows split into paths, and each path closes into one block curve winding
/// once around the edge.
inline GlobalGluing extract_gluing_from_flow(const Triangulation& tri, const NormalCoordinates& n,
                                             const Skeleton& sk, std::size_t edge,
                                             const FlowResult& flow1) {
  auto g = build_block_graph(tri, n, sk, edge);
  if (flow1.flow.size() != g.edges.size()) throw std::invalid_argument("extract: flow size mismatch");
  Count out1 = 0, used1 = 0;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].from == g.s1()) {
      out1 += g.edges[i].capacity;
      used1 += flow1.flow[i];
    }
  if (used1 != out1) throw FlowError("extract: the s1 -> t1 flow does not saturate s1");

  std::vector<Count> residual(g.edges.size());
  for (std::size_t i = 0; i < g.edges.size(); ++i) residual[i] = g.edges[i].capacity - flow1.flow[i];
  auto flow2 = max_flow(g, g.s2(), g.t2(), residual);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (flow2.flow[i] != residual[i])
      throw FlowError("extract: residual flow from s2 to t2 does not use all residual capacity");

  const auto& fan = sk.edges[edge].fan;
  const std::size_t m = fan.size();
  std::vector<std::vector<std::ptrdiff_t>> perms;  // per site touched, -1 unset
  std::map<Site, std::size_t> touched;
  std::vector<std::size_t> next_copy(g.edges.size(), 0);

  auto arc_index = [&](std::size_t tet, int face, int disk, std::size_t copy) -> std::pair<ArcType, std::size_t> {
    int cut = arc_cut_vertex(disk, face);
    ArcType a{{tet, face}, cut};
    if (!is_quad(disk)) return {a, copy};
    return {a, to_index(n(tet, tri_type(cut)), "extract") + copy};
  };

  auto emit = [&](const detail::FlowPath& path) {
    std::vector<std::size_t> copies(m);
    for (std::size_t p = 0; p < m; ++p) copies[p] = next_copy[path.edges[p]]++;
    for (std::size_t p = 0; p < m; ++p) {
      const auto& e1 = g.edges[path.edges[p]];
      const auto& e2 = g.edges[path.edges[(p + 1) % m]];
      auto [arc1, i1] = arc_index(fan[p].tet, fan[p].exit_face, e1.disk, copies[p]);
      auto [arc2, i2] = arc_index(fan[(p + 1) % m].tet, fan[(p + 1) % m].enter_face, e2.disk,
                                  copies[(p + 1) % m]);
      Site s = site_of(tri, arc1);
      bool forward = s == arc1;
      auto [it, fresh] = touched.emplace(s, perms.size());
      if (fresh) perms.emplace_back(to_index(arc_count(n, s), "extract"), -1);
      auto& perm = perms[it->second];
      std::size_t from = forward ? i1 : i2, to = forward ? i2 : i1;
      if (perm.at(from) != -1 && perm[from] != static_cast<std::ptrdiff_t>(to))
        throw std::logic_error("extract: conflicting gluing entries");
      perm[from] = static_cast<std::ptrdiff_t>(to);
    }
  };

  for (const std::vector<Count>* f : std::array<const std::vector<Count>*, 2>{&flow1.flow, &flow2.flow}) {
    bool first = f == &flow1.flow;
    auto paths = detail::decompose(g, *f, first ? g.s1() : g.s2(), first ? g.t1() : g.t2());
    for (const auto& p : paths) {
      std::size_t mult = to_index(p.multiplicity, "extract");
      for (std::size_t c = 0; c < mult; ++c) emit(p);
    }
  }

  GlobalGluing out;
  for (const auto& [s, idx] : touched) {
    Permutation p;
    for (auto x : perms[idx]) {
      if (x < 0) throw std::logic_error("extract: incomplete local gluing");
      p.push_back(static_cast<std::size_t>(x));
    }
    out.set(s, std::move(p));
  }
  return out;
}

/// Fills every nonempty interior site missing from `partial` with the identity.
inline GlobalGluing complete_with_identity(const Triangulation& tri, const NormalCoordinates& n,
                                           GlobalGluing partial) {
  for (const auto& s : interior_sites(tri)) {
    if (partial.contains(s)) continue;
    auto k = to_index(arc_count(n, s), "complete_with_identity");
    if (k) partial.set(s, identity_permutation(k));
  }
  return partial;
}

}  // namespace snorm
