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

// Triangulations built from tetrahedra glued along their triangular faces.
//
// Vertices of each tetrahedron are numbered 0..3 and face f is the face
// opposite vertex f. A gluing of face slot (t, f) to (u, g) is stored as a
// full permutation `map` of {0,1,2,3} with map[f] == g: the three vertices
// of face f are sent to the three vertices of face g, and the opposite
// vertex goes to the opposite vertex. Self-gluings between two distinct
// faces of one tetrahedron are allowed; gluing a face to itself is not.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "snorm/perm.hpp"

namespace snorm {

struct FaceSlot {
  std::size_t tet = 0;
  int face = 0;

  auto operator<=>(const FaceSlot&) const = default;
};

struct Gluing {
  FaceSlot target;
  Perm4 map;
};

class Triangulation {
 public:
  Triangulation() = default;
  explicit Triangulation(std::size_t tet_count) : slots_(tet_count) {}

  std::size_t size() const { return slots_.size(); }

  /// Appends `n` unglued tetrahedra and returns the index of the first one.
  std::size_t add_tetrahedra(std::size_t n) {
    std::size_t first = slots_.size();
    slots_.resize(first + n);
    return first;
  }

  /// Glues face slot `a` to `b`; `map` sends the vertices of a.tet to those of
  /// b.tet and must satisfy map[a.face] == b.face. The reverse gluing is
  /// recorded automatically.
  void glue(FaceSlot a, FaceSlot b, Perm4 map) {
    check_slot(a);
    check_slot(b);
    if (a == b) throw std::invalid_argument("glue: a face cannot be glued to itself");
    if (map[a.face] != b.face)
      throw std::invalid_argument("glue: map must send the opposite vertex of face " +
                                  std::to_string(a.face) + " to " + std::to_string(b.face));
    if (slots_[a.tet][a.face] || slots_[b.tet][b.face])
      throw std::invalid_argument("glue: face slot already glued");
    slots_[a.tet][a.face] = Gluing{b, map};
    slots_[b.tet][b.face] = Gluing{a, map.inverse()};
  }

  void unglue(FaceSlot a) {
    check_slot(a);
    auto& g = slots_[a.tet][a.face];
    if (!g) return;
    slots_[g->target.tet][g->target.face].reset();
    g.reset();
  }

  const std::optional<Gluing>& partner(FaceSlot a) const {
    check_slot(a);
    return slots_[a.tet][a.face];
  }

  bool is_boundary(FaceSlot a) const { return !partner(a).has_value(); }

  std::size_t boundary_face_count() const {
    std::size_t n = 0;
    for (const auto& tet : slots_)
      for (const auto& g : tet)
        if (!g) ++n;
    return n;
  }

  /// Glued face pairs, each listed once with the lexicographically smaller
  /// slot first.
  std::vector<std::pair<FaceSlot, Gluing>> glued_pairs() const {
    std::vector<std::pair<FaceSlot, Gluing>> out;
    for (std::size_t t = 0; t < slots_.size(); ++t)
      for (int f = 0; f < 4; ++f)
        if (const auto& g = slots_[t][f]; g && FaceSlot{t, f} < g->target)
          out.emplace_back(FaceSlot{t, f}, *g);
    return out;
  }

  bool operator==(const Triangulation& o) const {
    if (size() != o.size()) return false;
    for (std::size_t t = 0; t < size(); ++t)
      for (int f = 0; f < 4; ++f) {
        const auto& a = slots_[t][f];
        const auto& b = o.slots_[t][f];
        if (a.has_value() != b.has_value()) return false;
        if (a && (a->target != b->target || a->map != b->map)) return false;
      }
    return true;
  }

 private:
  void check_slot(FaceSlot a) const {
    if (a.tet >= slots_.size() || a.face < 0 || a.face > 3)
      throw std::out_of_range("face slot " + std::to_string(a.tet) + ":" +
                              std::to_string(a.face) + " does not exist");
  }

  std::vector<std::array<std::optional<Gluing>, 4>> slots_;
};

// ---------------------------------------------------------------------------
// Skeleton
// ---------------------------------------------------------------------------

/// One tetrahedron around an edge. `x1`, `x2` are the local vertices playing
/// the roles of the edge's first and second endpoint; the fan is entered
/// through `enter_face` and left through `exit_face` (both contain the edge).
struct FanEntry {
  std::size_t tet = 0;
  int x1 = 0;
  int x2 = 0;
  int enter_face = 0;
  int exit_face = 0;
};

struct EdgeClass {
  std::size_t id = 0;
  bool boundary = false;
  /// Cyclic for interior edges. For boundary edges the fan is linear: the
  /// first entry's enter face and the last entry's exit face are boundary.
  std::vector<FanEntry> fan;

  std::vector<std::pair<std::size_t, int>> representatives() const {
    std::vector<std::pair<std::size_t, int>> out;
    for (const auto& e : fan) out.emplace_back(e.tet, edge_index(e.x1, e.x2));
    return out;
  }
};

struct VertexClass {
  std::size_t id = 0;
  std::vector<std::pair<std::size_t, int>> corners;  // (tet, local vertex)
};

struct EdgePosition {
  std::size_t edge = 0;  // EdgeClass id
  std::size_t pos = 0;   // index into its fan
};

struct Skeleton {
  std::vector<EdgeClass> edges;
  std::vector<VertexClass> vertices;
  std::vector<std::array<EdgePosition, 6>> edge_of;  // [tet][edge index]
  std::vector<std::array<std::size_t, 4>> vertex_of; // [tet][vertex]

  const EdgePosition& locate(std::size_t tet, int a, int b) const {
    return edge_of[tet][edge_index(a, b)];
  }
};

/// Raised when an edge is identified with itself in the reverse orientation.
class ReversedEdgeError : public std::runtime_error {
 public:
  ReversedEdgeError(std::size_t tet, int a, int b)
      : std::runtime_error("edge " + std::to_string(a) + std::to_string(b) + " of tetrahedron " +
                           std::to_string(tet) + " is identified with itself reversed"),
        tet_(tet),
        edge_(edge_index(a, b)) {}

  std::size_t tet() const { return tet_; }
  int edge() const { return edge_; }

 private:
  std::size_t tet_;
  int edge_;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Moves one step forward around an edge: leaves `e` through its exit face.
inline std::optional<FanEntry> step_forward(const Triangulation& tri, const FanEntry& e) {
  const auto& g = tri.partner({e.tet, e.exit_face});
  if (!g) return std::nullopt;
  FanEntry n;
  n.tet = g->target.tet;
  n.x1 = g->map[e.x1];
  n.x2 = g->map[e.x2];
  n.enter_face = g->target.face;
  // The exit face of the next tetrahedron is opposite the image of the third
  // vertex of the face just crossed, i.e. the image of our enter face vertex.
  n.exit_face = g->map[e.enter_face];
  return n;
}

inline std::optional<FanEntry> step_backward(const Triangulation& tri, const FanEntry& e) {
  FanEntry r{e.tet, e.x1, e.x2, e.exit_face, e.enter_face};
  auto p = step_forward(tri, r);
  if (!p) return std::nullopt;
  std::swap(p->enter_face, p->exit_face);
  return p;
}

}  // namespace detail

/// Computes edge and vertex classes. Edge classes are numbered in order of
/// their smallest (tetrahedron, edge index) slot; each fan starts at that slot
/// with x1 < x2 locally and enters through the lower-numbered of its two faces.
/// Throws ReversedEdgeError for an edge identified with itself reversed.
inline Skeleton classify_skeleton(const Triangulation& tri) {
  const std::size_t t = tri.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  Skeleton sk;
  sk.edge_of.assign(t, {});
  std::vector<std::array<std::size_t, 6>> owner(t);
  for (auto& a : owner) a.fill(kNone);

  for (std::size_t tet = 0; tet < t; ++tet) {
    for (int ei = 0; ei < 6; ++ei) {
      if (owner[tet][ei] != kNone) continue;
      const std::size_t id = sk.edges.size();
      const auto [a, b] = kEdgeVertices[ei];
      const auto [c, d] = complement(a, b);
      const FanEntry start{tet, a, b, c, d};

      auto claim = [&](const FanEntry& e) {
        int idx = edge_index(e.x1, e.x2);
        if (owner[e.tet][idx] == id) throw ReversedEdgeError(e.tet, e.x1, e.x2);
        if (owner[e.tet][idx] != kNone) throw std::logic_error("classify_skeleton: fan overlap");
        owner[e.tet][idx] = id;
      };

      EdgeClass ec;
      ec.id = id;
      std::vector<FanEntry> forward{start};
      claim(start);
      bool closed = false;
      FanEntry cur = start;
      while (auto nxt = detail::step_forward(tri, cur)) {
        if (nxt->tet == start.tet && edge_index(nxt->x1, nxt->x2) == ei) {
          if (nxt->x1 != start.x1 || nxt->enter_face != start.enter_face)
            throw ReversedEdgeError(nxt->tet, nxt->x1, nxt->x2);
          closed = true;
          break;
        }
        claim(*nxt);
        forward.push_back(*nxt);
        cur = *nxt;
      }
      if (closed) {
        ec.fan = std::move(forward);
      } else {
        std::vector<FanEntry> back;
        cur = start;
        while (auto prv = detail::step_backward(tri, cur)) {
          claim(*prv);
          back.push_back(*prv);
          cur = *prv;
        }
        ec.boundary = true;
        ec.fan.assign(back.rbegin(), back.rend());
        ec.fan.insert(ec.fan.end(), forward.begin(), forward.end());
      }
      for (std::size_t p = 0; p < ec.fan.size(); ++p) {
        const auto& e = ec.fan[p];
        sk.edge_of[e.tet][edge_index(e.x1, e.x2)] = {id, p};
      }
      sk.edges.push_back(std::move(ec));
    }
  }

  detail::UnionFind uf(4 * t);
  for (const auto& [slot, g] : tri.glued_pairs())
    for (int v : face_vertices(slot.face))
      uf.unite(4 * slot.tet + v, 4 * g.target.tet + g.map[v]);
  std::map<std::size_t, std::size_t> root_to_id;
  sk.vertex_of.assign(t, {});
  for (std::size_t tet = 0; tet < t; ++tet) {
    for (int v = 0; v < 4; ++v) {
      auto r = uf.find(4 * tet + v);
      auto [it, fresh] = root_to_id.emplace(r, sk.vertices.size());
      if (fresh) sk.vertices.push_back(VertexClass{sk.vertices.size(), {}});
      sk.vertices[it->second].corners.emplace_back(tet, v);
      sk.vertex_of[tet][v] = it->second;
    }
  }
  return sk;
}

// ---------------------------------------------------------------------------
// Manifold validation
// ---------------------------------------------------------------------------

enum class LinkType { Sphere, Disk, Other, NonSurface };

inline const char* to_string(LinkType l) {
  switch (l) {
    case LinkType::Sphere: return "sphere";
    case LinkType::Disk: return "disk";
    case LinkType::Other: return "other";
    case LinkType::NonSurface: return "non-surface";
  }
  return "?";
}

struct VertexLink {
  LinkType type = LinkType::Other;
  long euler = 0;
  std::size_t boundary_components = 0;
};

enum class ManifoldStatus { Ok, ReversedEdge, BadLink, NonSurfaceLink };

inline const char* to_string(ManifoldStatus s) {
  switch (s) {
    case ManifoldStatus::Ok: return "ok";
    case ManifoldStatus::ReversedEdge: return "reversed-edge";
    case ManifoldStatus::BadLink: return "bad-link";
    case ManifoldStatus::NonSurfaceLink: return "non-surface-link";
  }
  return "?";
}

struct ManifoldVerdict {
  ManifoldStatus status = ManifoldStatus::Ok;
  std::optional<std::size_t> vertex_class;  // offending class for link failures
  std::string detail;
  std::vector<VertexLink> links;             // per vertex class, when computed

  bool ok() const { return status == ManifoldStatus::Ok; }
};

/// Builds the link of every vertex class from corner triangles and classifies it.
inline std::vector<VertexLink> vertex_links(const Triangulation& tri, const Skeleton& sk) {
  const std::size_t t = tri.size();
  // Link vertices are (tet, v, u): the point near v on edge vu.
  auto lv = [](std::size_t tet, int v, int u) { return (4 * tet + v) * 4 + u; };
  detail::UnionFind uf(16 * t);
  for (const auto& [slot, g] : tri.glued_pairs()) {
    const auto fv = face_vertices(slot.face);
    for (int v : fv)
      for (int u : fv)
        if (u != v) uf.unite(lv(slot.tet, v, u), lv(g.target.tet, g.map[v], g.map[u]));
  }

  // Side ends of link triangles: the side of triangle (tet, v) lying in face
  // f, at its end near edge vu. Glued sides are merged end to end.
  auto se = [](std::size_t tet, int v, int f, int u) { return ((4 * tet + v) * 4 + f) * 4 + u; };
  detail::UnionFind ends(64 * t);
  for (const auto& [slot, g] : tri.glued_pairs()) {
    const auto fv = face_vertices(slot.face);
    for (int v : fv)
      for (int u : fv)
        if (u != v) ends.unite(se(slot.tet, v, slot.face, u), se(g.target.tet, g.map[v], g.target.face, g.map[u]));
  }

  std::vector<VertexLink> out(sk.vertices.size());
  for (const auto& vc : sk.vertices) {
    std::set<std::size_t> verts;
    std::size_t boundary_edges = 0, glued_edge_sides = 0;
    // Around each link vertex, every triangle corner joins two side ends.
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> star;
    for (auto [tet, v] : vc.corners) {
      for (int u = 0; u < 4; ++u) {
        if (u == v) continue;
        const std::size_t w = uf.find(lv(tet, v, u));
        verts.insert(w);
        const auto fs = complement(v, u);
        star[w].emplace_back(ends.find(se(tet, v, fs[0], u)), ends.find(se(tet, v, fs[1], u)));
      }
      for (int f = 0; f < 4; ++f) {
        if (f == v) continue;
        if (tri.is_boundary({tet, f}))
          ++boundary_edges;
        else
          ++glued_edge_sides;
      }
    }
    const long F = static_cast<long>(vc.corners.size());
    const long E = static_cast<long>(boundary_edges + glued_edge_sides / 2);
    const long V = static_cast<long>(verts.size());
    VertexLink link;
    link.euler = V - E + F;

    // Surface test: the corners around each link vertex form one cycle or
    // one path.
    bool surface = true;
    for (const auto& [wv, corners] : star) {
      std::map<std::size_t, std::size_t> idx;
      for (auto [a, b] : corners) {
        idx.emplace(a, idx.size());
        idx.emplace(b, idx.size());
      }
      detail::UnionFind cu(idx.size());
      for (auto [a, b] : corners) cu.unite(idx[a], idx[b]);
      std::set<std::size_t> comps;
      for (const auto& [k, i] : idx) comps.insert(cu.find(i));
      const std::size_t nodes = idx.size(), arcs = corners.size();
      if (comps.size() != 1 || (arcs != nodes && arcs + 1 != nodes)) {
        surface = false;
        break;
      }
    }

    // Boundary components: boundary link edges joined at shared link vertices.
    std::vector<std::pair<std::size_t, std::size_t>> bedges;
    for (auto [tet, v] : vc.corners)
      for (int f = 0; f < 4; ++f) {
        if (f == v || !tri.is_boundary({tet, f})) continue;
        auto us = complement(v, f);
        bedges.emplace_back(uf.find(lv(tet, v, us[0])), uf.find(lv(tet, v, us[1])));
      }
    {
      std::map<std::size_t, std::size_t> idx;
      for (auto [a, b] : bedges) {
        idx.emplace(a, idx.size());
        idx.emplace(b, idx.size());
      }
      detail::UnionFind bu(idx.size());
      for (auto [a, b] : bedges) bu.unite(idx[a], idx[b]);
      std::set<std::size_t> comps;
      for (auto& [k, i] : idx) comps.insert(bu.find(i));
      link.boundary_components = comps.size();
    }

    if (!surface)
      link.type = LinkType::NonSurface;
    else if (link.boundary_components == 0 && link.euler == 2)
      link.type = LinkType::Sphere;
    else if (link.boundary_components == 1 && link.euler == 1)
      link.type = LinkType::Disk;
    else
      link.type = LinkType::Other;
    out[vc.id] = link;
  }
  return out;
}

/// Accepts iff every vertex link is a sphere or a disk and no edge is
/// identified with itself reversed.
inline ManifoldVerdict validate_manifold(const Triangulation& tri) {
  ManifoldVerdict verdict;
  Skeleton sk;
  try {
    sk = classify_skeleton(tri);
  } catch (const ReversedEdgeError& e) {
    verdict.status = ManifoldStatus::ReversedEdge;
    verdict.detail = e.what();
    return verdict;
  }
  verdict.links = vertex_links(tri, sk);
  for (std::size_t i = 0; i < verdict.links.size(); ++i) {
    const auto& l = verdict.links[i];
    if (l.type == LinkType::NonSurface) {
      verdict.status = ManifoldStatus::NonSurfaceLink;
      verdict.vertex_class = i;
      verdict.detail = "link of vertex class " + std::to_string(i) + " is not a surface";
      return verdict;
    }
    if (l.type == LinkType::Other) {
      verdict.status = ManifoldStatus::BadLink;
      verdict.vertex_class = i;
      verdict.detail = "link of vertex class " + std::to_string(i) +
                       " is neither a disk nor a sphere (euler " + std::to_string(l.euler) +
                       ", boundary components " + std::to_string(l.boundary_components) + ")";
      return verdict;
    }
  }
  return verdict;
}

/// Two copies of `tri`, each boundary face of the first glued to its twin in
/// the second by the identity. Tetrahedron i of the second copy is i + size().
inline Triangulation doubled(const Triangulation& tri) {
  if (tri.boundary_face_count() == 0)
    throw std::invalid_argument("doubled: triangulation has no boundary");
  const std::size_t t = tri.size();
  Triangulation out(2 * t);
  for (const auto& [slot, g] : tri.glued_pairs()) {
    out.glue(slot, g.target, g.map);
    out.glue({slot.tet + t, slot.face}, {g.target.tet + t, g.target.face}, g.map);
  }
  for (std::size_t tet = 0; tet < t; ++tet)
    for (int f = 0; f < 4; ++f)
      if (tri.is_boundary({tet, f})) out.glue({tet, f}, {tet + t, f}, Perm4{});
  return out;
}

// ---------------------------------------------------------------------------
// Simplicial complex check
// ---------------------------------------------------------------------------

struct SimplicialVerdict {
  bool ok = true;
  std::string detail;
};

/// A triangulation is a simplicial complex when every simplex has distinct
/// vertices and is determined by its vertex set.
inline SimplicialVerdict check_simplicial(const Triangulation& tri) {
  auto sk = classify_skeleton(tri);
  SimplicialVerdict v;
  auto fail = [&](std::string msg) {
    v.ok = false;
    v.detail = std::move(msg);
    return v;
  };
  for (std::size_t tet = 0; tet < tri.size(); ++tet) {
    std::set<std::size_t> vs(sk.vertex_of[tet].begin(), sk.vertex_of[tet].end());
    if (vs.size() != 4)
      return fail("tetrahedron " + std::to_string(tet) + " has repeated vertices");
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_keys;
  for (const auto& e : sk.edges) {
    const auto& f = e.fan.front();
    auto a = sk.vertex_of[f.tet][f.x1], b = sk.vertex_of[f.tet][f.x2];
    auto [it, fresh] = edge_keys.emplace(std::minmax(a, b), e.id);
    if (!fresh)
      return fail("edge classes " + std::to_string(it->second) + " and " + std::to_string(e.id) +
                  " share both endpoints");
  }
  std::map<std::array<std::size_t, 3>, FaceSlot> face_keys;
  for (std::size_t tet = 0; tet < tri.size(); ++tet)
    for (int f = 0; f < 4; ++f) {
      FaceSlot s{tet, f};
      if (const auto& g = tri.partner(s); g && g->target < s) continue;
      auto fv = face_vertices(f);
      std::array<std::size_t, 3> key{sk.locate(tet, fv[0], fv[1]).edge,
                                     sk.locate(tet, fv[0], fv[2]).edge,
                                     sk.locate(tet, fv[1], fv[2]).edge};
      std::sort(key.begin(), key.end());
      auto [it, fresh] = face_keys.emplace(key, s);
      if (!fresh)
        return fail("faces " + std::to_string(it->second.tet) + ":" +
                    std::to_string(it->second.face) + " and " + std::to_string(tet) + ":" +
                    std::to_string(f) + " share the same edges");
    }
  std::set<std::array<std::size_t, 4>> tet_keys;
  for (std::size_t tet = 0; tet < tri.size(); ++tet) {
    auto key = sk.vertex_of[tet];
    std::sort(key.begin(), key.end());
    if (!tet_keys.insert(key).second)
      return fail("tetrahedron " + std::to_string(tet) + " repeats another's vertex set");
  }
  return v;
}

}  // namespace snorm
