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

// Local and global gluings of normal disk instances, block curves around
// edges, and the immersion certificate check.
//
// Instance numbering: at arc type (face, cut vertex v) of a tetrahedron with
// v_t copies of Tri(v) and v_q copies of the quadrilateral whose arc has this
// type, arc instance i < v_t belongs to triangle copy i and arc instance
// v_t + c to quadrilateral copy c. Copy numbers are global per disk, so the
// same disk instance has the same copy number on all of its faces.
//
// A site is an arc type on the lexicographically smaller face slot of a glued
// pair; its permutation sends side-1 instance indices to side-2 indices.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snorm/normal_coords.hpp"
#include "snorm/triangulation.hpp"

namespace snorm {

using Site = ArcType;
using Permutation = std::vector<std::size_t>;

/// Converts a coordinate to a machine integer for instance enumeration.
inline std::size_t to_index(const Count& c, const char* what) {
  if (c > Count(std::numeric_limits<std::size_t>::max() / 16))
    throw std::length_error(std::string(what) + ": coordinate too large to enumerate instances");
  return static_cast<std::size_t>(c);
}

inline bool is_permutation(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  for (auto x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

inline Permutation identity_permutation(std::size_t k) {
  Permutation p(k);
  for (std::size_t i = 0; i < k; ++i) p[i] = i;
  return p;
}

class GlobalGluing {
 public:
  void set(const Site& s, Permutation p) {
    if (!is_permutation(p)) throw std::invalid_argument("gluing: not a permutation");
    perms_[s] = std::move(p);
  }
  const Permutation* find(const Site& s) const {
    auto it = perms_.find(s);
    return it == perms_.end() ? nullptr : &it->second;
  }
  bool contains(const Site& s) const { return perms_.count(s) != 0; }
  std::size_t size() const { return perms_.size(); }
  bool empty() const { return perms_.empty(); }
  auto begin() const { return perms_.begin(); }
  auto end() const { return perms_.end(); }

  /// Copies every local gluing of `other` into this gluing; conflicting
  /// entries are an error.
  void merge(const GlobalGluing& other) {
    for (const auto& [s, p] : other) {
      if (auto* mine = find(s); mine && *mine != p)
        throw std::invalid_argument("gluing: conflicting local gluings at a site");
      perms_[s] = p;
    }
  }

  bool operator==(const GlobalGluing&) const = default;

 private:
  std::map<Site, Permutation> perms_;
};

/// All arc types on interior faces, one site per glued pair and cut vertex.
inline std::vector<Site> interior_sites(const Triangulation& tri) {
  std::vector<Site> out;
  for (const auto& [slot, g] : tri.glued_pairs())
    for (int v : face_vertices(slot.face)) out.push_back({slot, v});
  return out;
}

/// The face slot and arc type opposite `s`, with its gluing.
inline Site opposite_site(const Triangulation& tri, const Site& s) {
  const auto& g = tri.partner(s.face);
  if (!g) throw std::invalid_argument("site lies on a boundary face");
  return across(*g, s.cut_vertex);
}

/// Canonicalises an arc type on either side of a glued face to its site.
inline Site site_of(const Triangulation& tri, const ArcType& a) {
  const auto& g = tri.partner(a.face);
  if (!g) throw std::invalid_argument("arc type lies on a boundary face");
  return a.face < g->target ? a : across(*g, a.cut_vertex);
}

struct DiskInstance {
  std::size_t tet = 0;
  int disk = 0;
  std::size_t copy = 0;

  auto operator<=>(const DiskInstance&) const = default;
};

inline std::vector<DiskInstance> canonical_instance_order(const Triangulation& tri,
                                                          const NormalCoordinates& n,
                                                          const ArcType& a) {
  require_length(tri, n);
  auto [t, q] = arc_disks(a);
  std::size_t vt = to_index(n(a.face.tet, t), "canonical_instance_order");
  std::size_t vq = to_index(n(a.face.tet, q), "canonical_instance_order");
  std::vector<DiskInstance> out;
  out.reserve(vt + vq);
  for (std::size_t c = 0; c < vt; ++c) out.push_back({a.face.tet, t, c});
  for (std::size_t c = 0; c < vq; ++c) out.push_back({a.face.tet, q, c});
  return out;
}

/// Local gluings that realise the embedded surface of coordinates satisfying
/// the quadrilateral conditions: arcs are matched by their position from the
/// cut vertex. Quadrilateral copy 0 is the one nearest the side of the
/// quadrilateral that contains vertex 0.
inline GlobalGluing parallel_copies_gluing(const Triangulation& tri, const NormalCoordinates& n) {
  require_length(tri, n);
  auto position_to_index = [&](const ArcType& a) {
    auto [t, q] = arc_disks(a);
    std::size_t vt = to_index(n(a.face.tet, t), "parallel_copies_gluing");
    std::size_t vq = to_index(n(a.face.tet, q), "parallel_copies_gluing");
    bool zero_side = a.cut_vertex == 0 || a.face.face == 0;
    std::vector<std::size_t> idx(vt + vq);
    for (std::size_t i = 0; i < vt; ++i) idx[i] = i;
    for (std::size_t c = 0; c < vq; ++c) idx[vt + (zero_side ? c : vq - 1 - c)] = vt + c;
    return idx;
  };
  GlobalGluing g;
  for (const auto& s : interior_sites(tri)) {
    auto side1 = position_to_index(s);
    auto side2 = position_to_index(opposite_site(tri, s));
    if (side1.empty()) continue;
    if (side1.size() != side2.size())
      throw std::invalid_argument("parallel_copies_gluing: matching equations fail");
    Permutation p(side1.size());
    for (std::size_t pos = 0; pos < side1.size(); ++pos) p[side1[pos]] = side2[pos];
    g.set(s, std::move(p));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Segment model
// ---------------------------------------------------------------------------

/// Every disk instance meeting an interior edge contributes one segment per
/// fan position where it meets the edge. Local gluings link the end of one
/// segment to the start of the next; closed chains are the block curves.
class CurveModel {
 public:
  struct Position {
    std::size_t tet = 0;
    std::array<int, 4> disks{};             // Tri(x1), Tri(x2), two crossing quads
    std::array<std::size_t, 4> base{};      // first segment id of each disk
    std::array<std::size_t, 4> count{};
  };

  struct Block {
    std::size_t edge = 0;
    std::size_t first_segment = 0;
    std::size_t segments = 0;
    std::vector<Position> positions;
  };

  struct Side {
    std::size_t vt = 0;         // triangle copies at this arc type
    std::size_t base_tri = 0;   // segment id of triangle copy 0
    std::size_t base_quad = 0;  // segment id of quadrilateral copy 0
    std::size_t segment(std::size_t idx) const {
      return idx < vt ? base_tri + idx : base_quad + (idx - vt);
    }
  };

  /// A site's arc crosses up to two interior edges; each crossing is a link.
  struct Link {
    std::size_t block = 0;
    std::size_t position = 0;  // fan position of side 1
    std::array<Side, 2> sides;
    bool side1_is_from = true;  // side-1 segment precedes side-2 around the fan
  };

  struct SiteInfo {
    Site site;
    Site other;
    std::size_t k = 0;
    std::vector<Link> links;
  };

  CurveModel(const Triangulation& tri, const NormalCoordinates& n, const Skeleton& sk) {
    require_length(tri, n);
    std::vector<std::size_t> block_of_edge(sk.edges.size(), kNone);
    for (const auto& e : sk.edges) {
      if (e.boundary) continue;
      Block b;
      b.edge = e.id;
      b.first_segment = segments_;
      for (const auto& f : e.fan) {
        Position p;
        p.tet = f.tet;
        auto cd = complement(f.x1, f.x2);
        p.disks = {tri_type(f.x1), tri_type(f.x2), quad_type(f.x1, cd[0]), quad_type(f.x1, cd[1])};
        for (int d = 0; d < 4; ++d) {
          p.count[d] = to_index(n(f.tet, p.disks[d]), "trace");
          p.base[d] = segments_;
          segments_ += p.count[d];
        }
        b.positions.push_back(p);
      }
      b.segments = segments_ - b.first_segment;
      block_of_edge[e.id] = blocks_.size();
      blocks_.push_back(std::move(b));
    }

    for (const auto& s : interior_sites(tri)) {
      SiteInfo info;
      info.site = s;
      info.other = opposite_site(tri, s);
      info.k = to_index(arc_count(n, s), "trace");
      const auto fv = face_vertices(s.face.face);
      for (int u : fv) {
        if (u == s.cut_vertex) continue;
        const auto& ep = sk.locate(s.face.tet, s.cut_vertex, u);
        if (block_of_edge[ep.edge] == kNone) continue;
        const std::size_t bi = block_of_edge[ep.edge];
        const auto& fan = sk.edges[ep.edge].fan;
        const std::size_t m = fan.size();
        Link link;
        link.block = bi;
        link.position = ep.pos;
        std::size_t pos1 = ep.pos, pos2;
        if (fan[pos1].exit_face == s.face.face) {
          link.side1_is_from = true;
          pos2 = (pos1 + 1) % m;
        } else {
          link.side1_is_from = false;
          pos2 = (pos1 + m - 1) % m;
        }
        link.sides[0] = side_info(n, blocks_[bi].positions[pos1], s);
        link.sides[1] = side_info(n, blocks_[bi].positions[pos2], info.other);
        info.links.push_back(link);
      }
      site_index_.emplace(s, sites_.size());
      sites_.push_back(std::move(info));
    }
  }

  std::size_t segment_count() const { return segments_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<SiteInfo>& sites() const { return sites_; }
  std::size_t block_of_segment(std::size_t seg) const {
    auto it = std::upper_bound(blocks_.begin(), blocks_.end(), seg,
                               [](std::size_t x, const Block& b) { return x < b.first_segment; });
    return static_cast<std::size_t>(it - blocks_.begin()) - 1;
  }

  std::optional<std::size_t> site_index(const Site& s) const {
    auto it = site_index_.find(s);
    if (it == site_index_.end()) return std::nullopt;
    return it->second;
  }

  /// (from, to) segment pairs created by gluing side-1 instance i to side-2 j.
  template <class F>
  void for_each_link(const SiteInfo& si, std::size_t i, std::size_t j, F&& f) const {
    for (const auto& l : si.links) {
      std::size_t a = l.sides[0].segment(i), b = l.sides[1].segment(j);
      if (l.side1_is_from)
        f(l.block, a, b);
      else
        f(l.block, b, a);
    }
  }

  /// Human-readable description of a segment.
  DiskInstance describe(std::size_t seg, std::size_t* position = nullptr) const {
    const auto& b = blocks_[block_of_segment(seg)];
    for (std::size_t p = 0; p < b.positions.size(); ++p) {
      const auto& pos = b.positions[p];
      for (int d = 0; d < 4; ++d)
        if (seg >= pos.base[d] && seg < pos.base[d] + pos.count[d]) {
          if (position) *position = p;
          return {pos.tet, pos.disks[d], seg - pos.base[d]};
        }
    }
    throw std::logic_error("describe: segment out of range");
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  static Side side_info(const NormalCoordinates& n, const Position& p, const ArcType& a) {
    auto [t, q] = arc_disks(a);
    Side s;
    s.vt = to_index(n(a.face.tet, t), "trace");
    for (int d = 0; d < 4; ++d) {
      if (p.disks[d] == t) s.base_tri = p.base[d];
      if (p.disks[d] == q) s.base_quad = p.base[d];
    }
    return s;
  }

  std::vector<Block> blocks_;
  std::vector<SiteInfo> sites_;
  std::map<Site, std::size_t> site_index_;
  std::size_t segments_ = 0;
};

// ---------------------------------------------------------------------------
// Block curves
// ---------------------------------------------------------------------------

struct BlockCurve {
  std::size_t length = 0;   // segments
  std::size_t winding = 0;  // length / fan length
  DiskInstance start;       // a disk instance on the curve
  std::size_t start_position = 0;
};

struct EdgeCurves {
  std::size_t edge = 0;
  std::size_t fan_length = 0;
  std::size_t instances = 0;  // segments meeting the edge
  std::vector<BlockCurve> curves;
};

struct BlockCurveReport {
  std::vector<EdgeCurves> edges;  // interior edge classes only
  bool branch_free = true;
};

class GluingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string site_string(const Site& s) {
  return std::to_string(s.face.tet) + ":" + std::to_string(s.face.face) + "|" +
         std::to_string(s.cut_vertex);
}

// Fills next[seg] for every segment of the model from a complete gluing.
inline std::vector<std::size_t> link_segments(const CurveModel& model, const GlobalGluing& g) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  for (const auto& [s, p] : g) {
    auto idx = model.site_index(s);
    if (!idx) throw GluingError("gluing: " + site_string(s) + " is not an interior site");
    if (model.sites()[*idx].k == 0)
      throw GluingError("gluing: site " + site_string(s) + " carries no arcs");
  }
  std::vector<std::size_t> next(model.segment_count(), kUnset);
  for (const auto& si : model.sites()) {
    if (si.k == 0) continue;
    const Permutation* p = g.find(si.site);
    if (!p) throw GluingError("gluing: missing local gluing at site " + site_string(si.site));
    if (p->size() != si.k)
      throw GluingError("gluing: site " + site_string(si.site) + " needs a permutation of " +
                        std::to_string(si.k) + " elements, got " + std::to_string(p->size()));
    for (std::size_t i = 0; i < si.k; ++i)
      model.for_each_link(si, i, (*p)[i], [&](std::size_t, std::size_t from, std::size_t to) {
        if (next[from] != kUnset) throw std::logic_error("trace: segment linked twice");
        next[from] = to;
      });
  }
  for (auto x : next)
    if (x == kUnset) throw std::logic_error("trace: unlinked segment (matching equations violated?)");
  return next;
}

}  // namespace detail

inline BlockCurveReport trace_block_curves(const Triangulation& tri, const NormalCoordinates& n,
                                           const Skeleton& sk, const GlobalGluing& g) {
  CurveModel model(tri, n, sk);
  auto next = detail::link_segments(model, g);
  BlockCurveReport report;
  std::vector<char> seen(model.segment_count(), 0);
  for (const auto& b : model.blocks()) {
    EdgeCurves ec;
    ec.edge = b.edge;
    ec.fan_length = b.positions.size();
    ec.instances = b.segments;
    for (std::size_t s = b.first_segment; s < b.first_segment + b.segments; ++s) {
      if (seen[s]) continue;
      BlockCurve c;
      c.start = model.describe(s, &c.start_position);
      std::size_t cur = s;
      do {
        seen[cur] = 1;
        ++c.length;
        cur = next[cur];
        if (cur < b.first_segment || cur >= b.first_segment + b.segments)
          throw std::logic_error("trace: curve left its block");
      } while (cur != s);
      if (c.length % ec.fan_length != 0) throw std::logic_error("trace: curve length not a multiple of fan");
      c.winding = c.length / ec.fan_length;
      if (c.winding != 1) report.branch_free = false;
      ec.curves.push_back(c);
    }
    report.edges.push_back(std::move(ec));
  }
  return report;
}

inline BlockCurveReport trace_block_curves(const Triangulation& tri, const NormalCoordinates& n,
                                           const GlobalGluing& g) {
  return trace_block_curves(tri, n, classify_skeleton(tri), g);
}

struct ImmersionVerdict {
  bool immersed = true;
  std::optional<std::size_t> witness_edge;   // edge class with a branch point
  std::optional<BlockCurve> witness_curve;
  BlockCurveReport report;
};

/// Accepts iff every block curve winds exactly once around its edge. Runs in
/// time linear in the number of disk instances plus the size of the input.
inline ImmersionVerdict verify_immersed(const Triangulation& tri, const NormalCoordinates& n,
                                        const Skeleton& sk, const GlobalGluing& g) {
  ImmersionVerdict v;
  v.report = trace_block_curves(tri, n, sk, g);
  v.immersed = v.report.branch_free;
  if (!v.immersed)
    for (const auto& e : v.report.edges)
      for (const auto& c : e.curves)
        if (c.winding != 1 && !v.witness_edge) {
          v.witness_edge = e.edge;
          v.witness_curve = c;
        }
  return v;
}

inline ImmersionVerdict verify_immersed(const Triangulation& tri, const NormalCoordinates& n,
                                        const GlobalGluing& g) {
  return verify_immersed(tri, n, classify_skeleton(tri), g);
}

}  // namespace snorm
