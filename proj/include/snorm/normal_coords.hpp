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

// Normal coordinates: 7 counts per tetrahedron, in the order
//   Tri(0) Tri(1) Tri(2) Tri(3) Quad(01|23) Quad(02|13) Quad(03|12).
// Counts are arbitrary precision.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snorm/triangulation.hpp"

namespace snorm {

using Count = boost::multiprecision::cpp_int;

inline constexpr int kDiskTypes = 7;

constexpr int tri_type(int v) { return v; }

/// Quadrilateral type separating {a, b} from the other two vertices.
constexpr int quad_type(int a, int b) {
  // The pair containing vertex 0 determines the type.
  if (a == 0 || b == 0) return 3 + (a + b);
  auto c = complement(a, b);
  return 3 + c[1];
}

constexpr bool is_quad(int disk) { return disk >= 4; }

/// Whether disk type `disk` meets tetrahedron edge {a, b}.
constexpr bool disk_meets_edge(int disk, int a, int b) {
  if (!is_quad(disk)) return disk == a || disk == b;
  return disk != quad_type(a, b);
}

/// The vertex cut off by the arc of `disk` on face `f`.
constexpr int arc_cut_vertex(int disk, int f) {
  if (!is_quad(disk)) return disk;  // caller guarantees disk != f
  // Of the two vertices paired with each other by the quadrilateral, the one
  // paired with f is the cut vertex on face f.
  for (int v = 0; v < 4; ++v)
    if (v != f && quad_type(v, f) == disk) return v;
  return -1;
}

inline std::string disk_name(int disk) {
  static const char* names[] = {"T0", "T1", "T2", "T3", "Q01|23", "Q02|13", "Q03|12"};
  return names[disk];
}

class NormalCoordinates {
 public:
  NormalCoordinates() = default;
  explicit NormalCoordinates(std::size_t tets) : v_(kDiskTypes * tets) {}
  explicit NormalCoordinates(std::vector<Count> values) : v_(std::move(values)) {
    if (v_.size() % kDiskTypes != 0)
      throw std::invalid_argument("normal coordinates: length is not a multiple of 7");
    for (const auto& x : v_)
      if (x < 0) throw std::invalid_argument("normal coordinates: negative entry");
  }

  std::size_t tet_count() const { return v_.size() / kDiskTypes; }
  std::size_t length() const { return v_.size(); }

  const Count& operator()(std::size_t tet, int disk) const { return v_.at(kDiskTypes * tet + disk); }

  void set(std::size_t tet, int disk, Count value) {
    if (value < 0) throw std::invalid_argument("normal coordinates: negative entry");
    v_.at(kDiskTypes * tet + disk) = std::move(value);
  }

  const std::vector<Count>& values() const { return v_; }

  /// Appends the coordinates of `other` (for disjoint unions).
  void append(const NormalCoordinates& other) { v_.insert(v_.end(), other.v_.begin(), other.v_.end()); }

  bool operator==(const NormalCoordinates&) const = default;

 private:
  std::vector<Count> v_;
};

/// Arc type on a face slot: the arc separating `cut_vertex` from the other two
/// vertices of the face.
struct ArcType {
  FaceSlot face;
  int cut_vertex = 0;

  auto operator<=>(const ArcType&) const = default;
};

inline void require_length(const Triangulation& tri, const NormalCoordinates& n) {
  if (n.tet_count() != tri.size() || n.length() != kDiskTypes * tri.size())
    throw std::invalid_argument("normal coordinates: expected " + std::to_string(7 * tri.size()) +
                                " entries, got " + std::to_string(n.length()));
}

inline void require_arc(ArcType a) {
  if (a.face.face < 0 || a.face.face > 3 || a.cut_vertex < 0 || a.cut_vertex > 3 ||
      a.cut_vertex == a.face.face)
    throw std::invalid_argument("arc type: cut vertex must lie on the face");
}

/// The triangle and quadrilateral types whose arcs have type `a`.
inline std::array<int, 2> arc_disks(ArcType a) {
  require_arc(a);
  return {tri_type(a.cut_vertex), quad_type(a.cut_vertex, a.face.face)};
}

/// v_t + v_q for arc type `a`.
inline Count arc_count(const NormalCoordinates& n, ArcType a) {
  auto [t, q] = arc_disks(a);
  return n(a.face.tet, t) + n(a.face.tet, q);
}

inline Count arc_count(const Triangulation& tri, const NormalCoordinates& n, ArcType a) {
  require_length(tri, n);
  if (a.face.tet >= tri.size()) throw std::out_of_range("arc_count: no such tetrahedron");
  return arc_count(n, a);
}

/// The arc type on the other side of a glued face.
inline ArcType across(const Gluing& g, int cut_vertex) { return {g.target, g.map[cut_vertex]}; }

struct MatchingVerdict {
  bool ok = true;
  std::optional<ArcType> site;  // side of the first violation with the smaller face slot
  Count lhs, rhs;
};

inline MatchingVerdict check_matching(const Triangulation& tri, const NormalCoordinates& n) {
  require_length(tri, n);
  MatchingVerdict v;
  for (const auto& [slot, g] : tri.glued_pairs()) {
    for (int cut : face_vertices(slot.face)) {
      ArcType a{slot, cut};
      auto lhs = arc_count(n, a);
      auto rhs = arc_count(n, across(g, cut));
      if (lhs != rhs) {
        v.ok = false;
        v.site = a;
        v.lhs = lhs;
        v.rhs = rhs;
        return v;
      }
    }
  }
  return v;
}

struct QuadVerdict {
  bool ok = true;
  std::vector<std::size_t> offending;
};

inline QuadVerdict check_quad_conditions(const Triangulation& tri, const NormalCoordinates& n) {
  require_length(tri, n);
  QuadVerdict v;
  for (std::size_t t = 0; t < tri.size(); ++t) {
    int nonzero = 0;
    for (int q = 4; q < 7; ++q)
      if (n(t, q) != 0) ++nonzero;
    if (nonzero > 1) v.offending.push_back(t);
  }
  v.ok = v.offending.empty();
  return v;
}

/// N ⊔ N, matching the tetrahedron numbering of `doubled`.
inline NormalCoordinates doubled(const NormalCoordinates& n) {
  NormalCoordinates out = n;
  out.append(n);
  return out;
}

}  // namespace snorm
