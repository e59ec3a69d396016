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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "snorm/snorm.hpp"

namespace snorm {
namespace {

TEST(DiskTypes, QuadLabels) {
  EXPECT_EQ(quad_type(0, 1), 4);
  EXPECT_EQ(quad_type(2, 3), 4);
  EXPECT_EQ(quad_type(0, 2), 5);
  EXPECT_EQ(quad_type(1, 3), 5);
  EXPECT_EQ(quad_type(0, 3), 6);
  EXPECT_EQ(quad_type(1, 2), 6);
  EXPECT_EQ(disk_name(5), "Q02|13");
}

TEST(DiskTypes, ArcCutVertex) {
  for (int d = 0; d < kDiskTypes; ++d)
    for (int f = 0; f < 4; ++f) {
      if (!is_quad(d) && d == f) continue;
      const int v = arc_cut_vertex(d, f);
      ASSERT_NE(v, f);
      ASSERT_GE(v, 0);
      if (is_quad(d)) {
        // The cut vertex is paired with f by the quadrilateral.
        EXPECT_EQ(quad_type(v, f), d);
      }
    }
}

TEST(DiskTypes, EveryArcTypeHasOneTriangleAndOneQuad) {
  for (int f = 0; f < 4; ++f)
    for (int v : face_vertices(f)) {
      auto [t, q] = arc_disks({{0, f}, v});
      EXPECT_EQ(t, v);
      EXPECT_TRUE(is_quad(q));
      EXPECT_EQ(arc_cut_vertex(q, f), v);
    }
}

TEST(Coordinates, RejectsBadLength) {
  EXPECT_THROW(NormalCoordinates(std::vector<Count>(6)), std::invalid_argument);
  EXPECT_THROW(check_matching(Triangulation(2), NormalCoordinates(1)), std::invalid_argument);
}

TEST(Matching, ZeroVectorIsAccepted) {
  auto g = build_gadget(GadgetKind::Clause);
  EXPECT_TRUE(check_matching(g.tri, NormalCoordinates(g.tri.size())).ok);
  EXPECT_TRUE(check_quad_conditions(g.tri, NormalCoordinates(g.tri.size())).ok);
}

TEST(Matching, ClauseGadget) {
  auto g = build_gadget(GadgetKind::Clause);
  EXPECT_TRUE(check_matching(g.tri, g.coords).ok);
  for (std::size_t t = 0; t < g.tri.size(); ++t) {
    int tris = 0, quads = 0;
    for (int d = 0; d < kDiskTypes; ++d) (is_quad(d) ? quads : tris) += static_cast<int>(g.coords(t, d));
    EXPECT_EQ(tris, 2);
    EXPECT_EQ(quads, 1);
  }
}

TEST(Matching, IncrementedTriangleIsRejectedOnTheFan) {
  auto g = build_gadget(GadgetKind::Clause);
  auto n = g.coords;
  n.set(3, tri_type(0), 2);
  auto v = check_matching(g.tri, n);
  ASSERT_FALSE(v.ok);
  ASSERT_TRUE(v.site.has_value());
  EXPECT_FALSE(g.tri.is_boundary(v.site->face));
  EXPECT_EQ(v.site->cut_vertex, 0);
  EXPECT_NE(v.lhs, v.rhs);
  // Both sides recomputed by hand.
  const auto other = across(*g.tri.partner(v.site->face), v.site->cut_vertex);
  EXPECT_EQ(v.lhs, arc_count(n, *v.site));
  EXPECT_EQ(v.rhs, arc_count(n, other));
  EXPECT_TRUE(v.site->face.tet == 3 || other.face.tet == 3);
}

TEST(Matching, IsSymmetric) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    auto tri = testing::fan_triangulation(4);
    auto n = testing::random_fan_coordinates(4, rng, 3);
    ASSERT_TRUE(check_matching(tri, n).ok);
    for (const auto& [slot, g] : tri.glued_pairs())
      for (int v : face_vertices(slot.face))
        EXPECT_EQ(arc_count(n, {slot, v}), arc_count(n, across(g, v)));
  }
}

TEST(QuadConditions, ConstantGadgets) {
  auto cg0 = build_gadget(GadgetKind::Cg0);
  auto cg1 = build_gadget(GadgetKind::Cg1);
  EXPECT_TRUE(check_quad_conditions(cg0.tri, cg0.coords).ok);
  auto v = check_quad_conditions(cg1.tri, cg1.coords);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.offending, std::vector<std::size_t>{0});
}

TEST(ArcCount, ZeroAndClauseInterfaces) {
  auto g = build_gadget(GadgetKind::Clause);
  EXPECT_EQ(arc_count(NormalCoordinates(6), g.choices[0]), 0);
  for (const auto& s : g.choices) {
    EXPECT_EQ(arc_count(g.tri, g.coords, s), 2);
    auto [t, q] = arc_disks(s);
    EXPECT_EQ(g.coords(s.face.tet, t), 1);
    EXPECT_EQ(g.coords(s.face.tet, q), 1);
  }
}

TEST(ArcCount, ConstantGadgetsAgreeOnTheirPair) {
  auto cg0 = build_gadget(GadgetKind::Cg0);
  auto cg1 = build_gadget(GadgetKind::Cg1);
  for (const auto& pf : cg0.pairs[0])
    for (int v : face_vertices(pf.slot.face)) {
      const ArcType a{pf.slot, v};
      EXPECT_EQ(arc_count(cg0.coords, a), arc_count(cg1.coords, a));
      EXPECT_LE(arc_count(cg1.coords, a), 1);
    }
}

TEST(ArcCount, RejectsArcOnItsOwnFace) {
  EXPECT_THROW(arc_count(NormalCoordinates(1), {{0, 2}, 2}), std::invalid_argument);
}

TEST(Double, AppendsACopy) {
  auto g = build_gadget(GadgetKind::Tube);
  auto d = doubled(g.coords);
  ASSERT_EQ(d.tet_count(), 12u);
  for (std::size_t t = 0; t < 6; ++t)
    for (int k = 0; k < kDiskTypes; ++k) EXPECT_EQ(d(t, k), d(t + 6, k));
  EXPECT_TRUE(check_matching(doubled(g.tri), d).ok);
}

TEST(Coordinates, ArbitraryPrecision) {
  NormalCoordinates n(1);
  Count big = Count(1) << 300;
  n.set(0, 4, big);
  EXPECT_EQ(n(0, 4), big);
  EXPECT_THROW(n.set(0, 4, Count(-1)), std::invalid_argument);
}

}  // namespace
}  // namespace snorm
