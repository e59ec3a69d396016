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

// Gadgets and the compiler from CNF_C(2,R) formulas to immersibility
// instances.
//
// Clause gadget: six tetrahedra around the edge A-B. Tetrahedron i has local
// vertices 0=A, 1=B, 2=C_i, 3=C_{i+1}; face 2 of tetrahedron i is glued to
// face 3 of tetrahedron i+1. Each carries Tri(0), Tri(1) and one quadrilateral
// that changes level between the two triangles, so every interface has one
// site with two arcs. Variable j is the bit of the interface after
// tetrahedron j.
//
// Tube: the same six-tetrahedron fan with a disk pattern whose two choice
// interfaces are forced to agree. Its pairs A1 and A2 lie on disjoint vertex
// sets.
//
// Constant gadgets are single tetrahedra whose two front faces form a pair.
// CG0 holds two triangles, CG1 two crossing quadrilaterals; both leave the
// same arcs on the pair.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "snorm/csp.hpp"
#include "snorm/gluing.hpp"
#include "snorm/solver.hpp"

namespace snorm {

enum class GadgetKind { Clause, Tube, Cg0, Cg1 };

inline const char* to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::Clause: return "clause";
    case GadgetKind::Tube: return "tube";
    case GadgetKind::Cg0: return "cg0";
    default: return "cg1";
  }
}

/// One face of an exposed pair. The two faces of a pair share the edge
/// hub-rim; rim and wing are named by local vertex indices of the face's
/// tetrahedron.
struct PairFace {
  FaceSlot slot;
  int hub = 0, rim = 0, wing = 0;
};

using FacePair = std::array<PairFace, 2>;

struct GadgetTemplate {
  GadgetKind kind = GadgetKind::Clause;
  Triangulation tri;
  NormalCoordinates coords;
  std::vector<FacePair> pairs;  // clause: variable order; tube: A1, A2; constants: A
  std::vector<Site> choices;    // two-arc interface sites in variable order
};

namespace detail {

inline constexpr Perm4 kFanStep{0, 1, 3, 2};  // face 2 of tet i onto face 3 of tet i+1

inline Triangulation six_fan() {
  Triangulation t(6);
  for (std::size_t i = 0; i < 6; ++i) t.glue({i, 2}, {(i + 1) % 6, 3}, kFanStep);
  return t;
}

// Faces of tetrahedra i and i+1 that contain the radial edge hub-C_{i+1}.
inline FacePair radial_pair(std::size_t i, int hub) {
  const int opp = 1 - hub;
  return {PairFace{{i, opp}, hub, 3, 2}, PairFace{{(i + 1) % 6, opp}, hub, 2, 3}};
}

inline FacePair shifted(FacePair p, std::size_t offset) {
  for (auto& f : p) f.slot.tet += offset;
  return p;
}

}  // namespace detail

inline GadgetTemplate build_gadget(GadgetKind kind) {
  GadgetTemplate g;
  g.kind = kind;
  const int T0 = tri_type(0), T1 = tri_type(1), Q02 = 5, Q03 = 6;
  switch (kind) {
    case GadgetKind::Clause: {
      g.tri = detail::six_fan();
      g.coords = NormalCoordinates(6);
      for (std::size_t i = 0; i < 6; ++i) {
        g.coords.set(i, T0, 1);
        g.coords.set(i, T1, 1);
        g.coords.set(i, i % 2 == 0 ? Q03 : Q02, 1);
      }
      for (std::size_t j = 0; j < 6; ++j) {
        const int hub = j % 2 == 0 ? 1 : 0;
        g.pairs.push_back(detail::radial_pair(j, hub));
        g.choices.push_back({{j, 2}, hub});
      }
      break;
    }
    case GadgetKind::Tube: {
      g.tri = detail::six_fan();
      g.coords = NormalCoordinates(6);
      const std::array<std::array<int, 2>, 6> disks{{{T0, Q03}, {T0, T1}, {T1, Q03}, {T1, Q02}, {T0, T1}, {T0, Q02}}};
      for (std::size_t i = 0; i < 6; ++i)
        for (int d : disks[i]) g.coords.set(i, d, 1);
      g.pairs.push_back(detail::radial_pair(5, 0));  // A1
      g.pairs.push_back(detail::radial_pair(2, 1));  // A2
      g.choices.push_back({{5, 2}, 0});
      g.choices.push_back({{2, 2}, 1});
      break;
    }
    case GadgetKind::Cg0:
    case GadgetKind::Cg1: {
      g.tri = Triangulation(1);
      g.coords = NormalCoordinates(1);
      if (kind == GadgetKind::Cg0) {
        g.coords.set(0, T0, 1);
        g.coords.set(0, T1, 1);
      } else {
        g.coords.set(0, Q02, 1);
        g.coords.set(0, Q03, 1);
      }
      g.pairs.push_back({PairFace{{0, 3}, 0, 1, 2}, PairFace{{0, 2}, 0, 1, 3}});
      break;
    }
  }
  return g;
}

/// Glues pair `a` onto pair `b` face by face, hub to hub, rim to rim and wing
/// to wing.
inline void glue_pairs(Triangulation& tri, const FacePair& a, const FacePair& b) {
  for (int i = 0; i < 2; ++i) {
    const auto& fa = a[i];
    const auto& fb = b[i];
    std::array<int, 4> img{};
    img[fa.hub] = fb.hub;
    img[fa.rim] = fb.rim;
    img[fa.wing] = fb.wing;
    img[fa.slot.face] = fb.slot.face;
    tri.glue(fa.slot, fb.slot, Perm4(img[0], img[1], img[2], img[3]));
  }
}

/// Appends a gadget to (tri, n) and returns its tetrahedron offset.
inline std::size_t insert_gadget(Triangulation& tri, NormalCoordinates& n, const GadgetTemplate& g) {
  const std::size_t off = tri.add_tetrahedra(g.tri.size());
  for (const auto& [slot, gl] : g.tri.glued_pairs())
    tri.glue({slot.tet + off, slot.face}, {gl.target.tet + off, gl.target.face}, gl.map);
  n.append(g.coords);
  return off;
}

struct Occurrence {
  std::size_t clause = 0;
  std::size_t position = 0;
  auto operator<=>(const Occurrence&) const = default;
};

struct TubeAttachment {
  std::size_t variable = 0;
  std::vector<std::size_t> offsets;  // one per tube copy
  std::vector<Site> sites;           // choice sites of every copy
  Occurrence first, second;
};

struct ConstantAttachment {
  Occurrence at;
  bool value = false;
  std::size_t tet = 0;
};

struct CompileOptions {
  bool simplicial = false;  // replace each tube by copies of itself glued in series
};

struct CompiledInstance {
  Formula formula;
  Triangulation tri;
  NormalCoordinates coords;
  std::vector<std::size_t> clause_offsets;
  std::map<Occurrence, Site> occurrence_sites;  // clause-side choice site of each argument
  std::map<std::size_t, std::vector<Occurrence>> variable_occurrences;
  std::vector<TubeAttachment> tubes;
  std::vector<ConstantAttachment> constants;

  /// Every two-arc site: clause interfaces clause by clause, then tubes.
  std::vector<Site> choice_sites() const {
    std::vector<Site> out;
    for (const auto& [occ, s] : occurrence_sites) out.push_back(s);
    for (const auto& t : tubes) out.insert(out.end(), t.sites.begin(), t.sites.end());
    return out;
  }
};

inline CompiledInstance compile_formula(const Formula& f, const CompileOptions& opt = {}) {
  f.check_arity();
  if (!(f.relation == gadget_relation()))
    throw std::invalid_argument("compile_formula: formula must use the built-in relation R");
  if (auto ov = check_occurrence_bound(f, 2); !ov.ok)
    throw std::invalid_argument("compile_formula: variable x" + std::to_string(ov.violators.front().first) +
                                " occurs " + std::to_string(ov.violators.front().second) + " times");
  static const GadgetTemplate clause = build_gadget(GadgetKind::Clause);
  static const GadgetTemplate tube = build_gadget(GadgetKind::Tube);
  static const GadgetTemplate cg0 = build_gadget(GadgetKind::Cg0);
  static const GadgetTemplate cg1 = build_gadget(GadgetKind::Cg1);

  CompiledInstance ci;
  ci.formula = f;
  std::map<Occurrence, FacePair> pair_of;
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    const std::size_t off = insert_gadget(ci.tri, ci.coords, clause);
    ci.clause_offsets.push_back(off);
    for (std::size_t j = 0; j < 6; ++j) {
      Occurrence occ{c, j};
      Site s = clause.choices[j];
      s.face.tet += off;
      ci.occurrence_sites[occ] = s;
      pair_of[occ] = detail::shifted(clause.pairs[j], off);
    }
  }
  for (std::size_t c = 0; c < f.clauses.size(); ++c)
    for (std::size_t j = 0; j < 6; ++j) {
      const Arg& a = f.clauses[c][j];
      const Occurrence occ{c, j};
      if (a.is_var()) {
        ci.variable_occurrences[a.var].push_back(occ);
        continue;
      }
      const bool one = a.kind == Arg::Kind::One;
      const std::size_t off = insert_gadget(ci.tri, ci.coords, one ? cg1 : cg0);
      glue_pairs(ci.tri, detail::shifted((one ? cg1 : cg0).pairs[0], off), pair_of[occ]);
      ci.constants.push_back({occ, one, off});
    }
  for (const auto& [var, occs] : ci.variable_occurrences) {
    if (occs.size() != 2) continue;
    TubeAttachment t;
    t.variable = var;
    t.first = occs[0];
    t.second = occs[1];
    // A tube returning to its own clause gadget needs a third copy before
    // the edges around its ends stop sharing endpoints.
    const std::size_t copies = !opt.simplicial ? 1 : t.first.clause == t.second.clause ? 3 : 2;
    for (std::size_t k = 0; k < copies; ++k) {
      const std::size_t off = insert_gadget(ci.tri, ci.coords, tube);
      t.offsets.push_back(off);
      for (auto s : tube.choices) {
        s.face.tet += off;
        t.sites.push_back(s);
      }
    }
    const FacePair a1 = detail::shifted(tube.pairs[0], t.offsets.front());
    const FacePair a2 = detail::shifted(tube.pairs[1], t.offsets.back());
    for (std::size_t k = 0; k + 1 < copies; ++k)
      glue_pairs(ci.tri, detail::shifted(tube.pairs[1], t.offsets[k]),
                 detail::shifted(tube.pairs[0], t.offsets[k + 1]));
    glue_pairs(ci.tri, a1, pair_of[t.first]);
    glue_pairs(ci.tri, a2, pair_of[t.second]);
    ci.tubes.push_back(std::move(t));
  }
  return ci;
}

/// The gluing realising an assignment: each clause interface carries the
/// value of its argument and each tube carries its variable's value.
inline GlobalGluing encode_assignment_to_gluing(const CompiledInstance& ci, const Assignment& a) {
  for (auto v : ci.formula.variables())
    if (!a.count(v)) throw std::invalid_argument("encode: variable x" + std::to_string(v) + " is unassigned");
  if (!satisfies(ci.formula, a)) throw std::invalid_argument("encode: assignment does not satisfy the formula");
  std::vector<Site> sites;
  Tuple bits;
  for (const auto& [occ, s] : ci.occurrence_sites) {
    const Arg& arg = ci.formula.clauses[occ.clause][occ.position];
    sites.push_back(s);
    bits.push_back(arg.is_var() ? a.at(arg.var) : arg.kind == Arg::Kind::One);
  }
  for (const auto& t : ci.tubes)
    for (const auto& s : t.sites) {
      sites.push_back(s);
      bits.push_back(a.at(t.variable));
    }
  return gluing_from_bits(ci.tri, ci.coords, sites, bits);
}

/// Reads each variable's bit off its clause-side choice site.
inline Assignment decode_gluing_to_assignment(const CompiledInstance& ci, const GlobalGluing& g) {
  if (!verify_immersed(ci.tri, ci.coords, g).immersed)
    throw std::invalid_argument("decode: gluing has a branch point");
  auto bit = [&](const Site& s0) -> std::uint8_t {
    const Site s = site_of(ci.tri, s0);
    const Permutation* p = g.find(s);
    if (!p || p->size() != 2) throw std::invalid_argument("decode: missing choice site " + detail::site_string(s));
    return (*p)[0] == 1;
  };
  Assignment a;
  for (const auto& [var, occs] : ci.variable_occurrences) {
    const std::uint8_t b = bit(ci.occurrence_sites.at(occs.front()));
    for (const auto& o : occs)
      if (bit(ci.occurrence_sites.at(o)) != b)
        throw std::logic_error("decode: occurrences of x" + std::to_string(var) + " disagree");
    a[var] = b;
  }
  return a;
}

}  // namespace snorm
