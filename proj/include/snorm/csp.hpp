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

// Boolean relations, CNF_C(R) formulas and the closure properties that decide
// the complexity of SAT_C(R) and SAT_C(2,R).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "snorm/errors.hpp"

namespace snorm {

using Tuple = std::vector<std::uint8_t>;

inline std::string to_string(const Tuple& t) {
  std::string s;
  for (auto b : t) s.push_back(b ? '1' : '0');
  return s;
}

inline Tuple tuple_from_string(const std::string& s) {
  Tuple t;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("tuple: expected bits, got '" + s + "'");
    t.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return t;
}

inline std::size_t hamming(const Tuple& a, const Tuple& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

/// x' is a step from x to y.
inline bool is_step(const Tuple& x, const Tuple& xp, const Tuple& y) {
  return hamming(x, xp) == 1 && hamming(x, xp) + hamming(xp, y) == hamming(x, y);
}

class Relation {
 public:
  Relation(std::size_t arity, std::set<Tuple> tuples) : arity_(arity), tuples_(std::move(tuples)) {
    if (tuples_.empty()) throw std::invalid_argument("relation: must be nonempty");
    for (const auto& t : tuples_)
      if (t.size() != arity_) throw std::invalid_argument("relation: tuple of wrong arity");
  }

  std::size_t arity() const { return arity_; }
  const std::set<Tuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool contains(const Tuple& t) const { return tuples_.count(t) != 0; }

  static Relation full(std::size_t arity) {
    std::set<Tuple> all;
    for (std::size_t m = 0; m < (std::size_t{1} << arity); ++m) {
      Tuple t(arity);
      for (std::size_t i = 0; i < arity; ++i) t[i] = (m >> (arity - 1 - i)) & 1;
      all.insert(t);
    }
    return {arity, std::move(all)};
  }

  bool operator==(const Relation&) const = default;

 private:
  std::size_t arity_;
  std::set<Tuple> tuples_;
};

/// The 6-ary relation realised by the clause gadget.
inline const Relation& gadget_relation() {
  static const Relation r = [] {
    std::set<Tuple> ts;
    for (const char* s : {"000000", "000101", "001010", "010001", "010100", "011011", "100010",
                          "101000", "101101", "110110", "111111"})
      ts.insert(tuple_from_string(s));
    return Relation(6, ts);
  }();
  return r;
}

// ---------------------------------------------------------------------------
// Closure properties
// ---------------------------------------------------------------------------

struct ClosureWitness {
  std::vector<Tuple> inputs;  // members of R
  Tuple result;               // their combination, not in R
};

struct StepWitness {
  Tuple x, y, x_prime;  // x, y in R; x' a step from x to y, x' not in R, no step from x' to y in R
};

struct RelationProperties {
  bool horn = true, dual_horn = true, bijunctive = true, affine = true, delta_matroid = true;
  std::optional<ClosureWitness> horn_witness, dual_horn_witness, bijunctive_witness, affine_witness;
  std::optional<StepWitness> delta_witness;

  bool schaefer() const { return horn || dual_horn || bijunctive || affine; }
};

namespace detail {

template <class Op>
std::optional<ClosureWitness> closure2(const Relation& r, Op op) {
  for (const auto& x : r.tuples())
    for (const auto& y : r.tuples()) {
      Tuple z(r.arity());
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = op(x[i], y[i]);
      if (!r.contains(z)) return ClosureWitness{{x, y}, z};
    }
  return std::nullopt;
}

template <class Op>
std::optional<ClosureWitness> closure3(const Relation& r, Op op) {
  for (const auto& x : r.tuples())
    for (const auto& y : r.tuples())
      for (const auto& z : r.tuples()) {
        Tuple w(r.arity());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = op(x[i], y[i], z[i]);
        if (!r.contains(w)) return ClosureWitness{{x, y, z}, w};
      }
  return std::nullopt;
}

}  // namespace detail

inline bool majority(std::uint8_t a, std::uint8_t b, std::uint8_t c) { return (a & b) | (a & c) | (b & c); }

/// Whether (x, y, x') violates the two-step axiom in R.
inline bool violates_two_step(const Relation& r, const Tuple& x, const Tuple& y, const Tuple& xp) {
  if (!r.contains(x) || !r.contains(y) || !is_step(x, xp, y) || r.contains(xp)) return false;
  for (std::size_t i = 0; i < xp.size(); ++i) {
    if (xp[i] == y[i]) continue;
    Tuple xpp = xp;
    xpp[i] ^= 1;
    if (r.contains(xpp)) return false;
  }
  return true;
}

inline RelationProperties classify_relation(const Relation& r) {
  RelationProperties p;
  p.horn_witness = detail::closure2(r, [](auto a, auto b) { return a & b; });
  p.dual_horn_witness = detail::closure2(r, [](auto a, auto b) { return a | b; });
  p.bijunctive_witness = detail::closure3(r, [](auto a, auto b, auto c) { return majority(a, b, c); });
  p.affine_witness = detail::closure3(r, [](auto a, auto b, auto c) { return a ^ b ^ c; });
  p.horn = !p.horn_witness;
  p.dual_horn = !p.dual_horn_witness;
  p.bijunctive = !p.bijunctive_witness;
  p.affine = !p.affine_witness;
  for (const auto& x : r.tuples()) {
    for (const auto& y : r.tuples()) {
      for (std::size_t i = 0; i < x.size() && !p.delta_witness; ++i) {
        if (x[i] == y[i]) continue;
        Tuple xp = x;
        xp[i] ^= 1;
        if (violates_two_step(r, x, y, xp)) p.delta_witness = StepWitness{x, y, xp};
      }
      if (p.delta_witness) break;
    }
    if (p.delta_witness) break;
  }
  p.delta_matroid = !p.delta_witness;
  return p;
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct Arg {
  enum class Kind { Var, Zero, One };
  Kind kind = Kind::Var;
  std::size_t var = 0;

  static Arg variable(std::size_t v) { return {Kind::Var, v}; }
  static Arg constant(bool b) { return {b ? Kind::One : Kind::Zero, 0}; }
  bool is_var() const { return kind == Kind::Var; }
  bool operator==(const Arg&) const = default;
};

inline std::string to_string(const Arg& a) {
  switch (a.kind) {
    case Arg::Kind::Zero: return "0";
    case Arg::Kind::One: return "1";
    default: return "x" + std::to_string(a.var);
  }
}

using Clause = std::vector<Arg>;
using Assignment = std::map<std::size_t, std::uint8_t>;

struct Formula {
  std::string relation_name = "R";
  Relation relation = gadget_relation();
  std::vector<Clause> clauses;

  std::set<std::size_t> variables() const {
    std::set<std::size_t> vs;
    for (const auto& c : clauses)
      for (const auto& a : c)
        if (a.is_var()) vs.insert(a.var);
    return vs;
  }

  void check_arity() const {
    for (std::size_t i = 0; i < clauses.size(); ++i)
      if (clauses[i].size() != relation.arity())
        throw std::invalid_argument("formula: clause " + std::to_string(i) + " has " +
                                    std::to_string(clauses[i].size()) + " arguments, relation arity is " +
                                    std::to_string(relation.arity()));
  }
};

inline Tuple instantiate(const Clause& c, const Assignment& a) {
  Tuple t;
  for (const auto& arg : c) {
    switch (arg.kind) {
      case Arg::Kind::Zero: t.push_back(0); break;
      case Arg::Kind::One: t.push_back(1); break;
      case Arg::Kind::Var: t.push_back(a.at(arg.var)); break;
    }
  }
  return t;
}

inline bool satisfies(const Formula& f, const Assignment& a) {
  for (const auto& c : f.clauses)
    if (!f.relation.contains(instantiate(c, a))) return false;
  return true;
}

/// Exhaustive satisfiability over all 2^n assignments; the first satisfying
/// assignment in increasing binary order is returned.
inline std::optional<Assignment> solve_formula(const Formula& f, std::size_t max_variables = 24) {
  f.check_arity();
  auto vars = f.variables();
  if (vars.size() > max_variables)
    throw BudgetExceeded("solve_formula: " + std::to_string(vars.size()) + " variables exceed the limit of " +
                         std::to_string(max_variables));
  std::vector<std::size_t> order(vars.begin(), vars.end());
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << order.size()); ++m) {
    Assignment a;
    for (std::size_t i = 0; i < order.size(); ++i) a[order[i]] = (m >> i) & 1;
    if (satisfies(f, a)) return a;
  }
  return std::nullopt;
}

struct OccurrenceVerdict {
  bool ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> violators;  // (variable, occurrences)
};

inline std::map<std::size_t, std::size_t> occurrences(const Formula& f) {
  std::map<std::size_t, std::size_t> occ;
  for (const auto& c : f.clauses)
    for (const auto& a : c)
      if (a.is_var()) ++occ[a.var];
  return occ;
}

inline OccurrenceVerdict check_occurrence_bound(const Formula& f, std::size_t bound = 2) {
  OccurrenceVerdict v;
  for (auto [var, n] : occurrences(f))
    if (n > bound) v.violators.emplace_back(var, n);
  v.ok = v.violators.empty();
  return v;
}

}  // namespace snorm
