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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "oracles.hpp"
#include "snorm/snorm.hpp"

#ifndef SNORM_TEST_DATA
#define SNORM_TEST_DATA "tests/data"
#endif

using namespace snorm;

namespace {

// Pinned limits.
constexpr double kRelationSeconds = 1.0;
constexpr std::size_t kRandomFormulas = 240;
constexpr std::size_t kRandomBlocks = 600;
constexpr double kBigCoordinateSeconds = 1.0;
constexpr int kBigCoordinateBits = 256;
constexpr double kLinearFitResidual = 0.20;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

const char* kPrintedR[] = {"000000", "000101", "001010", "010001", "010100", "011011",
                           "100010", "101000", "101101", "110110", "111111"};

bool printed_r_contains(const Tuple& t) {
  for (const char* s : kPrintedR)
    if (to_string(t) == s) return true;
  return false;
}

std::size_t central_edge(const Skeleton& sk) {
  for (const auto& e : sk.edges)
    if (!e.boundary) return e.id;
  throw std::logic_error("no interior edge");
}

// 1 ------------------------------------------------------------------------
void gadget_relation_reproduction(Outcome& o) {
  const auto start = Clock::now();
  const auto g = build_gadget(GadgetKind::Clause);
  const Relation rel = extract_gadget_relation(g.tri, g.coords, g.choices);
  const double dt = seconds_since(start);
  std::set<Tuple> printed;
  for (const char* s : kPrintedR) printed.insert(tuple_from_string(s));
  if (rel.tuples() != printed) o.fail("extracted relation differs from the printed one");
  std::size_t immersed = 0, branched = 0;
  const auto sk = classify_skeleton(g.tri);
  for (std::size_t m = 0; m < 64; ++m) {
    Tuple x(6);
    for (int i = 0; i < 6; ++i) x[i] = (m >> (5 - i)) & 1;
    (verify_immersed(g.tri, g.coords, sk, gluing_from_bits(g.tri, g.coords, g.choices, x)).immersed ? immersed
                                                                                                   : branched)++;
  }
  if (immersed != 11 || branched != 53) o.fail("immersed/branched split is wrong");
  if (dt >= kRelationSeconds) o.fail("extraction too slow");
  o.detail << " immersed=" << immersed << " branched=" << branched << " seconds=" << dt;
}

// 2 ------------------------------------------------------------------------
void sample_curve_checks(Outcome& o) {
  const auto g = build_gadget(GadgetKind::Clause);
  const auto sk = classify_skeleton(g.tri);
  const std::size_t e = central_edge(sk);
  auto windings = [&](const char* bits) {
    auto gl = gluing_from_bits(g.tri, g.coords, g.choices, tuple_from_string(bits));
    auto rep = trace_block_curves(g.tri, g.coords, sk, gl);
    std::vector<std::size_t> w;
    for (const auto& ec : rep.edges)
      if (ec.edge == e)
        for (const auto& c : ec.curves) w.push_back(c.winding);
    std::sort(w.begin(), w.end());
    auto ow = testing::block_windings(g.tri, g.coords, sk, e, gl);
    std::sort(ow.begin(), ow.end());
    if (ow != w) o.fail(std::string("oracle windings differ for ") + bits);
    return w;
  };
  auto a = windings("101101");
  auto b = windings("101111");
  if (a != std::vector<std::size_t>{1, 1, 1}) o.fail("(1,0,1,1,0,1) is not three curves of winding 1");
  if (b != std::vector<std::size_t>{1, 2}) o.fail("(1,0,1,1,1,1) is not two curves with one winding 2");
  o.detail << " a=" << a.size() << " curves, b=" << b.size() << " curves max winding "
           << (b.empty() ? 0 : b.back());
}

// 3 ------------------------------------------------------------------------
void tube_windings(Outcome& o) {
  const auto g = build_gadget(GadgetKind::Tube);
  const auto sk = classify_skeleton(g.tri);
  const std::size_t e = central_edge(sk);
  for (int m = 0; m < 4; ++m) {
    Tuple x{static_cast<std::uint8_t>(m >> 1), static_cast<std::uint8_t>(m & 1)};
    auto gl = gluing_from_bits(g.tri, g.coords, g.choices, x);
    const bool immersed = verify_immersed(g.tri, g.coords, sk, gl).immersed;
    auto ow = testing::block_windings(g.tri, g.coords, sk, e, gl);
    const bool oracle = std::all_of(ow.begin(), ow.end(), [](auto w) { return w == 1; });
    if (immersed != (x[0] == x[1]) || oracle != immersed) o.fail("tube assignment " + to_string(x) + " wrong");
    o.detail << " " << to_string(x) << "=" << (immersed ? "immersed" : "branched");
  }
}

// 4 ------------------------------------------------------------------------
void relation_classification(Outcome& o) {
  const Relation& r = gadget_relation();
  const auto p = classify_relation(r);
  if (p.horn || p.dual_horn || p.bijunctive || p.affine || p.delta_matroid || p.schaefer())
    o.fail("a property flag is true");
  auto in_r = [&](const Tuple& t) { return printed_r_contains(t); };
  auto check_closure = [&](const char* name, const std::optional<ClosureWitness>& w, auto op2, auto op3) {
    if (!w) return o.fail(std::string("missing witness for ") + name);
    for (const auto& t : w->inputs)
      if (!in_r(t)) o.fail(std::string(name) + " witness input not in R");
    Tuple z(6);
    for (int i = 0; i < 6; ++i)
      z[i] = w->inputs.size() == 2 ? op2(w->inputs[0][i], w->inputs[1][i])
                                   : op3(w->inputs[0][i], w->inputs[1][i], w->inputs[2][i]);
    if (z != w->result || in_r(z)) o.fail(std::string(name) + " witness does not combine outside R");
  };
  auto AND = [](int a, int b) { return a & b; };
  auto OR = [](int a, int b) { return a | b; };
  auto MAJ = [](int a, int b, int c) { return (a & b) | (a & c) | (b & c); };
  auto XOR3 = [](int a, int b, int c) { return a ^ b ^ c; };
  auto none3 = [](int, int, int) { return 0; };
  auto none2 = [](int, int) { return 0; };
  check_closure("horn", p.horn_witness, AND, none3);
  check_closure("dual_horn", p.dual_horn_witness, OR, none3);
  check_closure("bijunctive", p.bijunctive_witness, none2, MAJ);
  check_closure("affine", p.affine_witness, none2, XOR3);

  auto T = [](const char* s) { return tuple_from_string(s); };
  auto dist = [](const Tuple& a, const Tuple& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
  };
  auto step = [&](const Tuple& x, const Tuple& xp, const Tuple& y) {
    return dist(x, xp) == 1 && dist(x, xp) + dist(xp, y) == dist(x, y);
  };
  auto two_step_violation = [&](const Tuple& x, const Tuple& y, const Tuple& xp) {
    if (!in_r(x) || !in_r(y) || !step(x, xp, y) || in_r(xp)) return false;
    for (const char* s : kPrintedR)
      if (step(xp, T(s), y)) return false;
    return true;
  };
  if (!p.delta_witness || !two_step_violation(p.delta_witness->x, p.delta_witness->y, p.delta_witness->x_prime))
    o.fail("reported two-step witness does not check");

  // The five witnesses stated alongside R.
  const Tuple x = T("101000"), y = T("110110"), z = T("000000");
  Tuple conj(6), disj(6), maj(6), xr(6);
  for (int i = 0; i < 6; ++i) {
    conj[i] = x[i] & y[i];
    disj[i] = x[i] | y[i];
    maj[i] = MAJ(x[i], y[i], z[i]);
    xr[i] = x[i] ^ y[i] ^ z[i];
  }
  bool stated = in_r(x) && in_r(y) && in_r(z) && conj == T("100000") && !r.contains(conj) &&
                disj == T("111110") && !r.contains(disj) && maj == T("100000") && !r.contains(maj) &&
                xr == T("011110") && !r.contains(xr);
  stated = stated && two_step_violation(T("111111"), T("100010"), T("101111")) &&
           violates_two_step(r, T("111111"), T("100010"), T("101111"));
  if (!stated) o.fail("a stated witness does not check");
  o.detail << " flags all false, witnesses checked";
}

// 5 and 6 share their random formulas. ---------------------------------------
struct FormulaRun {
  std::size_t formulas = 0, sat = 0, disagreements = 0, roundtrip_failures = 0;
  std::size_t manifold_failures = 0, double_failures = 0, instances = 0;
  double seconds = 0;
  std::string first_problem;
};

const FormulaRun& formula_run() {
  static const FormulaRun run = [] {
    FormulaRun r;
    std::mt19937_64 rng(20260214);
    const auto start = Clock::now();
    auto note = [&](const std::string& s) {
      if (r.first_problem.empty()) r.first_problem = s;
    };
    for (std::size_t i = 0; i < kRandomFormulas; ++i) {
      const Formula f = testing::random_formula(rng, 3, 4);
      ++r.formulas;
      const auto sol = solve_formula(f);
      r.sat += sol.has_value();
      const auto ci = compile_formula(f);
      const auto res = brute_force_immersible(ci.tri, ci.coords);
      if (res.immersible != sol.has_value()) {
        ++r.disagreements;
        note("formula " + std::to_string(i) + ": verdicts differ");
      }
      if (sol) {
        const auto g = encode_assignment_to_gluing(ci, *sol);
        bool ok = verify_immersed(ci.tri, ci.coords, g).immersed && decode_gluing_to_assignment(ci, g) == *sol;
        if (res.witness) ok = ok && satisfies(f, decode_gluing_to_assignment(ci, *res.witness));
        if (!ok) {
          ++r.roundtrip_failures;
          note("formula " + std::to_string(i) + ": round trip failed");
        }
      }
      for (bool simplicial : {false, true}) {
        const auto inst = simplicial ? compile_formula(f, {true}) : ci;
        ++r.instances;
        if (!validate_manifold(inst.tri).ok() || !check_matching(inst.tri, inst.coords).ok) {
          ++r.manifold_failures;
          note("formula " + std::to_string(i) + ": compiled instance is not a manifold");
        }
        const auto d = doubled(inst.tri);
        const auto dn = doubled(inst.coords);
        ++r.instances;
        if (!validate_manifold(d).ok() || d.boundary_face_count() != 0) {
          ++r.manifold_failures;
          note("formula " + std::to_string(i) + ": doubled instance is not a closed manifold");
        }
        if (brute_force_immersible(d, dn).immersible != sol.has_value()) {
          ++r.double_failures;
          note("formula " + std::to_string(i) + ": doubling changed the verdict");
        }
      }
    }
    r.seconds = seconds_since(start);
    return r;
  }();
  return run;
}

void end_to_end(Outcome& o) {
  const auto& r = formula_run();
  if (r.formulas < 200) o.fail("too few formulas");
  if (r.disagreements || r.roundtrip_failures) o.fail(r.first_problem);
  if (r.sat == 0 || r.sat == r.formulas) o.fail("sample is one-sided");
  o.detail << " formulas=" << r.formulas << " sat=" << r.sat << " disagreements=" << r.disagreements
           << " roundtrip_failures=" << r.roundtrip_failures << " seconds=" << r.seconds;
}

void manifold_guarantee(Outcome& o) {
  const auto& r = formula_run();
  if (r.manifold_failures || r.double_failures) o.fail(r.first_problem);
  o.detail << " instances=" << r.instances << " manifold_failures=" << r.manifold_failures
           << " doubled_verdict_changes=" << r.double_failures;
}

// 7 ------------------------------------------------------------------------
void local_flow_correctness(Outcome& o) {
  std::mt19937_64 rng(5150);
  std::size_t yes = 0, disagreements = 0, extraction_failures = 0;
  for (std::size_t i = 0; i < kRandomBlocks; ++i) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const auto tri = testing::fan_triangulation(m);
    const auto n = testing::random_fan_coordinates(m, rng, 3);
    const auto sk = classify_skeleton(tri);
    const std::size_t e = central_edge(sk);
    const auto lv = local_immersibility_test(tri, n, sk, e);
    const bool bf = brute_force_immersible(tri, n).immersible;
    const bool dp = testing::block_decomposable(tri, n, sk, e);
    if (lv.immersible != bf || bf != dp) ++disagreements;
    if (lv.immersible) {
      ++yes;
      const auto g = complete_with_identity(tri, n, extract_gluing_from_flow(tri, n, sk, e, lv.flow));
      if (!verify_immersed(tri, n, sk, g).immersed) ++extraction_failures;
    }
  }
  if (disagreements) o.fail("local test disagrees with search");
  if (extraction_failures) o.fail("extracted gluing is branched");
  if (yes == 0 || yes == kRandomBlocks) o.fail("sample is one-sided");
  o.detail << " blocks=" << kRandomBlocks << " immersible=" << yes << " disagreements=" << disagreements
           << " extraction_failures=" << extraction_failures;
}

// 8 ------------------------------------------------------------------------
void big_coordinates(Outcome& o) {
  std::mt19937_64 rng(99);
  const std::size_t m = 6;
  const auto tri = testing::fan_triangulation(m);
  // A locally immersible pattern scaled by a 256-bit factor.
  NormalCoordinates n;
  for (;;) {
    n = testing::random_fan_coordinates(m, rng, 3);
    const auto sk = classify_skeleton(tri);
    if (local_immersibility_test(tri, n, sk, central_edge(sk)).immersible) break;
  }
  const Count big = (Count(1) << (kBigCoordinateBits - 1)) + 12345;
  NormalCoordinates scaled(m);
  for (std::size_t t = 0; t < m; ++t)
    for (int d = 0; d < kDiskTypes; ++d) scaled.set(t, d, n(t, d) * big);
  const auto sk = classify_skeleton(tri);
  const auto start = Clock::now();
  const auto lv = local_immersibility_test(tri, scaled, sk, central_edge(sk));
  const double dt = seconds_since(start);
  std::size_t bits = 0;
  for (const auto& x : scaled.values())
    if (x > 0) bits = std::max<std::size_t>(bits, boost::multiprecision::msb(x));
  bool refused = false;
  try {
    brute_force_immersible(tri, scaled);
  } catch (const BudgetExceeded&) {
    refused = true;
  }
  if (!lv.immersible) o.fail("scaled block should stay locally immersible");
  if (dt >= kBigCoordinateSeconds) o.fail("flow too slow");
  if (!refused) o.fail("search was not refused");
  if (bits + 1 < static_cast<std::size_t>(kBigCoordinateBits)) o.fail("coordinates are not big enough");
  o.detail << " bits=" << bits + 1 << " flow_seconds=" << dt << " search_refused=" << refused;
}

// 9 ------------------------------------------------------------------------
void local_vs_global(Outcome& o) {
  const std::string dir = SNORM_TEST_DATA;
  std::ifstream ti(dir + "/badlocal.tri"), ci(dir + "/badlocal.coo");
  if (!ti || !ci) return o.fail("corpus files missing");
  const auto tri = io::read_triangulation(ti, "badlocal.tri");
  const auto n = io::read_coordinates(ci, "badlocal.coo");
  if (!validate_manifold(tri).ok() || !check_matching(tri, n).ok) o.fail("corpus instance is malformed");
  const auto sk = classify_skeleton(tri);
  const auto vs = local_check_all(tri, n, sk, 1);
  std::size_t interior = 0;
  for (const auto& v : vs) {
    ++interior;
    if (!v.immersible) o.fail("an edge fails the local test");
  }
  const bool global = brute_force_immersible(tri, n).immersible;
  if (global) o.fail("instance is globally immersible");
  o.detail << " interior_edges=" << interior << " local=all-pass global=" << (global ? "YES" : "NO");
}

// 10 -----------------------------------------------------------------------
void linear_verification(Outcome& o) {
  // Doubled clause gadget, coordinates scaled by c: every edge is interior
  // and the parallel-copies gluing is branch-free. The smallest rung already
  // has millions of instances, so every rung runs out of cache.
  const auto g = build_gadget(GadgetKind::Clause);
  const auto tri = doubled(g.tri);
  const auto base = doubled(g.coords);
  const auto sk = classify_skeleton(tri);
  std::vector<double> xs, ys;
  for (std::size_t c : {16000, 24000, 32000, 40000, 48000, 56000, 64000}) {
    NormalCoordinates n(tri.size());
    for (std::size_t t = 0; t < tri.size(); ++t)
      for (int d = 0; d < kDiskTypes; ++d) n.set(t, d, base(t, d) * c);
    const auto gl = parallel_copies_gluing(tri, n);
    Count total = 0;
    for (const auto& v : n.values()) total += v;
    std::vector<double> times;
    bool ok = true;
    for (int rep = 0; rep < 5; ++rep) {
      const auto start = Clock::now();
      ok = ok && verify_immersed(tri, n, sk, gl).immersed;
      times.push_back(seconds_since(start));
    }
    if (!ok) o.fail("parallel copies rejected");
    std::sort(times.begin(), times.end());
    xs.push_back(static_cast<double>(total));
    ys.push_back(times[times.size() / 2]);
  }
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double b = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double a = (sy - b * sx) / k;
  double worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(a + b * xs[i] - ys[i]) / ys[i]);
  if (!(b > 0)) o.fail("time does not grow with size");
  if (worst > kLinearFitResidual) o.fail("linear fit residual too large");
  o.detail << " sizes=" << xs.front() << ".." << xs.back() << " max_relative_residual=" << worst;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"gadget-relation", gadget_relation_reproduction},
      {"sample-curves", sample_curve_checks},
      {"tube-windings", tube_windings},
      {"relation-classification", relation_classification},
      {"end-to-end-reduction", end_to_end},
      {"manifold-guarantee", manifold_guarantee},
      {"local-flow", local_flow_correctness},
      {"big-coordinates", big_coordinates},
      {"local-vs-global", local_vs_global},
      {"linear-verification", linear_verification},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ":"
              << o.detail.str() << std::endl;
  }
  return failed;
}
