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

// Command-line front end. Every command prints a line-oriented key=value
// report (or JSON with --json) and returns
//   0  accepted / SAT / immersible
//   1  rejected / UNSAT / not immersible
//   2  usage or format error
//   3  budget exceeded

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "snorm/csp.hpp"
#include "snorm/gluing.hpp"
#include "snorm/io.hpp"
#include "snorm/local_flow.hpp"
#include "snorm/normal_coords.hpp"
#include "snorm/reduction.hpp"
#include "snorm/solver.hpp"
#include "snorm/triangulation.hpp"

#ifndef SNORM_VERSION
#define SNORM_VERSION "0.0.0"
#endif

namespace snorm::cli {

inline constexpr int kAccept = 0;
inline constexpr int kReject = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;

using Json = nlohmann::ordered_json;

class Report {
 public:
  explicit Report(const std::string& command) {
    j_["command"] = command;
    j_["version"] = SNORM_VERSION;
  }

  Json& operator[](const std::string& key) { return j_[key]; }

  void input(const std::string& role, const std::string& path) {
    j_["inputs"][role] = {{"path", path}, {"fnv1a64", io::hex64(io::fnv1a64(io::slurp(path)))}};
  }

  void print(std::ostream& out, bool json) const {
    if (json) {
      out << j_.dump(2) << '\n';
      return;
    }
    flatten(out, "", j_);
  }

 private:
  static void flatten(std::ostream& out, const std::string& prefix, const Json& v) {
    if (v.is_object()) {
      for (auto it = v.begin(); it != v.end(); ++it)
        flatten(out, prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
    } else if (v.is_array() && !v.empty() && v.front().is_structured()) {
      for (std::size_t i = 0; i < v.size(); ++i) flatten(out, prefix + "." + std::to_string(i), v[i]);
    } else if (v.is_array()) {
      out << prefix << '=';
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << scalar(v[i]);
      out << '\n';
    } else {
      out << prefix << '=' << scalar(v) << '\n';
    }
  }

  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  Json j_ = Json::object();
};

/// Budget defaults, optionally overridden by SNORM_BUDGET, a comma-separated
/// list of `sites=`, `arc=`, `log2=`, `time=` and `nodes=` settings.
inline SearchBudget budget_from_env() {
  SearchBudget b;
  const char* env = std::getenv("SNORM_BUDGET");
  if (!env) return b;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("SNORM_BUDGET: malformed item '" + item + "'");
    std::string k = item.substr(0, eq), v = item.substr(eq + 1);
    try {
      if (k == "sites") b.max_sites = std::stoull(v);
      else if (k == "arc") b.max_arc_count = std::stoull(v);
      else if (k == "log2") b.max_log2_space = std::stod(v);
      else if (k == "time") b.time_limit_seconds = std::stod(v);
      else if (k == "nodes") b.max_nodes = std::stoull(v);
      else throw std::invalid_argument("unknown key");
    } catch (const std::exception&) {
      throw std::invalid_argument("SNORM_BUDGET: bad item '" + item + "'");
    }
  }
  return b;
}

inline Triangulation load_triangulation(const std::string& p) {
  auto in = io::open_input(p);
  return io::read_triangulation(in, p);
}
inline NormalCoordinates load_coordinates(const std::string& p) {
  auto in = io::open_input(p);
  return io::read_coordinates(in, p);
}
inline GlobalGluing load_gluing(const std::string& p) {
  auto in = io::open_input(p);
  return io::read_gluing(in, p);
}

template <class F>
inline void write_file(const std::filesystem::path& p, F&& f) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  f(out);
}

inline Json curves_json(const BlockCurveReport& r) {
  Json edges = Json::array();
  for (const auto& e : r.edges) {
    Json w = Json::array();
    for (const auto& c : e.curves) w.push_back(c.winding);
    edges.push_back({{"edge", e.edge}, {"fan_length", e.fan_length}, {"instances", e.instances}, {"windings", w}});
  }
  return edges;
}

inline Json tuple_list(const std::vector<Tuple>& ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(to_string(t));
  return a;
}

// ---------------------------------------------------------------------------

struct Options {
  bool json = false;
  std::string tri, coo, glu, rel, cnf, out, coords_out, witness_out, path;
  std::size_t jobs = 1;
  bool simplicial = false, embedded = false, no_prune = false;
  std::optional<std::size_t> max_sites, max_arc, max_nodes;
  std::optional<double> max_log2, time_limit;
};

inline int cmd_validate(const Options& o, std::ostream& out) {
  Report r("validate");
  r.input("triangulation", o.tri);
  auto tri = load_triangulation(o.tri);
  r["tetrahedra"] = tri.size();
  r["boundary_faces"] = tri.boundary_face_count();
  auto v = validate_manifold(tri);
  r["status"] = to_string(v.status);
  if (v.status != ManifoldStatus::ReversedEdge) {
    auto sk = classify_skeleton(tri);
    std::size_t interior = 0;
    for (const auto& e : sk.edges) interior += !e.boundary;
    r["edges"] = sk.edges.size();
    r["interior_edges"] = interior;
    r["vertices"] = sk.vertices.size();
  }
  if (!v.ok()) r["detail"] = v.detail;
  r["manifold"] = v.ok();
  r.print(out, o.json);
  return v.ok() ? kAccept : kReject;
}

inline int cmd_check_coords(const Options& o, std::ostream& out) {
  Report r("check-coords");
  r.input("triangulation", o.tri);
  r.input("coordinates", o.coo);
  auto tri = load_triangulation(o.tri);
  auto n = load_coordinates(o.coo);
  require_length(tri, n);
  auto m = check_matching(tri, n);
  r["matching"] = m.ok;
  if (!m.ok) {
    r["violation.site"] = io::format_site(*m.site);
    r["violation.lhs"] = m.lhs.str();
    r["violation.rhs"] = m.rhs.str();
  }
  auto q = check_quad_conditions(tri, n);
  r["quad_conditions"] = q.ok;
  if (!q.ok) r["quad_offending"] = q.offending;
  bool ok = m.ok && (q.ok || !o.embedded);
  r["accepted"] = ok;
  r.print(out, o.json);
  return ok ? kAccept : kReject;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  Report r("verify-gluing");
  r.input("triangulation", o.tri);
  r.input("coordinates", o.coo);
  r.input("gluing", o.glu);
  auto tri = load_triangulation(o.tri);
  auto n = load_coordinates(o.coo);
  auto g = load_gluing(o.glu);
  require_length(tri, n);
  if (auto m = check_matching(tri, n); !m.ok)
    throw std::invalid_argument("matching equations fail at site " + io::format_site(*m.site));
  auto v = verify_immersed(tri, n, g);
  r["immersed"] = v.immersed;
  if (v.witness_edge) {
    r["witness.edge"] = *v.witness_edge;
    r["witness.winding"] = v.witness_curve->winding;
    r["witness.tet"] = v.witness_curve->start.tet;
    r["witness.disk"] = disk_name(v.witness_curve->start.disk);
    r["witness.copy"] = v.witness_curve->start.copy;
  }
  r["edges"] = curves_json(v.report);
  r.print(out, o.json);
  return v.immersed ? kAccept : kReject;
}

inline SearchBudget budget_of(const Options& o) {
  auto b = budget_from_env();
  if (o.max_sites) b.max_sites = *o.max_sites;
  if (o.max_arc) b.max_arc_count = *o.max_arc;
  if (o.max_nodes) b.max_nodes = *o.max_nodes;
  if (o.max_log2) b.max_log2_space = *o.max_log2;
  if (o.time_limit) b.time_limit_seconds = *o.time_limit;
  if (o.no_prune) b.prune = false;
  return b;
}

inline int cmd_solve(const Options& o, std::ostream& out) {
  namespace fs = std::filesystem;
  Report r("solve");
  std::string tri_path = o.tri, coo_path = o.coo;
  std::optional<std::string> map_path, cnf_path;
  if (fs::is_directory(o.path)) {
    fs::path d(o.path);
    tri_path = (d / "triangulation.tri").string();
    coo_path = (d / "coordinates.coo").string();
    if (fs::exists(d / "sites.map")) map_path = (d / "sites.map").string();
    if (fs::exists(d / "formula.cnf")) cnf_path = (d / "formula.cnf").string();
  } else if (!o.path.empty()) {
    tri_path = o.path;
  }
  if (tri_path.empty() || coo_path.empty())
    throw CLI::ValidationError("solve", "expects DIR or TRI COO");
  r.input("triangulation", tri_path);
  r.input("coordinates", coo_path);
  auto tri = load_triangulation(tri_path);
  auto n = load_coordinates(coo_path);
  require_length(tri, n);
  auto b = budget_of(o);
  SearchResult res;
  try {
    res = brute_force_immersible(tri, n, b);
  } catch (const BudgetExceeded& e) {
    r["verdict"] = "budget-exceeded";
    r["reason"] = e.what();
    r.print(out, o.json);
    return kBudget;
  }
  r["verdict"] = res.immersible ? "immersible" : "not-immersible";
  r["nodes"] = res.nodes;
  r["log2_space"] = res.log2_space;
  if (res.immersible) {
    std::ostringstream ss;
    io::write_gluing(ss, *res.witness);
    if (!o.witness_out.empty()) {
      write_file(o.witness_out, [&](std::ostream& f) { f << ss.str(); });
      r["witness"] = o.witness_out;
    }
    if (map_path) {
      r.input("site_map", *map_path);
      auto min = io::open_input(*map_path);
      auto sm = io::read_site_map(min, *map_path);
      auto a = io::decode_with_site_map(sm, *res.witness);
      Json assignment = Json::object();
      for (auto [v, bit] : a) assignment["x" + std::to_string(v)] = static_cast<int>(bit);
      r["assignment"] = assignment;
      if (cnf_path) {
        r.input("formula", *cnf_path);
        auto fin = io::open_input(*cnf_path);
        auto f = io::read_formula(fin, *cnf_path, fs::path(*cnf_path).parent_path());
        r["assignment_satisfies"] = satisfies(f, a);
      }
    }
  }
  r.print(out, o.json);
  return res.immersible ? kAccept : kReject;
}

inline int cmd_local_check(const Options& o, std::ostream& out) {
  Report r("local-check");
  r.input("triangulation", o.tri);
  r.input("coordinates", o.coo);
  auto tri = load_triangulation(o.tri);
  auto n = load_coordinates(o.coo);
  require_length(tri, n);
  if (auto m = check_matching(tri, n); !m.ok)
    throw std::invalid_argument("matching equations fail at site " + io::format_site(*m.site));
  auto sk = classify_skeleton(tri);
  auto vs = local_check_all(tri, n, sk, o.jobs);
  bool all = true;
  Json edges = Json::array();
  for (const auto& v : vs) {
    all = all && v.immersible;
    edges.push_back({{"edge", v.edge},
                     {"immersible", v.immersible},
                     {"flow", v.flow_value.str()},
                     {"bound", v.bound.str()}});
  }
  r["locally_immersible"] = all;
  r["edges"] = edges;
  r.print(out, o.json);
  return all ? kAccept : kReject;
}

inline int cmd_compile(const Options& o, std::ostream& out) {
  namespace fs = std::filesystem;
  Report r("compile");
  r.input("formula", o.cnf);
  auto in = io::open_input(o.cnf);
  auto f = io::read_formula(in, o.cnf, fs::path(o.cnf).parent_path());
  auto ci = compile_formula(f, {o.simplicial});
  fs::path d(o.out);
  fs::create_directories(d);
  write_file(d / "formula.cnf", [&](std::ostream& s) { io::write_formula(s, f); });
  write_file(d / "triangulation.tri", [&](std::ostream& s) { io::write_triangulation(s, ci.tri); });
  write_file(d / "coordinates.coo", [&](std::ostream& s) { io::write_coordinates(s, ci.coords); });
  write_file(d / "sites.map", [&](std::ostream& s) { io::write_site_map(s, io::site_map_of(ci)); });
  r["clauses"] = f.clauses.size();
  r["variables"] = f.variables().size();
  r["tubes"] = ci.tubes.size();
  r["constants"] = ci.constants.size();
  r["tetrahedra"] = ci.tri.size();
  r["simplicial"] = o.simplicial;
  r["output"] = d.string();
  r.print(out, o.json);
  return kAccept;
}

inline int cmd_relation_props(const Options& o, std::ostream& out) {
  Report r("relation-props");
  Relation rel = gadget_relation();
  if (o.rel == "R") {
    r["relation"] = "R (built-in)";
  } else {
    r.input("relation", o.rel);
    auto in = io::open_input(o.rel);
    rel = io::read_relation(in, o.rel);
  }
  r["arity"] = rel.arity();
  r["tuples"] = rel.size();
  auto p = classify_relation(rel);
  auto closure = [&](const char* name, bool flag, const std::optional<ClosureWitness>& w) {
    r[name] = flag;
    if (w) r[std::string(name) + "_witness"] = {{"inputs", tuple_list(w->inputs)}, {"result", to_string(w->result)}};
  };
  closure("horn", p.horn, p.horn_witness);
  closure("dual_horn", p.dual_horn, p.dual_horn_witness);
  closure("bijunctive", p.bijunctive, p.bijunctive_witness);
  closure("affine", p.affine, p.affine_witness);
  r["schaefer"] = p.schaefer();
  r["delta_matroid"] = p.delta_matroid;
  if (p.delta_witness)
    r["delta_matroid_witness"] = {{"x", to_string(p.delta_witness->x)},
                                  {"y", to_string(p.delta_witness->y)},
                                  {"x_prime", to_string(p.delta_witness->x_prime)}};
  r.print(out, o.json);
  return kAccept;
}

inline int cmd_double(const Options& o, std::ostream& out) {
  Report r("double");
  r.input("triangulation", o.tri);
  auto tri = load_triangulation(o.tri);
  auto v = validate_manifold(tri);
  if (!v.ok()) throw std::invalid_argument("double: input is not a manifold (" + v.detail + ")");
  auto d = doubled(tri);
  write_file(o.out, [&](std::ostream& s) { io::write_triangulation(s, d); });
  r["tetrahedra"] = d.size();
  r["boundary_faces"] = d.boundary_face_count();
  r["output"] = o.out;
  if (!o.coo.empty()) {
    if (o.coords_out.empty()) throw CLI::ValidationError("--coords-out", "required with --coords");
    r.input("coordinates", o.coo);
    auto n = load_coordinates(o.coo);
    require_length(tri, n);
    write_file(o.coords_out, [&](std::ostream& s) { io::write_coordinates(s, doubled(n)); });
    r["coordinates_output"] = o.coords_out;
  }
  r.print(out, o.json);
  return kAccept;
}

/// Parses argv and runs one command.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Singular normal surfaces: certificates, local flow tests, search, and formula compilation"};
  app.set_version_flag("--version", std::string("snorm ") + SNORM_VERSION);
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Print the report as JSON");

  auto* validate = app.add_subcommand("validate", "Check that a triangulation is a 3-manifold");
  validate->add_option("tri", o.tri, "Triangulation (.tri)")->required();

  auto* coords = app.add_subcommand("check-coords", "Check matching equations and quadrilateral conditions");
  coords->add_option("tri", o.tri)->required();
  coords->add_option("coo", o.coo)->required();
  coords->add_flag("--embedded", o.embedded, "Also require the quadrilateral conditions");

  auto* verify = app.add_subcommand("verify-gluing", "Check a gluing certificate for branch points");
  verify->add_option("tri", o.tri)->required();
  verify->add_option("coo", o.coo)->required();
  verify->add_option("glu", o.glu)->required();

  auto* solve = app.add_subcommand("solve", "Search for a branch-free gluing");
  solve->add_option("path", o.path, "Compiled instance directory, or a .tri file")->required();
  solve->add_option("coo", o.coo, "Coordinates when PATH is a .tri file");
  solve->add_option("-w,--witness", o.witness_out, "Write the witness gluing here");
  solve->add_option("--max-sites", o.max_sites);
  solve->add_option("--max-arc-count", o.max_arc);
  solve->add_option("--max-log2-space", o.max_log2);
  solve->add_option("--time-limit", o.time_limit, "Seconds");
  solve->add_option("--max-nodes", o.max_nodes);
  solve->add_flag("--no-prune", o.no_prune, "Enumerate every gluing");

  auto* local = app.add_subcommand("local-check", "Max-flow test around every interior edge");
  local->add_option("tri", o.tri)->required();
  local->add_option("coo", o.coo)->required();
  local->add_option("-j,--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* compile = app.add_subcommand("compile", "Compile a formula into a triangulation and coordinates");
  compile->add_option("cnf", o.cnf)->required();
  compile->add_option("-o,--output", o.out, "Output directory")->required();
  compile->add_flag("--simplicial", o.simplicial, "Replace each tube by copies glued in series");

  auto* props = app.add_subcommand("relation-props", "Closure properties of a relation");
  props->add_option("rel", o.rel, "Relation file, or R for the built-in relation")->required();

  auto* dbl = app.add_subcommand("double", "Glue two copies of a triangulation along their boundary");
  dbl->add_option("tri", o.tri)->required();
  dbl->add_option("-o,--output", o.out)->required();
  dbl->add_option("-c,--coords", o.coo);
  dbl->add_option("--coords-out", o.coords_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kAccept : kUsage;
  }
  try {
    if (*validate) return cmd_validate(o, out);
    if (*coords) return cmd_check_coords(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*solve) return cmd_solve(o, out);
    if (*local) return cmd_local_check(o, out);
    if (*compile) return cmd_compile(o, out);
    if (*props) return cmd_relation_props(o, out);
    if (*dbl) return cmd_double(o, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace snorm::cli
