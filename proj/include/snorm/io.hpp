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

// Text formats.
//
//   .tri  one line per tetrahedron, four tokens for faces 0..3: `-` for a
//         boundary face or `tet:face:perm`, perm giving the images of the
//         face's ascending vertices.
//   .coo  one line per tetrahedron, seven nonnegative integers in disk order.
//   .glu  one line per site, `tet:face|cut : p0 p1 ...`, sorted by site. The
//         site is named on the smaller face slot of its glued pair.
//   .rel  arity on the first line, then one bit string per tuple.
//   .cnf  one clause per line, tokens `x<id>`, `0` or `1`. An optional line
//         `@relation <name>` selects the built-in `R` or a .rel file.
//   .map  one line per clause argument, `<arg> <clause> <position> <site>`,
//         then `tube x<id> <site> ...` for every tube.
//
// `#` starts a comment line everywhere.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snorm/csp.hpp"
#include "snorm/gluing.hpp"
#include "snorm/reduction.hpp"

namespace snorm::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::string token, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message +
                           (token.empty() ? "" : " (at '" + token + "')")),
        file_(std::move(file)),
        line_(line),
        token_(std::move(token)) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& token() const { return token_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string token_;
};

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<Line> lines(std::istream& in) {
  std::vector<Line> out;
  std::string s;
  std::size_t no = 0;
  while (std::getline(in, s)) {
    ++no;
    std::istringstream ss(s);
    Line l{no, {}};
    std::string tok;
    while (ss >> tok) l.tokens.push_back(tok);
    if (l.tokens.empty() || l.tokens[0][0] == '#') continue;
    out.push_back(std::move(l));
  }
  return out;
}

inline std::optional<std::size_t> parse_size(const std::string& s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

inline std::optional<Count> parse_count(const std::string& s) {
  if (s.empty()) return std::nullopt;
  for (char c : s)
    if (c < '0' || c > '9') return std::nullopt;
  return Count(s);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::optional<Site> parse_site(const std::string& s) {
  auto bar = split(s, '|');
  if (bar.size() != 2) return std::nullopt;
  auto tf = split(bar[0], ':');
  if (tf.size() != 2) return std::nullopt;
  auto t = parse_size(tf[0]), f = parse_size(tf[1]), c = parse_size(bar[1]);
  if (!t || !f || !c || *f > 3 || *c > 3 || *c == *f) return std::nullopt;
  return Site{{*t, static_cast<int>(*f)}, static_cast<int>(*c)};
}

}  // namespace detail

inline std::string format_site(const Site& s) { return snorm::detail::site_string(s); }

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "", "cannot open file");
  return in;
}

// ---------------------------------------------------------------------------
// Triangulations
// ---------------------------------------------------------------------------

inline Triangulation read_triangulation(std::istream& in, const std::string& name = "<input>") {
  auto ls = detail::lines(in);
  Triangulation tri(ls.size());
  struct Entry {
    FaceSlot target;
    Perm4 map;
    std::size_t line;
    std::string token;
  };
  std::map<FaceSlot, Entry> entries;
  for (std::size_t t = 0; t < ls.size(); ++t) {
    const auto& l = ls[t];
    if (l.tokens.size() != 4)
      throw ParseError(name, l.number, "", "expected 4 face tokens, found " + std::to_string(l.tokens.size()));
    for (int f = 0; f < 4; ++f) {
      const std::string& tok = l.tokens[f];
      if (tok == "-") continue;
      auto parts = detail::split(tok, ':');
      if (parts.size() != 3) throw ParseError(name, l.number, tok, "expected 'tet:face:perm' or '-'");
      auto u = detail::parse_size(parts[0]), g = detail::parse_size(parts[1]);
      if (!u || *u >= ls.size()) throw ParseError(name, l.number, tok, "tetrahedron index out of range");
      if (!g || *g > 3) throw ParseError(name, l.number, tok, "face index must be 0..3");
      if (parts[2].size() != 3) throw ParseError(name, l.number, tok, "perm must have 3 digits");
      std::array<int, 4> img{};
      img[f] = static_cast<int>(*g);
      auto fv = face_vertices(f);
      int seen = 1 << *g;
      for (int i = 0; i < 3; ++i) {
        int d = parts[2][i] - '0';
        if (d < 0 || d > 3 || (seen >> d & 1))
          throw ParseError(name, l.number, tok, "perm must list the three vertices of face " + parts[1]);
        seen |= 1 << d;
        img[fv[i]] = d;
      }
      FaceSlot a{t, f}, b{*u, static_cast<int>(*g)};
      if (a == b) throw ParseError(name, l.number, tok, "face glued to itself");
      entries.emplace(a, Entry{b, Perm4(img[0], img[1], img[2], img[3]), l.number, tok});
    }
  }
  for (const auto& [a, e] : entries) {
    auto it = entries.find(e.target);
    if (it == entries.end() || it->second.target != a || !(it->second.map == e.map.inverse()))
      throw ParseError(name, e.line, e.token, "gluing is not matched by the reverse gluing");
    if (a < e.target) tri.glue(a, e.target, e.map);
  }
  return tri;
}

inline void write_triangulation(std::ostream& out, const Triangulation& tri) {
  for (std::size_t t = 0; t < tri.size(); ++t) {
    for (int f = 0; f < 4; ++f) {
      if (f) out << ' ';
      const auto& g = tri.partner({t, f});
      if (!g) {
        out << '-';
        continue;
      }
      out << g->target.tet << ':' << g->target.face << ':';
      for (int v : face_vertices(f)) out << g->map[v];
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Coordinates
// ---------------------------------------------------------------------------

inline NormalCoordinates read_coordinates(std::istream& in, const std::string& name = "<input>") {
  std::vector<Count> v;
  for (const auto& l : detail::lines(in)) {
    if (l.tokens.size() != kDiskTypes)
      throw ParseError(name, l.number, "", "expected 7 coordinates, found " + std::to_string(l.tokens.size()));
    for (const auto& tok : l.tokens) {
      auto c = detail::parse_count(tok);
      if (!c) throw ParseError(name, l.number, tok, "expected a nonnegative integer");
      v.push_back(*c);
    }
  }
  return NormalCoordinates(std::move(v));
}

inline void write_coordinates(std::ostream& out, const NormalCoordinates& n) {
  for (std::size_t t = 0; t < n.tet_count(); ++t) {
    for (int d = 0; d < kDiskTypes; ++d) out << (d ? " " : "") << n(t, d);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Gluing certificates
// ---------------------------------------------------------------------------

inline GlobalGluing read_gluing(std::istream& in, const std::string& name = "<input>") {
  GlobalGluing g;
  std::string s;
  std::size_t no = 0;
  while (std::getline(in, s)) {
    ++no;
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos || s[first] == '#') continue;
    auto bar = s.find('|');
    auto colon = bar == std::string::npos ? std::string::npos : s.find(':', bar);
    if (colon == std::string::npos) throw ParseError(name, no, s, "expected 'tet:face|cut : perm'");
    std::string head = s.substr(first, colon - first);
    while (!head.empty() && (head.back() == ' ' || head.back() == '\t')) head.pop_back();
    auto site = detail::parse_site(head);
    if (!site) throw ParseError(name, no, head, "malformed site");
    std::istringstream rest(s.substr(colon + 1));
    Permutation p;
    std::string tok;
    while (rest >> tok) {
      auto x = detail::parse_size(tok);
      if (!x) throw ParseError(name, no, tok, "expected an instance index");
      p.push_back(*x);
    }
    if (!is_permutation(p)) throw ParseError(name, no, head, "not a permutation");
    if (g.contains(*site)) throw ParseError(name, no, head, "site listed twice");
    g.set(*site, std::move(p));
  }
  return g;
}

inline void write_gluing(std::ostream& out, const GlobalGluing& g) {
  for (const auto& [s, p] : g) {
    out << format_site(s) << " :";
    for (auto x : p) out << ' ' << x;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Relations and formulas
// ---------------------------------------------------------------------------

inline Relation read_relation(std::istream& in, const std::string& name = "<input>") {
  auto ls = detail::lines(in);
  if (ls.empty()) throw ParseError(name, 0, "", "empty relation file");
  if (ls[0].tokens.size() != 1) throw ParseError(name, ls[0].number, "", "expected the arity alone");
  auto r = detail::parse_size(ls[0].tokens[0]);
  if (!r || *r == 0 || *r > 30) throw ParseError(name, ls[0].number, ls[0].tokens[0], "bad arity");
  std::set<Tuple> ts;
  for (std::size_t i = 1; i < ls.size(); ++i)
    for (const auto& tok : ls[i].tokens) {
      if (tok.size() != *r || tok.find_first_not_of("01") != std::string::npos)
        throw ParseError(name, ls[i].number, tok, "expected a bit string of length " + std::to_string(*r));
      ts.insert(tuple_from_string(tok));
    }
  if (ts.empty()) throw ParseError(name, ls.back().number, "", "relation has no tuples");
  return Relation(*r, std::move(ts));
}

inline void write_relation(std::ostream& out, const Relation& r) {
  out << r.arity() << '\n';
  for (const auto& t : r.tuples()) out << to_string(t) << '\n';
}

/// Reads a formula. A relation name other than `R` is read as a .rel path
/// relative to `base_dir`.
inline Formula read_formula(std::istream& in, const std::string& name = "<input>",
                            const std::filesystem::path& base_dir = {}) {
  Formula f;
  for (const auto& l : detail::lines(in)) {
    if (l.tokens[0] == "@relation") {
      if (l.tokens.size() != 2) throw ParseError(name, l.number, "", "expected '@relation <name>'");
      if (!f.clauses.empty()) throw ParseError(name, l.number, l.tokens[1], "@relation must precede clauses");
      f.relation_name = l.tokens[1];
      if (l.tokens[1] == "R") {
        f.relation = gadget_relation();
      } else {
        auto path = base_dir / l.tokens[1];
        auto rin = open_input(path.string());
        f.relation = read_relation(rin, path.string());
      }
      continue;
    }
    Clause c;
    for (const auto& tok : l.tokens) {
      if (tok == "0" || tok == "1") {
        c.push_back(Arg::constant(tok == "1"));
      } else if (tok.size() > 1 && tok[0] == 'x') {
        auto v = detail::parse_size(tok.substr(1));
        if (!v) throw ParseError(name, l.number, tok, "bad variable name");
        c.push_back(Arg::variable(*v));
      } else {
        throw ParseError(name, l.number, tok, "expected x<id>, 0 or 1");
      }
    }
    if (c.size() != f.relation.arity())
      throw ParseError(name, l.number, "", "clause has " + std::to_string(c.size()) +
                                               " arguments, relation arity is " + std::to_string(f.relation.arity()));
    f.clauses.push_back(std::move(c));
  }
  return f;
}

inline void write_formula(std::ostream& out, const Formula& f) {
  if (f.relation_name != "R") out << "@relation " << f.relation_name << '\n';
  for (const auto& c : f.clauses) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << to_string(c[i]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Site maps
// ---------------------------------------------------------------------------

struct SiteMap {
  struct Argument {
    Arg arg;
    Occurrence at;
    Site site;
  };
  struct Tube {
    std::size_t variable = 0;
    std::vector<Site> sites;
  };
  std::vector<Argument> arguments;
  std::vector<Tube> tubes;
};

inline SiteMap site_map_of(const CompiledInstance& ci) {
  SiteMap m;
  for (const auto& [occ, s] : ci.occurrence_sites)
    m.arguments.push_back({ci.formula.clauses[occ.clause][occ.position], occ, site_of(ci.tri, s)});
  for (const auto& t : ci.tubes) {
    SiteMap::Tube tube{t.variable, {}};
    for (const auto& s : t.sites) tube.sites.push_back(site_of(ci.tri, s));
    m.tubes.push_back(std::move(tube));
  }
  return m;
}

inline void write_site_map(std::ostream& out, const SiteMap& m) {
  for (const auto& a : m.arguments)
    out << to_string(a.arg) << ' ' << a.at.clause << ' ' << a.at.position << ' ' << format_site(a.site) << '\n';
  for (const auto& t : m.tubes) {
    out << "tube x" << t.variable;
    for (const auto& s : t.sites) out << ' ' << format_site(s);
    out << '\n';
  }
}

inline SiteMap read_site_map(std::istream& in, const std::string& name = "<input>") {
  SiteMap m;
  for (const auto& l : detail::lines(in)) {
    const auto& tk = l.tokens;
    if (tk[0] == "tube") {
      if (tk.size() < 3 || tk[1].size() < 2 || tk[1][0] != 'x')
        throw ParseError(name, l.number, "", "expected 'tube x<id> <site>...'");
      auto v = detail::parse_size(tk[1].substr(1));
      if (!v) throw ParseError(name, l.number, tk[1], "bad variable name");
      SiteMap::Tube t{*v, {}};
      for (std::size_t i = 2; i < tk.size(); ++i) {
        auto s = detail::parse_site(tk[i]);
        if (!s) throw ParseError(name, l.number, tk[i], "malformed site");
        t.sites.push_back(*s);
      }
      m.tubes.push_back(std::move(t));
      continue;
    }
    if (tk.size() != 4) throw ParseError(name, l.number, "", "expected '<arg> <clause> <position> <site>'");
    SiteMap::Argument a;
    if (tk[0] == "0" || tk[0] == "1") {
      a.arg = Arg::constant(tk[0] == "1");
    } else {
      auto v = tk[0].size() > 1 && tk[0][0] == 'x' ? detail::parse_size(tk[0].substr(1)) : std::nullopt;
      if (!v) throw ParseError(name, l.number, tk[0], "expected x<id>, 0 or 1");
      a.arg = Arg::variable(*v);
    }
    auto c = detail::parse_size(tk[1]), p = detail::parse_size(tk[2]);
    if (!c) throw ParseError(name, l.number, tk[1], "bad clause index");
    if (!p) throw ParseError(name, l.number, tk[2], "bad position");
    auto s = detail::parse_site(tk[3]);
    if (!s) throw ParseError(name, l.number, tk[3], "malformed site");
    a.at = {*c, *p};
    a.site = *s;
    m.arguments.push_back(a);
  }
  return m;
}

/// Variable values read off the clause-side sites listed in a site map.
inline Assignment decode_with_site_map(const SiteMap& m, const GlobalGluing& g) {
  Assignment a;
  for (const auto& arg : m.arguments) {
    if (!arg.arg.is_var()) continue;
    const Permutation* p = g.find(arg.site);
    if (!p || p->size() != 2)
      throw std::invalid_argument("site map: " + format_site(arg.site) + " is not a two-arc site of the gluing");
    a[arg.arg.var] = (*p)[0] == 1;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Digests
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << x;
  return ss.str();
}

inline std::string slurp(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace snorm::io
