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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snorm/cli.hpp"

namespace snorm {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out, err;

  bool has(const std::string& line) const { return out.find(line + "\n") != std::string::npos; }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "snorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SNORM_TEST_DATA) + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("snorm_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(Cli, VerifyGluing) {
  auto ok = run({"verify-gluing", data("clause.tri"), data("clause.coo"), data("clause_101101.glu")});
  EXPECT_EQ(ok.code, cli::kAccept) << ok.err;
  EXPECT_TRUE(ok.has("immersed=true"));
  EXPECT_TRUE(ok.has("edges.0.windings=1 1 1"));

  auto bad = run({"verify-gluing", data("clause.tri"), data("clause.coo"), data("clause_101111.glu")});
  EXPECT_EQ(bad.code, cli::kReject);
  EXPECT_TRUE(bad.has("immersed=false"));
  EXPECT_TRUE(bad.has("witness.winding=2"));
}

TEST_F(Cli, Validate) {
  auto ok = run({"validate", data("clause.tri")});
  EXPECT_EQ(ok.code, cli::kAccept) << ok.err;
  EXPECT_TRUE(ok.has("manifold=true"));
  EXPECT_TRUE(ok.has("tetrahedra=6"));
  EXPECT_TRUE(ok.has("interior_edges=1"));

  auto bad = run({"validate", write("bad.tri", "- 0:2:103 0:1:203 -\n")});
  EXPECT_EQ(bad.code, cli::kReject);
  EXPECT_TRUE(bad.has("status=bad-link"));
}

TEST_F(Cli, CheckCoords) {
  EXPECT_EQ(run({"check-coords", data("clause.tri"), data("clause.coo")}).code, cli::kAccept);
  EXPECT_EQ(run({"check-coords", "--embedded", data("clause.tri"), data("clause.coo")}).code, cli::kAccept);
  auto quads = write("cg1.coo", "0 0 0 0 0 1 1\n");
  auto single = write("one.tri", "- - - -\n");
  auto r = run({"check-coords", "--embedded", single, quads});
  EXPECT_EQ(r.code, cli::kReject);
  EXPECT_TRUE(r.has("quad_conditions=false"));
  EXPECT_EQ(run({"check-coords", single, quads}).code, cli::kAccept);
  auto off = write("off.coo", "2 1 0 0 0 0 1\n1 1 0 0 0 1 0\n1 1 0 0 0 0 1\n1 1 0 0 0 1 0\n1 1 0 0 0 0 1\n1 1 0 0 0 1 0\n");
  auto m = run({"check-coords", data("clause.tri"), off});
  EXPECT_EQ(m.code, cli::kReject);
  EXPECT_TRUE(m.has("matching=false"));
}

TEST_F(Cli, RelationProps) {
  auto r = run({"relation-props", "R"});
  EXPECT_EQ(r.code, cli::kAccept);
  for (const char* k : {"horn", "dual_horn", "bijunctive", "affine", "schaefer", "delta_matroid"})
    EXPECT_TRUE(r.has(std::string(k) + "=false")) << k;
  EXPECT_TRUE(r.has("tuples=11"));
  auto tube = run({"relation-props", write("eq.rel", "2\n00\n11\n")});
  EXPECT_TRUE(tube.has("affine=true"));
  EXPECT_TRUE(tube.has("schaefer=true"));
}

TEST_F(Cli, CompileAndSolveUnsat) {
  auto c = run({"compile", data("unsat.cnf"), "-o", path("unsat")});
  ASSERT_EQ(c.code, cli::kAccept) << c.err;
  EXPECT_TRUE(c.has("tubes=1"));
  for (const char* f : {"formula.cnf", "triangulation.tri", "coordinates.coo", "sites.map"})
    EXPECT_TRUE(fs::exists(dir_ / "unsat" / f)) << f;
  auto s = run({"solve", path("unsat")});
  EXPECT_EQ(s.code, cli::kReject) << s.err;
  EXPECT_TRUE(s.has("verdict=not-immersible"));
}

TEST_F(Cli, CompileAndSolveSat) {
  ASSERT_EQ(run({"compile", data("sat.cnf"), "-o", path("sat")}).code, cli::kAccept);
  auto s = run({"solve", path("sat"), "-w", path("witness.glu")});
  EXPECT_EQ(s.code, cli::kAccept) << s.err;
  EXPECT_TRUE(s.has("verdict=immersible"));
  EXPECT_TRUE(s.has("assignment_satisfies=true"));
  EXPECT_TRUE(s.has("assignment.x0=0"));
  auto v = run({"verify-gluing", path("sat/triangulation.tri"), path("sat/coordinates.coo"), path("witness.glu")});
  EXPECT_EQ(v.code, cli::kAccept) << v.err;

  auto plain = run({"solve", "--no-prune", path("sat/triangulation.tri"), path("sat/coordinates.coo")});
  EXPECT_EQ(plain.code, cli::kAccept);
}

TEST_F(Cli, CompileSimplicial) {
  auto a = run({"compile", data("sat.cnf"), "-o", path("a")});
  auto b = run({"compile", "--simplicial", data("sat.cnf"), "-o", path("b")});
  ASSERT_EQ(b.code, cli::kAccept);
  EXPECT_TRUE(a.has("tetrahedra=28"));
  EXPECT_TRUE(b.has("tetrahedra=34"));
  EXPECT_TRUE(b.has("simplicial=true"));
  EXPECT_EQ(run({"validate", path("b/triangulation.tri")}).code, cli::kAccept);
}

TEST_F(Cli, ParseErrorsAreUsageErrors) {
  auto bad = write("bad.tri", "- - -\n");
  auto r = run({"validate", bad});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find(bad + ":1:"), std::string::npos) << r.err;
  EXPECT_EQ(run({"validate", path("missing.tri")}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"local-check", "-j", "0", data("clause.tri"), data("clause.coo")}).code, cli::kUsage);
}

TEST_F(Cli, Budget) {
  auto r = run({"solve", "--max-nodes", "1", data("badlocal.tri"), data("badlocal.coo")});
  EXPECT_EQ(r.code, cli::kBudget);
  EXPECT_TRUE(r.has("verdict=budget-exceeded"));
  EXPECT_EQ(run({"solve", "--max-arc-count", "1", data("clause.tri"), data("clause.coo")}).code, cli::kBudget);

  ::setenv("SNORM_BUDGET", "sites=2", 1);
  auto env = run({"solve", data("clause.tri"), data("clause.coo")});
  ::unsetenv("SNORM_BUDGET");
  EXPECT_EQ(env.code, cli::kBudget);
  ::setenv("SNORM_BUDGET", "bogus", 1);
  auto malformed = run({"solve", data("clause.tri"), data("clause.coo")});
  ::unsetenv("SNORM_BUDGET");
  EXPECT_EQ(malformed.code, cli::kUsage);
}

TEST_F(Cli, Json) {
  auto r = run({"--json", "verify-gluing", data("clause.tri"), data("clause.coo"), data("clause_101101.glu")});
  ASSERT_EQ(r.code, cli::kAccept);
  auto j = cli::Json::parse(r.out);
  EXPECT_EQ(j["command"], "verify-gluing");
  EXPECT_EQ(j["immersed"], true);
  EXPECT_EQ(j["inputs"]["gluing"]["fnv1a64"], io::hex64(io::fnv1a64(io::slurp(data("clause_101101.glu")))));
  EXPECT_EQ(j["edges"][0]["windings"].size(), 3u);
  EXPECT_TRUE(j.contains("version"));
}

TEST_F(Cli, LocalCheck) {
  auto one = run({"local-check", data("badlocal.tri"), data("badlocal.coo")});
  auto many = run({"local-check", "-j", "3", data("badlocal.tri"), data("badlocal.coo")});
  EXPECT_EQ(one.code, cli::kAccept) << one.err;
  EXPECT_EQ(one.out, many.out);
  EXPECT_TRUE(one.has("locally_immersible=true"));
  EXPECT_EQ(run({"solve", data("badlocal.tri"), data("badlocal.coo")}).code, cli::kReject);
}

TEST_F(Cli, Double) {
  auto r = run({"double", data("tube.tri"), "-o", path("d.tri"), "-c", data("tube.coo"), "--coords-out", path("d.coo")});
  ASSERT_EQ(r.code, cli::kAccept) << r.err;
  EXPECT_TRUE(r.has("boundary_faces=0"));
  EXPECT_TRUE(r.has("tetrahedra=12"));
  EXPECT_EQ(run({"validate", path("d.tri")}).code, cli::kAccept);
  EXPECT_EQ(run({"check-coords", path("d.tri"), path("d.coo")}).code, cli::kAccept);
  EXPECT_EQ(run({"double", path("d.tri"), "-o", path("dd.tri")}).code, cli::kUsage);
  EXPECT_EQ(run({"double", data("tube.tri"), "-o", path("e.tri"), "-c", data("tube.coo")}).code, cli::kUsage);
}

TEST_F(Cli, Version) {
  auto r = run({"--version"});
  EXPECT_EQ(r.code, cli::kAccept);
  EXPECT_NE(r.out.find("snorm"), std::string::npos);
}

}  // namespace
}  // namespace snorm
