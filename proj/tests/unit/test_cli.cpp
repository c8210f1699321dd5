// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cli.hpp"
#include "nchodge/error.hpp"

using namespace nchodge;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string log;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "nchodge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, log;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, log);
  return {code, out.str(), log.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Drops the trailing wall_ms column.
std::string without_timing(const std::string& csv) {
  std::string out;
  for (const auto& l : lines(csv)) out += l.substr(0, l.rfind(',')) + '\n';
  return out;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--refinements", "4,2"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--refinements", "4,x"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--pattern", "hexagonal"}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--oracle", "maybe"}).code, cli::kUsageError);
  EXPECT_EQ(run({"basis", "--mesh-m", "1"}).code, cli::kUsageError);
  EXPECT_EQ(run({"basis", "--mesh-file", "/nonexistent/mesh.txt"}).code, cli::kUsageError);
  EXPECT_EQ(run({"interpolate", "--target", "nope", "--refinements", "2"}).code, cli::kUsageError);
  EXPECT_EQ(run({"--help"}).code, cli::kPass);
}

TEST(Cli, InvalidMeshFileNamesEntity) {
  const std::string path = temp_file("bad_mesh.txt", "ndim 2\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 2 1\n");
  const CliRun r = run({"basis", "--mesh-file", path});
  EXPECT_EQ(r.code, cli::kUsageError);
  EXPECT_NE(r.log.find("cell 0"), std::string::npos) << r.log;
}

TEST(Cli, SolveCsvAndOracle) {
  const CliRun r = run({"solve", "--refinements", "2,4"});
  ASSERT_EQ(r.code, cli::kPass) << r.log;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "mesh_m,h,dofs,l2_err,rot_err,div_err,energy_err,cg_iters,wall_ms");
  EXPECT_EQ(l[1].substr(0, 2), "2,");
  EXPECT_NE(r.log.find("oracle_diff"), std::string::npos);
  EXPECT_NE(r.log.find("fitted rates"), std::string::npos);
  const CliRun off = run({"solve", "--refinements", "2", "--oracle", "off"});
  EXPECT_EQ(off.log.find("oracle_diff"), std::string::npos);
}

TEST(Cli, DeterministicApartFromTiming) {
  const CliRun a = run({"interpolate", "--refinements", "2,4"});
  const CliRun b = run({"interpolate", "--refinements", "2,4"});
  ASSERT_EQ(a.code, cli::kPass);
  EXPECT_EQ(without_timing(a.out), without_timing(b.out));
  EXPECT_EQ(lines(a.out)[0], "mesh_m,h,dofs,l2_err,rot_err,div_err,energy_err,wall_ms");
}

TEST(Cli, ConfigFileAndFlagOverride) {
  const std::string cfg = temp_file("cfg.json", R"({"refinements": [2, 4], "pattern": "crisscross", "oracle": "off"})");
  const CliRun a = run({"solve", "--config", cfg});
  ASSERT_EQ(a.code, cli::kPass) << a.log;
  EXPECT_EQ(lines(a.out).size(), 3u);
  EXPECT_EQ(a.log.find("oracle_diff"), std::string::npos);
  // CRISSCROSS m=2 has 16 cells.
  EXPECT_NE(a.log.find("dofs=78"), std::string::npos) << a.log;
  const CliRun b = run({"solve", "--config", cfg, "--refinements", "2", "--pattern", "diagonal"});
  ASSERT_EQ(b.code, cli::kPass);
  EXPECT_EQ(lines(b.out).size(), 2u);
  EXPECT_NE(b.log.find("dofs=38"), std::string::npos);

  EXPECT_EQ(run({"solve", "--config", temp_file("bad.json", R"({"colour": 1})")}).code, cli::kUsageError);
  EXPECT_EQ(run({"solve", "--config", temp_file("bad2.json", "[1, 2")}).code, cli::kUsageError);
}

TEST(Cli, ApplyJsonConfig) {
  cli::StudyConfig c;
  cli::apply_json_config(R"({"mesh_m": 8, "tol": 1e-8, "seed": 7, "oracle": false, "refinements": "2,4"})", c);
  EXPECT_EQ(c.mesh_m, 8);
  EXPECT_EQ(c.tol, 1e-8);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_FALSE(c.oracle);
  EXPECT_EQ(c.refinements, (std::vector<int>{2, 4}));
  EXPECT_THROW(cli::apply_json_config(R"({"mesh_m": "x"})", c), DomainError);
}

TEST(Cli, BasisDumpAndAudit) {
  const std::string path = testing::TempDir() + "basis.jsonl";
  const CliRun r = run({"basis", "--mesh-m", "2", "--out", path});
  ASSERT_EQ(r.code, cli::kPass) << r.log;
  EXPECT_NE(r.log.find("basis=38"), std::string::npos);
  EXPECT_NE(r.log.find("support sizes: 1:16 2:22"), std::string::npos) << r.log;
  std::ifstream in(path);
  int n = 0;
  for (std::string l; std::getline(in, l); ++n) {
    const auto j = nlohmann::ordered_json::parse(l);
    EXPECT_EQ(j.begin().key(), "category");
  }
  EXPECT_EQ(n, 38);
}

TEST(Cli, BasisOnSubdividedMeshFile) {
  const std::string path = temp_file("square.txt", write_mesh(generate_square_mesh(2, MeshPattern::kDiagonal)));
  const CliRun r = run({"basis", "--mesh-file", path, "--mesh-m", "2"});
  ASSERT_EQ(r.code, cli::kPass) << r.log;
  EXPECT_NE(r.log.find("cells=32"), std::string::npos);
}

TEST(Cli, VerifyReport) {
  const CliRun r = run({"verify", "--seed", "11"});
  ASSERT_EQ(r.code, cli::kPass) << r.log;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_EQ(j.at("counts").size(), 6u);
}
