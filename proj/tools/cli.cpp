// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "nchodge/error.hpp"
#include "nchodge/verify.hpp"

namespace nchodge::cli {

namespace {

constexpr double kOracleTol = 1e-8;
constexpr double kSymmetryTol = 1e-12;
constexpr double kConstraintTol = 1e-10;
constexpr double kMembershipTol = 1e-9;

bool parse_on_off(const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw DomainError("expected on|off, got '" + v + "'");
}

std::string rate_string(double r) {
  if (std::isnan(r)) return "n/a";
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << r;
  return s.str();
}

ExactSolution target_solution(const std::string& name) {
  if (name == "default" || name == "manufactured") return manufactured_solution();
  throw DomainError("unknown target '" + name + "' (known: default)");
}

StudyOptions study_options(const StudyConfig& cfg, std::vector<int> generated_default) {
  StudyOptions o;
  o.mesh.file = cfg.mesh_file;
  o.mesh.pattern = cfg.pattern;
  if (!cfg.refinements.empty()) {
    o.refinements = cfg.refinements;
  } else if (cfg.mesh_m) {
    o.refinements = {*cfg.mesh_m};
  } else if (cfg.mesh_file) {
    o.refinements = {1, 2, 4};
  } else {
    o.refinements = std::move(generated_default);
  }
  o.quad_order = cfg.quad_order;
  o.tol = cfg.tol;
  o.oracle = cfg.oracle;
  return o;
}

void print_rates(const StudyResult& r, std::ostream& log) {
  log << "fitted rates: l2 " << rate_string(r.l2_rate) << ", rot " << rate_string(r.rot_rate) << ", div "
      << rate_string(r.div_rate) << ", energy " << rate_string(r.energy_rate) << '\n';
}

int cmd_verify(const StudyConfig& cfg, std::ostream& out, std::ostream& log) {
  VerifyOptions o;
  o.seed = cfg.seed;
  o.projection_tol = cfg.tol;
  const VerifyReport report = run_verify(o);
  write_verify_json(report, out);
  int failed = 0;
  for (const CheckResult& c : report.checks) {
    if (c.passed) continue;
    ++failed;
    log << "FAIL " << c.name << " n=" << c.n << " k=" << c.k << ": " << c.detail << '\n';
  }
  log << "verify: " << report.checks.size() << " checks, " << failed << " failed, " << std::fixed
      << std::setprecision(0) << report.wall_ms << " ms\n";
  return failed == 0 ? kPass : kVerificationFailure;
}

int cmd_interpolate(const StudyConfig& cfg, std::ostream& out, std::ostream& log) {
  const ExactSolution exact = target_solution(cfg.target);
  const StudyResult r = interpolation_study(study_options(cfg, {2, 4, 8, 16}), exact);
  write_csv(r, out);
  bool ok = true;
  for (const StudyRow& row : r.rows) {
    log << "m=" << row.mesh_m << " dofs=" << row.dofs << " energy=" << row.err.energy
        << " constraint_residual=" << row.constraint_residual << '\n';
    if (!(row.constraint_residual <= kMembershipTol)) {
      log << "interpolant violates the constraints at m=" << row.mesh_m << '\n';
      ok = false;
    }
  }
  print_rates(r, log);
  return ok ? kPass : kVerificationFailure;
}

int cmd_solve(const StudyConfig& cfg, std::ostream& out, std::ostream& log) {
  const ExactSolution exact = target_solution(cfg.target);
  const StudyResult r = solve_study(study_options(cfg, {4, 8, 16, 32}), exact);
  write_csv(r, out);
  bool ok = true;
  for (const StudyRow& row : r.rows) {
    log << "m=" << row.mesh_m << " dofs=" << row.dofs << " energy=" << row.err.energy << " cg=" << row.cg_iters
        << (row.used_direct ? " (direct fallback)" : "") << " symmetry=" << row.symmetry;
    if (row.oracle_diff >= 0) log << " oracle_diff=" << row.oracle_diff;
    log << '\n';
    if (row.oracle_diff > kOracleTol || !(row.symmetry <= kSymmetryTol) ||
        !(row.constraint_residual <= kConstraintTol)) {
      log << "verification failed at m=" << row.mesh_m << '\n';
      ok = false;
    }
  }
  print_rates(r, log);
  return ok ? kPass : kVerificationFailure;
}

int cmd_basis(const StudyConfig& cfg, std::ostream& out, std::ostream& log) {
  MeshSource src{cfg.mesh_file, cfg.pattern};
  const int m = cfg.mesh_m.value_or(cfg.mesh_file ? 1 : 2);
  const auto tri = make_mesh(src, m);
  const ProductSpace prod(tri);
  const ConstraintSystem cons = build_constraints(prod);
  const GlobalBasis basis = build_global_basis(prod);
  write_basis_jsonl(basis, out);

  const SparseMatrix b = cons.stacked();
  const int rank = numerical_rank(b);
  const int expected = prod.dimension() - rank;
  const Eigen::MatrixXd residual = Eigen::MatrixXd(b * basis.to_product());
  const double worst = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
  std::map<std::size_t, int> supports;
  for (const BasisFunction& f : basis.functions()) ++supports[f.cells.size()];

  log << "cells=" << prod.num_cells() << " vertices=" << tri->num_vertices()
      << " interior=" << tri->num_interior_vertices() << '\n';
  if (!tri->has_interior_vertices()) log << "warning: mesh has no interior vertices\n";
  log << "basis=" << basis.size() << " (DIV_PATCH " << basis.count(BasisCategory::kDivPatch) << ", ROT_PATCH "
      << basis.count(BasisCategory::kRotPatch) << ", ROT_CELL " << basis.count(BasisCategory::kRotCell) << ")\n";
  log << "rank(B)=" << rank << " expected 6*cells-rank=" << expected << '\n';
  log << "support sizes:";
  for (const auto& [size, count] : supports) log << ' ' << size << ':' << count;
  log << "\nmax constraint residual=" << worst << '\n';

  bool ok = basis.size() == expected && worst <= kConstraintTol;
  for (const auto& [size, count] : supports) ok = ok && (size == 1 || size == 2);
  if (!ok) log << "basis audit failed\n";
  return ok ? kPass : kVerificationFailure;
}

}  // namespace

std::vector<int> parse_refinements(const std::string& text) {
  std::vector<int> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw DomainError("bad refinement '" + item + "'");
    }
    if (used != item.size()) throw DomainError("bad refinement '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty refinement list");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1 || (i > 0 && out[i] <= out[i - 1])) {
      throw DomainError("refinements must be positive and strictly increasing");
    }
  }
  return out;
}

void apply_json_config(const std::string& json_text, StudyConfig& config) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "mesh_m") {
        config.mesh_m = v.get<int>();
      } else if (key == "mesh_file") {
        config.mesh_file = v.get<std::string>();
      } else if (key == "pattern") {
        config.pattern = parse_pattern(v.get<std::string>());
      } else if (key == "refinements") {
        std::string joined;
        if (v.is_string()) {
          joined = v.get<std::string>();
        } else {
          for (int m : v.get<std::vector<int>>()) joined += (joined.empty() ? "" : ",") + std::to_string(m);
        }
        config.refinements = parse_refinements(joined);
      } else if (key == "quad_order") {
        config.quad_order = v.get<int>();
      } else if (key == "tol") {
        config.tol = v.get<double>();
      } else if (key == "out") {
        config.out = v.get<std::string>();
      } else if (key == "seed") {
        config.seed = v.get<std::uint64_t>();
      } else if (key == "oracle") {
        config.oracle = v.is_boolean() ? v.get<bool>() : parse_on_off(v.get<std::string>());
      } else if (key == "target") {
        config.target = v.get<std::string>();
      } else {
        throw DomainError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config value: ") + e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Nonconforming H(rot) and H(div) finite elements: verification, interpolation and solver studies",
               "nchodge"};
  app.require_subcommand(1);

  std::string config_path, pattern, refinements, oracle, out_path, mesh_file, target;
  int mesh_m = 0, quad_order = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;

  struct Given {
    CLI::Option *config, *mesh_m, *mesh_file, *pattern, *refinements, *quad_order, *tol, *out, *seed, *oracle, *target;
  };
  std::map<CLI::App*, Given> given;
  auto add_common = [&](CLI::App* sub) {
    Given g{};
    g.config = sub->add_option("--config", config_path, "JSON config file; flags override it")->check(CLI::ExistingFile);
    g.mesh_m = sub->add_option("--mesh-m", mesh_m, "squares per side, or subdivision factor with --mesh-file")
                   ->check(CLI::PositiveNumber);
    g.mesh_file = sub->add_option("--mesh-file", mesh_file, "mesh in the ndim/vertices/cells text format")
                      ->check(CLI::ExistingFile);
    g.pattern = sub->add_option("--pattern", pattern, "diagonal or crisscross");
    g.refinements = sub->add_option("--refinements", refinements, "comma separated, strictly increasing, e.g. 2,4,8");
    g.quad_order = sub->add_option("--quad-order", quad_order, "quadrature order for loads and errors")
                       ->check(CLI::Range(kMinQuadratureOrder, kMaxQuadratureOrder));
    g.tol = sub->add_option("--tol", tol, "CG tolerance (verify: projection tolerance)")->check(CLI::PositiveNumber);
    g.out = sub->add_option("--out", out_path, "output file (default stdout)");
    g.seed = sub->add_option("--seed", seed, "seed of the randomized suites");
    g.oracle = sub->add_option("--oracle", oracle, "saddle-point cross-check for m <= 4")
                   ->check(CLI::IsMember({"on", "off"}));
    g.target = sub->add_option("--target", target, "smooth target (default)");
    given[sub] = g;
  };
  add_common(app.add_subcommand("verify", "exact identity and unisolvence suites, JSON report"));
  add_common(app.add_subcommand("interpolate", "global interpolation error study, CSV"));
  add_common(app.add_subcommand("solve", "manufactured-solution convergence study, CSV"));
  add_common(app.add_subcommand("basis", "dump the global basis as JSON lines and audit it"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsageError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Given& g = given.at(sub);
  StudyConfig cfg;
  cfg.command = sub->get_name();
  std::ofstream file;
  try {
    if (g.config->count()) {
      std::ifstream in(config_path);
      std::stringstream text;
      text << in.rdbuf();
      apply_json_config(text.str(), cfg);
    }
    if (g.mesh_m->count()) cfg.mesh_m = mesh_m;
    if (g.mesh_file->count()) cfg.mesh_file = mesh_file;
    if (g.pattern->count()) cfg.pattern = parse_pattern(pattern);
    if (g.refinements->count()) cfg.refinements = parse_refinements(refinements);
    if (g.quad_order->count()) cfg.quad_order = quad_order;
    if (g.tol->count()) cfg.tol = tol;
    if (g.out->count()) cfg.out = out_path;
    if (g.seed->count()) cfg.seed = seed;
    if (g.oracle->count()) cfg.oracle = parse_on_off(oracle);
    if (g.target->count()) cfg.target = target;
    if (cfg.quad_order < kMinQuadratureOrder || cfg.quad_order > kMaxQuadratureOrder) {
      throw DomainError("quad_order outside [" + std::to_string(kMinQuadratureOrder) + ", " +
                        std::to_string(kMaxQuadratureOrder) + "]");
    }
    if (!(cfg.tol > 0)) throw DomainError("tol must be positive");
    if (!cfg.mesh_file && cfg.mesh_m && *cfg.mesh_m < 2) throw DomainError("--mesh-m must be >= 2 for the square");
    if (!cfg.mesh_file && !cfg.refinements.empty() && cfg.refinements.front() < 2) {
      throw DomainError("square refinements must be >= 2");
    }
    if (cfg.out) {
      file.open(*cfg.out);
      if (!file) throw DomainError("cannot open output file " + *cfg.out);
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  }
  std::ostream& sink = cfg.out ? static_cast<std::ostream&>(file) : out;

  try {
    if (cfg.command == "verify") return cmd_verify(cfg, sink, log);
    if (cfg.command == "interpolate") return cmd_interpolate(cfg, sink, log);
    if (cfg.command == "solve") return cmd_solve(cfg, sink, log);
    return cmd_basis(cfg, sink, log);
  } catch (const MeshError& e) {
    log << "mesh error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    log << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    if (!e.residuals().empty()) log << "last relative residual " << e.residuals().back() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace nchodge::cli
