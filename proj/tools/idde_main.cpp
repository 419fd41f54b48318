// idde: simulate, certify, transform, sweep and verify from scenario files.
//
// Exit codes: 0 ok, 1 verification failure, 2 config or usage error,
// 3 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "idde/config.hpp"
#include "idde/criteria.hpp"
#include "idde/empirics.hpp"
#include "idde/error.hpp"
#include "idde/integrator.hpp"
#include "idde/transform.hpp"
#include "idde/verify.hpp"

namespace fs = std::filesystem;
using namespace idde;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

struct Globals {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
};

ScenarioConfig require_config(const Globals& g) {
  if (g.config.empty()) throw ConfigError("--config is required for this command");
  return load_config(g.config);
}

// Opens out/name for writing, creating the directory when needed.
std::ofstream open_output(const Globals& g, const std::string& name, std::string& path) {
  const fs::path p = fs::path(g.out) / name;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  path = p.string();
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  os << std::setprecision(17);
  return os;
}

int run_simulate(const Globals& g) {
  const ScenarioConfig c = require_config(g);
  const Trajectory traj = solve(c.to_problem(), c.run.horizon, c.run.step);
  for (const std::string& w : traj.warnings()) std::cerr << "warning: " << w << '\n';
  std::string path;
  std::ofstream os = open_output(g, c.output.trajectory, path);
  write_trajectory_csv(os, traj, c.output.stride);
  const double cut = c.transient_cut();
  std::cout << "final t=" << traj.t_end() << std::setprecision(17) << " x=" << traj.value(traj.t_end())
            << std::setprecision(6) << " sign_changes=" << sign_changes(traj, traj.t0()).size() << " after_t="
            << cut << ':' << sign_changes(traj, cut).size() << " jumps=" << traj.jumps().size() << " -> " << path
            << '\n';
  return kOk;
}

int run_certify(const Globals& g) {
  const ScenarioConfig c = require_config(g);
  const Certification cert = certify(c.to_problem(), c.run.horizon, c.certify_options());

  std::string report_path, csv_path;
  std::ofstream report = open_output(g, c.output.report, report_path);
  report << "# headline\n" << to_key_value(cert.headline);
  for (const CriterionReport& r : cert.reports) report << "\n# " << r.theorem << '\n' << to_key_value(r);

  std::ofstream csv = open_output(g, c.output.certificates, csv_path);
  const std::string id = fs::path(g.config).stem().string();
  csv << csv_header() << '\n';
  for (const CriterionReport& r : cert.reports) csv << to_csv_row(id, r) << '\n';

  std::cout << to_string(cert.headline.verdict) << ' ' << cert.headline.theorem
            << (cert.headline.horizon_conditional ? " (horizon-conditional)" : "") << '\n';
  for (const CriterionReport& r : cert.reports) std::cout << "  " << r.theorem << ": " << to_string(r.verdict) << '\n';
  std::cout << "reports -> " << report_path << ", " << csv_path << '\n';
  return kOk;
}

int run_transform(const Globals& g) {
  const ScenarioConfig c = require_config(g);
  const TransformedProblem tr = remove_impulses(c.to_problem(), c.run.horizon);
  std::string path;
  std::ofstream os = open_output(g, c.output.coefficients, path);
  write_coefficients_csv(os, tr, c.t0, c.run.horizon, c.output.samples);
  std::cout << c.terms.size() << " transformed coefficient(s), " << c.output.samples << " samples -> " << path
            << '\n';
  return kOk;
}

int run_sweep(const Globals& g) {
  const ScenarioConfig c = require_config(g);
  if (!c.sweep) throw ConfigError("sweep needs a [sweep] section");
  const Knob knob = parse_knob(c.sweep->parameter);
  SweepOptions o;
  o.horizon = c.run.horizon;
  o.step = c.run.step;
  o.seeds = c.sweep->seeds;
  o.seed = g.seed;
  o.transient_cut = c.transient_cut();
  o.certify = c.certify_options();
  const auto rows = sweep(c.to_problem(), knob, c.sweep->values, o);

  std::string path;
  std::ofstream os = open_output(g, c.output.sweep, path);
  write_sweep_csv(os, rows, o.seeds);
  std::cout << std::setprecision(17);
  for (const SweepRow& row : rows) {
    std::cout << to_string(knob) << '=' << row.value << ' ' << to_string(row.certified) << ' '
              << row.certified_theorem;
    for (const EmpiricalVerdict& e : row.empirical) std::cout << ' ' << to_string(e.cls);
    std::cout << '\n';
  }
  std::cout << rows.size() << " row(s) -> " << path << '\n';
  return kOk;
}

int run_verify(const Globals& g, const std::string& suite) {
  bool ok = true;
  const bool all = suite == "all";
  for (const std::string& name : all ? suite_names() : std::vector<std::string>{suite}) {
    const SuiteResult r = run_suite(name, g.seed);
    write_suite(std::cout, r);
    ok = ok && r.passed();
  }
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Impulsive delay differential equations: simulation, transform and oscillation certificates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Scenario file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory (default: current)");
  app.add_option("--seed", g.seed, "Seed for random initial functions and property suites (default 1)");

  auto* simulate = app.add_subcommand("simulate", "Integrate the scenario and write the trajectory CSV");
  auto* certify_cmd = app.add_subcommand("certify", "Run every criterion and write the reports");
  auto* transform = app.add_subcommand("transform", "Write the coefficients of the impulse-free equation");
  auto* sweep_cmd = app.add_subcommand("sweep", "Certify and simulate across the [sweep] values");
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  std::string suite;
  verify->add_option("suite", suite, "lemma1, transform-equivalence, threshold, comparison, corollary2, positivity or all")
      ->required();
  for (CLI::App* sub : {simulate, certify_cmd, transform, sweep_cmd, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(g);
    if (certify_cmd->parsed()) return run_certify(g);
    if (transform->parsed()) return run_transform(g);
    if (sweep_cmd->parsed()) return run_sweep(g);
    return run_verify(g, suite);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const InconsistentCertificates& e) {
    std::cerr << "inconsistent certificates: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}
