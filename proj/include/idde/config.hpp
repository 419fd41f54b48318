#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "idde/criteria.hpp"
#include "idde/problem.hpp"

namespace idde {

/// One delay term as written in a scenario: exactly one of lag, factor or
/// an expression for h(t).
struct TermSpec {
  enum class Delay { Lag, Proportional, Expression };
  std::string coefficient = "0";
  Delay delay = Delay::Lag;
  double value = 0.0;       // lag or factor
  std::string expression;   // h(t) when delay == Expression
};

struct ScheduleSpec {
  std::vector<double> times;
  std::vector<double> multipliers;
  std::optional<PeriodicTail> tail;
};

struct RunSpec {
  double horizon = 10.0;
  double step = 1e-3;
  std::size_t grid_n = 2000;
  int max_iter = 200;
  double cap = 1e3;
  double tail_fraction = 0.5;
  double margin = 1e-6;
  std::optional<double> transient_cut;  // default: 10% into the span
  std::optional<double> t1;
};

struct OutputSpec {
  std::string trajectory = "trajectory.csv";
  std::string report = "report.txt";
  std::string certificates = "certificates.csv";
  std::string coefficients = "coefficients.csv";
  std::string sweep = "sweep.csv";
  std::size_t stride = 1;     // trajectory rows
  std::size_t samples = 201;  // coefficient rows
};

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  std::size_t seeds = 5;
};

/// A scenario file:
///
///   [problem]   t0, x0, phi, forcing
///   [term.N]    coefficient and one of lag / factor / delay, N = 1, 2, ...
///   [schedule]  times, multipliers, tail_start, tail_period, tail_multiplier
///   [run]       horizon, step, grid_n, max_iter, cap, tail_fraction, margin,
///               transient_cut, t1
///   [output]    trajectory, report, certificates, coefficients, sweep, stride,
///               samples
///   [sweep]     parameter, values, seeds
///
/// Expressions are double-quoted strings, lists are comma separated.
struct ScenarioConfig {
  double t0 = 0.0;
  double x0 = 1.0;
  std::string phi = "0";
  std::string forcing = "0";
  std::vector<TermSpec> terms;
  ScheduleSpec schedule;
  RunSpec run;
  OutputSpec output;
  std::optional<SweepSpec> sweep;

  Problem to_problem() const;
  CertifyOptions certify_options() const;
  double transient_cut() const;
};

/// Parses, builds the problem and validates it on [t0, horizon]. Throws
/// ConfigError for structural problems, bad expressions (the message keeps
/// the byte offset) and failed hypotheses a1-a4.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Text that parses back to the same scenario. Numbers carry 17 digits.
std::string serialize(const ScenarioConfig& config);

}  // namespace idde
