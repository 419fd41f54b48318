#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "idde/criteria.hpp"
#include "idde/problem.hpp"
#include "idde/trajectory.hpp"

namespace idde {

enum class EmpiricalClass { EventuallyPositive, EventuallyNegative, Oscillatory, Undetermined };

const char* to_string(EmpiricalClass c);

struct EmpiricalVerdict {
  EmpiricalClass cls = EmpiricalClass::Undetermined;
  std::size_t sign_change_count = 0;  // after transient_cut
  std::optional<double> last_crossing;
  double transient_cut = 0.0;
};

/// Two or more sign changes after the cut are oscillatory, one is
/// undetermined, none leaves the sign of the last 10% of the span to decide.
EmpiricalVerdict classify(const Trajectory& traj, double transient_cut);

/// Trigonometric polynomials c0 + sum_{n=1..3} (a_n cos(n t) + b_n sin(n t))
/// with coefficients uniform in [-1, 1], drawn from one fixed-seed stream.
std::vector<ScalarFn> random_initial_functions(std::uint64_t seed, std::size_t count);

/// The same problem with phi replaced and x0 = phi(t0).
Problem with_initial_function(const Problem& problem, const ScalarFn& phi);

enum class Knob { CoefficientScale, DelayLag, ImpulseMultiplier, ImpulsePeriod };

/// coefficient_scale, delay_lag, impulse_multiplier or impulse_period.
/// Throws ConfigError otherwise.
Knob parse_knob(const std::string& name);
const char* to_string(Knob knob);

/// CoefficientScale multiplies every coefficient; DelayLag replaces every
/// delay by a constant lag; ImpulseMultiplier sets every B_j; ImpulsePeriod
/// replaces the schedule by t0 + n * value, n >= 1, keeping the first
/// multiplier of the template (B = 1 if it has none).
Problem apply_knob(const Problem& problem, Knob knob, double value);

struct SweepOptions {
  double horizon = 100.0;
  double step = 1e-3;
  std::size_t seeds = 5;
  std::uint64_t seed = 1;
  double transient_cut = 10.0;
  CertifyOptions certify;
};

struct SweepRow {
  double value = 0.0;
  Verdict certified = Verdict::Inconclusive;
  std::string certified_theorem;
  std::vector<EmpiricalVerdict> empirical;
};

/// One row per value, in input order.
std::vector<SweepRow> sweep(const Problem& problem, Knob knob, const std::vector<double>& values,
                            const SweepOptions& options);

/// Columns value,certified,certified_theorem,empirical_seed_1..N.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, std::size_t seeds);

}  // namespace idde
