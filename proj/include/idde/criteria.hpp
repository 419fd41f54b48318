#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "idde/problem.hpp"

namespace idde {

enum class Verdict { NonOscillationCertified, OscillationCertified, Inconclusive };

const char* to_string(Verdict v);

struct NamedValue {
  std::string name;
  double value = 0.0;
};

/// Outcome of one criterion. `theorem` is one of T1.3, T2.3, T3.1, T3.2,
/// T3.3, T4, T7, T8.1, T8.2, or the family tried (T3, T8, ...) when
/// inconclusive.
struct CriterionReport {
  Verdict verdict = Verdict::Inconclusive;
  std::string theorem;
  std::vector<NamedValue> evidence;
  std::vector<NamedValue> parameters;
  std::vector<std::string> notes;
  bool horizon_conditional = false;

  std::optional<double> evidence_value(const std::string& name) const;
  bool decisive() const { return verdict != Verdict::Inconclusive; }
};

/// Flat key=value lines.
std::string to_key_value(const CriterionReport& report);
/// id,theorem,verdict,evidence with evidence as name=value;name=value.
std::string csv_header();
std::string to_csv_row(const std::string& problem_id, const CriterionReport& report);

/// Piecewise linear function on ascending nodes.
struct GridFunction {
  std::vector<double> nodes;
  std::vector<double> values;

  double operator()(double t) const;
  /// Trapezoid integral of the interpolant over [a, b] within the node span.
  double integral(double a, double b) const;
};

struct InequalityOptions {
  std::size_t grid_n = 2000;  // cells on [t1, horizon]
  int max_iter = 200;
  double cap = 1e3;
  double tolerance = 1e-9;
};

enum class InequalityOutcome { Converged, Diverged, IterationLimit };

struct InequalityResult {
  InequalityOutcome outcome = InequalityOutcome::IterationLimit;
  GridFunction u;  // last iterate; a solution only when Converged
  int iterations = 0;
  double sup = 0.0;
  double last_change = 0.0;
  bool converged() const { return outcome == InequalityOutcome::Converged; }
};

using IterateObserver = std::function<void(int, const std::vector<double>&)>;

/// Least-fixed-point iteration for
///
///   u(t) = sum_k A_k^+(t) exp{ int_{h_k(t)}^t u } prod_{h_k(t) < tau_j <= t} B_j^{-1},  t >= t1,
///
/// from u_0 = 0 on a uniform grid. Windows are clamped below at t1.
/// Throws NonPositiveMultiplier, GridTooCoarse, InputError for grid_n < 100.
InequalityResult solve_inequality(const Problem& problem, double t1, double horizon,
                                  const InequalityOptions& options = {}, const IterateObserver& observer = {});

/// The same iteration for the equation without impulses. No product index
/// is built, the schedule is ignored.
InequalityResult solve_inequality_impulse_free(const Problem& problem, double t1, double horizon,
                                               const InequalityOptions& options = {},
                                               const IterateObserver& observer = {});

/// Converged iteration -> NonOscillationCertified (T1.3 when every sampled
/// A_k >= 0, T2.3 otherwise); anything else is Inconclusive.
CriterionReport report_inequality(const Problem& problem, double t1, double horizon,
                                  const InequalityOptions& options = {});

struct SlidingOptions {
  std::size_t grid_n = 4000;
  double tail_fraction = 0.5;
  double margin = 1e-6;
};

/// Explicit non-oscillation tests on [t0, horizon]. Throws NonPositiveMultiplier.
CriterionReport check_theorem3(const Problem& problem, double t0, double horizon,
                               const SlidingOptions& options = {});

/// Explicit oscillation tests with liminf/limsup estimated on the tail
/// [t0 + (1 - tail_fraction)(horizon - t0), horizon]. Inconclusive when a
/// coefficient is negative somewhere. Throws NonPositiveMultiplier.
CriterionReport check_theorem8(const Problem& problem, double horizon, const SlidingOptions& options = {});

struct CompareOptions {
  std::size_t samples = 2000;
  InequalityOptions inequality;
  SlidingOptions sliding;
};

/// Transfers a non-oscillation certificate from `problem` to `tilde`.
/// Throws HypothesisNotMet naming the first violated hypothesis.
CriterionReport compare(const Problem& problem, const Problem& tilde, double horizon,
                        const CompareOptions& options = {});

/// Base problem with constant coefficients sup A_k, constant lags sup(t - h_k)
/// and the same schedule, compared against `problem`.
CriterionReport compare_constant_bound(const Problem& problem, double horizon, const CompareOptions& options = {});

/// Base problem with the same impulse times and B_j = 1, compared against
/// `problem` (which needs B_j >= 1).
CriterionReport compare_without_impulses(const Problem& problem, double horizon,
                                         const CompareOptions& options = {});

struct CertifyOptions {
  std::optional<double> t1;  // defaults to the problem's t0
  InequalityOptions inequality;
  SlidingOptions sliding;
};

/// Removes impulses and runs the fixed-point iteration, then the oscillation
/// tests, on the impulse-free problem.
CriterionReport certify_via_equivalence(const Problem& problem, double horizon, const CertifyOptions& options = {});

struct Certification {
  CriterionReport headline;
  std::vector<CriterionReport> reports;
};

/// Runs the fixed-point iteration, Theorem 3, Theorem 8 and the equivalence
/// route. The headline is the first decisive report in the order T3, T8,
/// fixed point, T7. Throws InconsistentCertificates on contradictory verdicts.
Certification certify(const Problem& problem, double horizon, const CertifyOptions& options = {});

}  // namespace idde
