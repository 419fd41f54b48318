#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idde/functions.hpp"

namespace idde {

struct Impulse {
  double time = 0.0;
  double multiplier = 1.0;
};

/// Infinite tail of impulses at start, start + period, start + 2 period, ...
struct PeriodicTail {
  double start = 0.0;
  double period = 1.0;
  double multiplier = 1.0;
};

/// Prescribed impulse times with multipliers, x(tau) = B x(tau - 0).
///
/// Zero and non-finite multipliers are rejected at construction. Ordering of
/// the explicit list is not enforced here so that `validate` can report it;
/// every numerical consumer checks it before use.
class ImpulseSchedule {
 public:
  ImpulseSchedule() = default;
  explicit ImpulseSchedule(std::vector<Impulse> impulses, std::optional<PeriodicTail> tail = std::nullopt);

  static ImpulseSchedule periodic(double start, double period, double multiplier) {
    return ImpulseSchedule({}, PeriodicTail{start, period, multiplier});
  }

  /// All impulses with time <= horizon, explicit list first, then the tail.
  /// Tail times are start + n * period, so materializations to different
  /// horizons agree on their common range.
  std::vector<Impulse> materialize(double horizon) const;

  /// Index of the first impulse (in materialized order) whose time does not
  /// exceed its predecessor's, if any.
  std::optional<std::size_t> first_order_violation(double horizon) const;

  /// Throws InputError if materialization to horizon is not strictly increasing.
  void require_ordered(double horizon) const;

  /// Same times, every multiplier replaced.
  ImpulseSchedule with_multiplier(double multiplier) const;

  bool empty() const { return impulses_.empty() && !tail_; }
  const std::vector<Impulse>& explicit_impulses() const { return impulses_; }
  const std::optional<PeriodicTail>& tail() const { return tail_; }

 private:
  std::vector<Impulse> impulses_;
  std::optional<PeriodicTail> tail_;
};

struct Term {
  ScalarFn coefficient;
  DelayFn delay;
};

/// x'(t) + sum_k A_k(t) x[h_k(t)] = f(t), t >= t0, x(tau_j) = B_j x(tau_j - 0)
/// for tau_j > t0, x(t0) = x0, x(xi) = phi(xi) for xi < t0.
struct Problem {
  std::vector<Term> terms;
  ImpulseSchedule schedule;
  double t0 = 0.0;
  double x0 = 1.0;
  ScalarFn phi = ScalarFn::constant(0.0);
  ScalarFn forcing = ScalarFn::constant(0.0);
  // Known discontinuities of coefficients or forcing; the integrator puts a
  // node on each.
  std::vector<double> breakpoints;

  /// Throws InputError if there are no terms or t0/x0 are not finite.
  void require_well_formed() const;
};

enum class CheckStatus { Pass, Fail, NotFound };

struct HypothesisCheck {
  std::string id;  // "a1" .. "a5"
  CheckStatus status = CheckStatus::Pass;
  std::optional<std::pair<double, double>> witness;  // (t, offending value)
  std::string note;
};

struct ValidationReport {
  double horizon = 0.0;
  double history_start = 0.0;           // inf of delayed arguments, capped at t0
  std::optional<double> settle_time;    // s': h_k(t) >= t0 for all sampled t >= s'
  std::vector<HypothesisCheck> checks;

  const HypothesisCheck& check(const std::string& id) const;
  bool passed(const std::string& id) const { return check(id).status != CheckStatus::Fail; }
  bool all_passed() const;
};

/// Grid-sampled check of the standing hypotheses over [t0, horizon].
/// Failures are reported with a witness, never thrown.
ValidationReport validate(const Problem& problem, double horizon, std::size_t grid_points = 10000);

/// Smallest delayed argument over a sampled [t0, horizon], capped at t0.
double history_start(const Problem& problem, double horizon, std::size_t grid_points = 10000);

/// Replaces A_k by A_k^s (zero before s) and h_k by h_k^s (equal to s before s).
Problem cutoff(const Problem& problem, double s);

}  // namespace idde
