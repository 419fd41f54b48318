#pragma once

#include <cstddef>
#include <vector>

#include "idde/problem.hpp"

namespace idde {

/// Range queries over a materialized impulse schedule.
///
/// All windows are half-open, (a, b]: an impulse at a is excluded, one at b
/// is included. Products are assembled from prefix sums of ln|B_j| and a
/// prefix count of negative multipliers, so long windows neither overflow
/// nor underflow before the final exponentiation.
class ImpulseProductIndex {
 public:
  ImpulseProductIndex() = default;

  /// Materializes `schedule` up to `horizon`. Throws InputError when the
  /// materialized times are not strictly increasing.
  ImpulseProductIndex(const ImpulseSchedule& schedule, double horizon);

  /// Keeps only impulses with time > after.
  ImpulseProductIndex(const ImpulseSchedule& schedule, double horizon, double after);

  /// prod B_j over a < tau_j <= b. Throws HorizonExceeded if b > horizon.
  double product(double a, double b) const;
  /// prod 1/B_j over the same window.
  double inverse_product(double a, double b) const;
  /// Sum of ln B_j over impulses in (a, b] with B_j < 1.
  /// Throws NonPositiveMultiplier if the window holds a negative multiplier.
  double log_sum_small_multipliers(double a, double b) const;
  std::size_t count(double a, double b) const;
  /// Number of negative multipliers in (a, b].
  std::size_t sign_flips(double a, double b) const;

  /// The first impulse time in [a, a + 1e-13 (1 + |a|)], else a. Window
  /// bounds computed as h(t) pass through this so round-off cannot move an
  /// impulse that sits on the bound back into the window.
  double snap_lower(double a) const;

  double horizon() const { return horizon_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& multipliers() const { return multipliers_; }
  bool all_positive() const { return prefix_sign_flips_.back() == 0; }

 private:
  void build(std::vector<Impulse> impulses);
  std::pair<std::size_t, std::size_t> window(double a, double b) const;
  double log_abs(std::size_t lo, std::size_t hi) const;

  std::vector<double> times_;
  std::vector<double> multipliers_;
  std::vector<double> prefix_log_abs_{0.0};
  std::vector<std::size_t> prefix_sign_flips_{0};
  std::vector<double> prefix_log_small_{0.0};
  double horizon_ = 0.0;
};

}  // namespace idde
