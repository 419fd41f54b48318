#include "idde/impulse_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "idde/error.hpp"

namespace idde {

ImpulseProductIndex::ImpulseProductIndex(const ImpulseSchedule& schedule, double horizon)
    : horizon_(horizon) {
  schedule.require_ordered(horizon);
  build(schedule.materialize(horizon));
}

ImpulseProductIndex::ImpulseProductIndex(const ImpulseSchedule& schedule, double horizon, double after)
    : horizon_(horizon) {
  schedule.require_ordered(horizon);
  auto imps = schedule.materialize(horizon);
  std::erase_if(imps, [after](const Impulse& imp) { return imp.time <= after; });
  build(std::move(imps));
}

void ImpulseProductIndex::build(std::vector<Impulse> impulses) {
  times_.reserve(impulses.size());
  multipliers_.reserve(impulses.size());
  prefix_log_abs_.reserve(impulses.size() + 1);
  prefix_sign_flips_.reserve(impulses.size() + 1);
  prefix_log_small_.reserve(impulses.size() + 1);
  for (const Impulse& imp : impulses) {
    times_.push_back(imp.time);
    multipliers_.push_back(imp.multiplier);
    const double b = imp.multiplier;
    prefix_log_abs_.push_back(prefix_log_abs_.back() + std::log(std::fabs(b)));
    prefix_sign_flips_.push_back(prefix_sign_flips_.back() + (b < 0.0 ? 1 : 0));
    prefix_log_small_.push_back(prefix_log_small_.back() + (b > 0.0 && b < 1.0 ? std::log(b) : 0.0));
  }
}

std::pair<std::size_t, std::size_t> ImpulseProductIndex::window(double a, double b) const {
  if (b > horizon_) throw HorizonExceeded(b, horizon_);
  if (a > b) throw std::invalid_argument("window requires a <= b");
  // Prefix positions: number of impulses with time <= a, and <= b.
  const auto lo = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), a) - times_.begin());
  const auto hi = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), b) - times_.begin());
  return {lo, hi};
}

double ImpulseProductIndex::log_abs(std::size_t lo, std::size_t hi) const {
  return prefix_log_abs_[hi] - prefix_log_abs_[lo];
}

double ImpulseProductIndex::product(double a, double b) const {
  const auto [lo, hi] = window(a, b);
  if (lo == hi) return 1.0;
  const double sign = (prefix_sign_flips_[hi] - prefix_sign_flips_[lo]) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::exp(log_abs(lo, hi));
}

double ImpulseProductIndex::inverse_product(double a, double b) const {
  const auto [lo, hi] = window(a, b);
  if (lo == hi) return 1.0;
  const double sign = (prefix_sign_flips_[hi] - prefix_sign_flips_[lo]) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::exp(-log_abs(lo, hi));
}

double ImpulseProductIndex::log_sum_small_multipliers(double a, double b) const {
  const auto [lo, hi] = window(a, b);
  if (prefix_sign_flips_[hi] != prefix_sign_flips_[lo]) {
    for (std::size_t j = lo; j < hi; ++j)
      if (multipliers_[j] < 0.0) throw NonPositiveMultiplier(times_[j], multipliers_[j]);
  }
  return prefix_log_small_[hi] - prefix_log_small_[lo];
}

std::size_t ImpulseProductIndex::count(double a, double b) const {
  const auto [lo, hi] = window(a, b);
  return hi - lo;
}

std::size_t ImpulseProductIndex::sign_flips(double a, double b) const {
  const auto [lo, hi] = window(a, b);
  return prefix_sign_flips_[hi] - prefix_sign_flips_[lo];
}

double ImpulseProductIndex::snap_lower(double a) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), a);
  if (it != times_.end() && *it - a <= 1e-13 * (1.0 + std::fabs(a))) return *it;
  return a;
}

}  // namespace idde
