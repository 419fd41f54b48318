#pragma once

#include <vector>

#include "idde/problem.hpp"
#include "idde/trajectory.hpp"

namespace idde {

/// Additive term at an impulse: x(tau) = B x(tau - 0) + alpha. A time not in
/// the schedule acts as an impulse with B = 1.
struct JumpOffset {
  double time = 0.0;
  double alpha = 0.0;
};

/// Method-of-steps solution with fixed-step classical RK4.
///
/// The step grid is t0 + n*step with every impulse time in (t0, t_end]
/// inserted (or snapped onto a node closer than 1e-9*step). Delayed
/// arguments below t0 read phi, those in [t0, t_n] read the dense output
/// right-continuously, and those inside the current step (vanishing delays)
/// interpolate linearly between x_n and the stage state.
///
/// Throws StepTooLarge when a sampled positive lag is shorter than `step`
/// (vanishing lags only add a warning), NonFiniteState on overflow and
/// InputError for malformed problems or unordered impulses.
Trajectory solve(const Problem& problem, double t_end, double step,
                 const std::vector<JumpOffset>& offsets = {});

/// t -> X(t, s): the homogeneous solution started at s with value 1, zero
/// history and impulses only after s. Zero for t < s.
class FundamentalSlice {
 public:
  FundamentalSlice(double s, Trajectory traj) : s_(s), trajectory_(std::move(traj)) {}

  double operator()(double t) const { return t < s_ ? 0.0 : trajectory_.value(t); }
  double left_limit(double t) const { return t <= s_ ? (t == s_ ? 1.0 : 0.0) : trajectory_.left_limit(t); }
  double s() const { return s_; }
  const Trajectory& trajectory() const { return trajectory_; }

 private:
  double s_;
  Trajectory trajectory_;
};

FundamentalSlice fundamental(const Problem& problem, double s, double t_end, double step);

/// Fundamental slices for every s in `s_values`.
std::vector<FundamentalSlice> fundamental_grid(const Problem& problem, const std::vector<double>& s_values,
                                               double t_end, double step);

/// Variation-of-constants representation of the solution at t:
///
///   X(t,t0) x0 + int X(t,s) f(s) ds - sum_k int X(t,s) A_k(s) phi[h_k(s)] ds
///     + sum_{tau_j > t0} X(t,tau_j) alpha_j
///
/// with phi[h_k(s)] = 0 once h_k(s) > t0. Integrals use the composite
/// trapezoid rule over the slice abscissae in [t0, t] (plus t itself, where
/// X(t,t) = 1), split at impulse times where X(t, tau - 0) = B X(t, tau).
/// Throws MissingSlice when the slice at t0 or at an impulse time in (t0, t]
/// is absent.
double representation_eval(const Problem& problem, const std::vector<FundamentalSlice>& slices, double t,
                           const std::vector<JumpOffset>& alphas = {});

/// Times after t_from at which the solution changes sign. Crossings inside
/// segments are bisected on the dense output to 1e-10; a jump whose left and
/// right values have opposite signs is reported at the jump time.
std::vector<double> sign_changes(const Trajectory& traj, double t_from);

}  // namespace idde
