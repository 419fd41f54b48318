#pragma once

#include <iosfwd>
#include <memory>
#include <optional>

#include "idde/impulse_index.hpp"
#include "idde/problem.hpp"
#include "idde/trajectory.hpp"

namespace idde {

/// Impulse-free equation equivalent to an impulsive one:
///
///   y'(t) + sum_k A_k(t) prod_{h_k(t) < tau_j <= t} B_j^{-1} y[h_k(t)] = f(t) prod_{c < tau_j <= t} B_j^{-1}
///
/// where only impulses after the cutoff point c (default t0) take part.
/// Coefficients are closures over the shared product index and are valid on
/// (-inf, horizon].
struct TransformedProblem {
  Problem base;
  Problem provenance;
  std::shared_ptr<const ImpulseProductIndex> product_index;
  double cutoff_point = 0.0;
  double horizon = 0.0;
};

/// Throws NonPositiveMultiplier if any B_j <= 0 up to the horizon.
TransformedProblem remove_impulses(const Problem& problem, double horizon,
                                   std::optional<double> cutoff_point = std::nullopt);

/// y(t) = x(t) prod_{t0 < tau_j <= t} B_j^{-1} on the trajectory's nodes and
/// dense output. The result has no jumps. Throws NonPositiveMultiplier.
Trajectory conjugate(const Trajectory& traj, const ImpulseSchedule& schedule);

/// CSV with columns t,a_1,...,a_m sampled at `samples` evenly spaced points
/// of [from, to].
void write_coefficients_csv(std::ostream& os, const TransformedProblem& transformed, double from, double to,
                            std::size_t samples);

}  // namespace idde
