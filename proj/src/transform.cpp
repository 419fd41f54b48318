#include "idde/transform.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "idde/error.hpp"

namespace idde {
namespace {

void require_positive(const ImpulseSchedule& schedule, double horizon) {
  for (const Impulse& imp : schedule.materialize(horizon))
    if (!(imp.multiplier > 0.0)) throw NonPositiveMultiplier(imp.time, imp.multiplier);
}

}  // namespace

TransformedProblem remove_impulses(const Problem& problem, double horizon, std::optional<double> cutoff_point) {
  problem.require_well_formed();
  require_positive(problem.schedule, horizon);
  const double c = cutoff_point.value_or(problem.t0);
  auto index = std::make_shared<const ImpulseProductIndex>(problem.schedule, horizon, c);

  TransformedProblem out;
  out.provenance = problem;
  out.cutoff_point = c;
  out.horizon = horizon;
  out.product_index = index;
  out.base = problem;
  out.base.schedule = ImpulseSchedule{};
  for (Term& term : out.base.terms) {
    const ScalarFn a = term.coefficient;
    const DelayFn h = term.delay;
    term.coefficient = ScalarFn::derived(
        [a, h, index](double t) {
          const double coeff = a(t);
          if (coeff == 0.0) return 0.0;
          return coeff * index->inverse_product(std::min(index->snap_lower(h.unchecked(t)), t), t);
        },
        "transformed " + a.family());
  }
  const ScalarFn f = problem.forcing;
  out.base.forcing = ScalarFn::derived(
      [f, index, c](double t) {
        const double v = f(t);
        return v == 0.0 || t <= c ? v : v * index->inverse_product(c, t);
      },
      "transformed " + f.family());

  // The new coefficients jump when an impulse enters or leaves a window.
  // Exits are known in closed form for constant and proportional delays.
  std::vector<double>& bp = out.base.breakpoints;
  for (double tau : index->times()) {
    bp.push_back(tau);
    for (const Term& term : problem.terms) {
      if (const auto* lag = std::get_if<DelayFn::ConstantLag>(&term.delay.rep()))
        bp.push_back(tau + lag->lag);
      else if (const auto* prop = std::get_if<DelayFn::Proportional>(&term.delay.rep()))
        bp.push_back(tau / prop->factor);
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return out;
}

Trajectory conjugate(const Trajectory& traj, const ImpulseSchedule& schedule) {
  require_positive(schedule, traj.t_end());
  const ImpulseProductIndex index(schedule, traj.t_end(), traj.t0());
  const TrajectoryData& in = traj.data();
  TrajectoryData out;
  out.nodes = in.nodes;
  out.warnings = in.warnings;
  const std::size_t n = in.nodes.size();
  out.left.resize(n);
  out.right.resize(n);
  out.dleft.resize(n);
  out.dright.resize(n);
  const double t0 = in.nodes.front();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = in.nodes[i];
    const double right_scale = index.inverse_product(t0, t);
    // The left limit excludes an impulse exactly at t.
    double left_scale = right_scale;
    const auto it = std::lower_bound(index.times().begin(), index.times().end(), t);
    if (it != index.times().end() && *it == t)
      left_scale *= index.multipliers()[static_cast<std::size_t>(it - index.times().begin())];
    out.right[i] = in.right[i] * right_scale;
    out.dright[i] = in.dright[i] * right_scale;
    out.left[i] = in.left[i] * left_scale;
    out.dleft[i] = in.dleft[i] * left_scale;
  }
  return Trajectory(std::move(out));
}

void write_coefficients_csv(std::ostream& os, const TransformedProblem& transformed, double from, double to,
                            std::size_t samples) {
  samples = std::max<std::size_t>(samples, 2);
  const auto& terms = transformed.base.terms;
  os << 't';
  for (std::size_t k = 0; k < terms.size(); ++k) os << ",a_" << k + 1;
  os << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = from + (to - from) * static_cast<double>(i) / static_cast<double>(samples - 1);
    os << t;
    for (const Term& term : terms) os << ',' << term.coefficient(t);
    os << '\n';
  }
}

}  // namespace idde
