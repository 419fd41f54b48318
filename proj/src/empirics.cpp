#include "idde/empirics.hpp"

#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "idde/error.hpp"
#include "idde/integrator.hpp"

namespace idde {

const char* to_string(EmpiricalClass c) {
  switch (c) {
    case EmpiricalClass::EventuallyPositive:
      return "EventuallyPositive";
    case EmpiricalClass::EventuallyNegative:
      return "EventuallyNegative";
    case EmpiricalClass::Oscillatory:
      return "Oscillatory";
    case EmpiricalClass::Undetermined:
      break;
  }
  return "Undetermined";
}

EmpiricalVerdict classify(const Trajectory& traj, double transient_cut) {
  EmpiricalVerdict v;
  v.transient_cut = transient_cut;
  const std::vector<double> crossings = sign_changes(traj, transient_cut);
  v.sign_change_count = crossings.size();
  if (!crossings.empty()) v.last_crossing = crossings.back();
  if (crossings.size() >= 2) {
    v.cls = EmpiricalClass::Oscillatory;
    return v;
  }
  if (crossings.size() == 1) return v;

  const double tail_start = traj.t_end() - 0.1 * (traj.t_end() - traj.t0());
  bool positive = true, negative = true;
  const auto& nodes = traj.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < tail_start) continue;
    for (double x : {traj.left_values()[i], traj.right_values()[i]}) {
      positive = positive && x > 0.0;
      negative = negative && x < 0.0;
    }
  }
  if (positive) v.cls = EmpiricalClass::EventuallyPositive;
  if (negative) v.cls = EmpiricalClass::EventuallyNegative;
  return v;
}

std::vector<ScalarFn> random_initial_functions(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<ScalarFn> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::ostringstream os;
    os << std::setprecision(17) << coef(rng);
    for (int n = 1; n <= 3; ++n) {
      const double a = coef(rng);
      const double b = coef(rng);
      os << " + " << a << "*cos(" << n << "*t) + " << b << "*sin(" << n << "*t)";
    }
    out.push_back(ScalarFn::parse(os.str()));
  }
  return out;
}

Problem with_initial_function(const Problem& problem, const ScalarFn& phi) {
  Problem p = problem;
  p.phi = phi;
  p.x0 = phi(problem.t0);
  return p;
}

Knob parse_knob(const std::string& name) {
  if (name == "coefficient_scale") return Knob::CoefficientScale;
  if (name == "delay_lag") return Knob::DelayLag;
  if (name == "impulse_multiplier") return Knob::ImpulseMultiplier;
  if (name == "impulse_period") return Knob::ImpulsePeriod;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

const char* to_string(Knob knob) {
  switch (knob) {
    case Knob::CoefficientScale:
      return "coefficient_scale";
    case Knob::DelayLag:
      return "delay_lag";
    case Knob::ImpulseMultiplier:
      return "impulse_multiplier";
    case Knob::ImpulsePeriod:
      break;
  }
  return "impulse_period";
}

Problem apply_knob(const Problem& problem, Knob knob, double value) {
  Problem p = problem;
  switch (knob) {
    case Knob::CoefficientScale:
      for (Term& term : p.terms) term.coefficient = term.coefficient.scaled(value);
      break;
    case Knob::DelayLag:
      for (Term& term : p.terms) term.delay = DelayFn::constant_lag(value);
      break;
    case Knob::ImpulseMultiplier:
      p.schedule = problem.schedule.with_multiplier(value);
      break;
    case Knob::ImpulsePeriod: {
      double b = 1.0;
      if (!problem.schedule.explicit_impulses().empty())
        b = problem.schedule.explicit_impulses().front().multiplier;
      else if (problem.schedule.tail())
        b = problem.schedule.tail()->multiplier;
      p.schedule = ImpulseSchedule::periodic(problem.t0 + value, value, b);
      break;
    }
  }
  return p;
}

std::vector<SweepRow> sweep(const Problem& problem, Knob knob, const std::vector<double>& values,
                            const SweepOptions& options) {
  const std::vector<ScalarFn> initial = random_initial_functions(options.seed, options.seeds);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double value : values) {
    const Problem p = apply_knob(problem, knob, value);
    SweepRow row;
    row.value = value;
    const Certification c = certify(p, options.horizon, options.certify);
    row.certified = c.headline.verdict;
    row.certified_theorem = c.headline.theorem;
    for (const ScalarFn& phi : initial)
      row.empirical.push_back(
          classify(solve(with_initial_function(p, phi), options.horizon, options.step), options.transient_cut));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, std::size_t seeds) {
  os << "value,certified,certified_theorem";
  for (std::size_t i = 1; i <= seeds; ++i) os << ",empirical_seed_" << i;
  os << '\n' << std::setprecision(17);
  for (const SweepRow& row : rows) {
    os << row.value << ',' << to_string(row.certified) << ',' << row.certified_theorem;
    for (const EmpiricalVerdict& v : row.empirical) os << ',' << to_string(v.cls);
    os << '\n';
  }
}

}  // namespace idde
