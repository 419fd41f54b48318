#include "idde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "idde/criteria.hpp"
#include "idde/empirics.hpp"
#include "idde/error.hpp"
#include "idde/impulse_index.hpp"
#include "idde/integrator.hpp"
#include "idde/transform.hpp"

namespace idde {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

// Times are whole hundredths, built by one division so that every module
// computing the same tick gets the same double.
double tick(int k) { return k / 100.0; }

ScalarFn random_sinusoid(Rng& rng, double amp_lo, double amp_hi, double off_lo, double off_hi) {
  const double amplitude = uniform(rng, amp_lo, amp_hi);
  const double omega = uniform(rng, 0.5, 2.5);
  const double phase = uniform(rng, 0.0, std::numbers::pi);
  return ScalarFn::sinusoid(amplitude, omega, phase, uniform(rng, off_lo, off_hi));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string format17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

PropertyResult at_most(std::string name, double measured, double bound, std::string detail = {}) {
  return {std::move(name), measured <= bound, measured, bound, std::move(detail)};
}

PropertyResult at_least(std::string name, double measured, double bound, std::string detail = {}) {
  return {std::move(name), measured >= bound, measured, bound, std::move(detail)};
}

PropertyResult holds(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)};
}

struct Lemma1Case {
  Problem problem;
  int horizon_ticks = 0;
  std::vector<JumpOffset> alphas;
};

Lemma1Case random_lemma1_case(Rng& rng) {
  Lemma1Case c;
  c.horizon_ticks = 100 * uniform_int(rng, 3, 5);
  Problem& p = c.problem;
  const int m = uniform_int(rng, 1, 2);
  for (int k = 0; k < m; ++k) {
    const double lag = tick(50 * uniform_int(rng, 1, 3));
    ScalarFn a = uniform_int(rng, 0, 1) == 0 ? ScalarFn::constant(uniform(rng, -0.5, 1.0))
                                             : random_sinusoid(rng, 0.1, 0.5, -0.2, 0.6);
    p.terms.push_back({a, DelayFn::constant_lag(lag)});
  }
  p.x0 = uniform(rng, -1.0, 1.0);
  p.phi = random_sinusoid(rng, 0.2, 1.0, -0.5, 0.5);
  p.forcing = random_sinusoid(rng, 0.2, 1.0, -0.5, 0.5);

  std::set<int> ticks;
  const int count = uniform_int(rng, 1, 4);
  while (static_cast<int>(ticks.size()) < count) ticks.insert(5 * uniform_int(rng, 1, c.horizon_ticks / 5 - 1));
  std::vector<Impulse> impulses;
  for (int k : ticks) {
    double b = 0.0;
    while (std::fabs(b) < 0.2) b = uniform(rng, -1.5, 2.0);
    impulses.push_back({tick(k), b});
  }
  p.schedule = ImpulseSchedule(impulses);
  c.alphas.push_back({tick(5 * uniform_int(rng, 1, c.horizon_ticks / 5 - 1)), uniform(rng, -1.0, 1.0)});
  return c;
}

Problem unit_lag(double a) {
  Problem p;
  p.terms.push_back({ScalarFn::constant(a), DelayFn::constant_lag(1.0)});
  p.phi = ScalarFn::constant(1.0);
  return p;
}

std::size_t count_oscillatory(const std::vector<EmpiricalVerdict>& verdicts) {
  return static_cast<std::size_t>(std::count_if(verdicts.begin(), verdicts.end(), [](const EmpiricalVerdict& v) {
    return v.cls == EmpiricalClass::Oscillatory;
  }));
}

std::vector<EmpiricalVerdict> simulate_seeds(const Problem& p, double horizon, double cut, std::uint64_t seed,
                                             std::size_t count) {
  std::vector<EmpiricalVerdict> out;
  for (const ScalarFn& phi : random_initial_functions(seed, count))
    out.push_back(classify(solve(with_initial_function(p, phi), horizon, 1e-3), cut));
  return out;
}

// Conjugation against direct simulation for one problem.
void equivalence_properties(SuiteResult& out, const std::string& label, const Problem& p, double horizon,
                            double count_from, bool compare_direct_counts) {
  const Trajectory x = solve(p, horizon, 1e-3);
  const Trajectory y = conjugate(x, p.schedule);
  const Trajectory direct = solve(remove_impulses(p, horizon).base, horizon, 1e-3);
  double sup = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = y.nodes()[i];
    sup = std::max({sup, std::fabs(y.right_values()[i] - direct(t)), std::fabs(y.left_values()[i] - direct.left_limit(t))});
  }
  double continuity = 0.0;
  for (const Jump& j : x.jumps())
    continuity = std::max(continuity, std::fabs(y.left_limit(j.time) - y(j.time)) / (1.0 + std::fabs(y(j.time))));
  out.properties.push_back(at_most(label + " sup-norm conjugated vs direct", sup, 1e-4));
  out.properties.push_back(at_most(label + " continuity at impulses", continuity, 1e-10));
  const double nx = static_cast<double>(sign_changes(x, count_from).size());
  const double ny = static_cast<double>(sign_changes(y, count_from).size());
  out.properties.push_back(holds(label + " sign changes of x and y agree", nx == ny, fmt(nx) + " vs " + fmt(ny)));
  if (compare_direct_counts) {
    const double nd = static_cast<double>(sign_changes(direct, count_from).size());
    out.properties.push_back(
        holds(label + " sign changes of y and direct agree", ny == nd, fmt(ny) + " vs " + fmt(nd)));
  }
}

Problem periodic_unit_lag(double a, double b) {
  Problem p = unit_lag(a);
  p.schedule = ImpulseSchedule::periodic(1.0, 1.0, b);
  return p;
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma1",     "transform-equivalence", "threshold",
                                              "comparison", "corollary2",            "positivity"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "lemma1") return verify_lemma1(seed);
  if (name == "transform-equivalence") return verify_transform_equivalence(seed);
  if (name == "threshold") return verify_threshold(seed);
  if (name == "comparison") return verify_comparison(seed);
  if (name == "corollary2") return verify_corollary2(seed);
  if (name == "positivity") return verify_positivity(seed);
  throw ConfigError("unknown suite '" + name + "'");
}

SuiteResult verify_lemma1(std::uint64_t seed, std::size_t problems, std::size_t samples) {
  SuiteResult out{"lemma1", {}};
  Rng rng(seed);
  for (std::size_t n = 0; n < problems; ++n) {
    const Lemma1Case c = random_lemma1_case(rng);
    const double horizon = tick(c.horizon_ticks);
    std::vector<double> s_values;
    for (int k = 0; k <= c.horizon_ticks; ++k) s_values.push_back(tick(k));
    const auto slices = fundamental_grid(c.problem, s_values, horizon, 1e-3);
    const Trajectory x = solve(c.problem, horizon, 1e-3, c.alphas);
    double worst = 0.0, worst_t = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double t = uniform(rng, 0.01, horizon);
      const double direct = x(t);
      const double residual = std::fabs(representation_eval(c.problem, slices, t, c.alphas) - direct) /
                              (1.0 + std::fabs(direct));
      if (residual > worst) worst = residual, worst_t = t;
    }
    out.properties.push_back(at_most("problem " + std::to_string(n + 1) + " relative residual", worst, 1e-4,
                                     "worst at t=" + fmt(worst_t) + ", terms=" +
                                         std::to_string(c.problem.terms.size()) + ", horizon=" + fmt(horizon)));
  }
  return out;
}

SuiteResult verify_transform_equivalence(std::uint64_t seed) {
  SuiteResult out{"transform-equivalence", {}};
  {
    Problem p = unit_lag(1.0);
    std::vector<Impulse> imps;
    for (int j = 1; j <= 20; ++j) imps.push_back({static_cast<double>(j), 2.0});
    p.schedule = ImpulseSchedule(imps);
    equivalence_properties(out, "doubling", p, 20.0, 2.0, true);
  }
  Rng rng(seed);
  for (int n = 1; n <= 4; ++n) {
    Problem p;
    const int m = uniform_int(rng, 1, 2);
    for (int k = 0; k < m; ++k) {
      const DelayFn h = uniform_int(rng, 0, 2) == 0 ? DelayFn::proportional(uniform(rng, 0.5, 0.9))
                                                    : DelayFn::constant_lag(uniform(rng, 0.3, 2.0));
      p.terms.push_back({random_sinusoid(rng, 0.0, 0.4, 0.1, 0.8), h});
    }
    p.phi = random_sinusoid(rng, 0.2, 1.0, -0.5, 1.0);
    p.x0 = p.phi(0.0);
    const double horizon = uniform(rng, 8.0, 20.0);
    std::vector<Impulse> imps;
    double t = 0.0;
    const int count = uniform_int(rng, 1, 10);
    for (int j = 0; j < count; ++j) {
      t += uniform(rng, 0.2, horizon / count);
      if (t >= horizon) break;
      imps.push_back({t, uniform(rng, 0.3, 3.0)});
    }
    p.schedule = ImpulseSchedule(imps);
    equivalence_properties(out, "random " + std::to_string(n), p, horizon, 1.0, false);
  }
  return out;
}

SuiteResult verify_threshold(std::uint64_t seed) {
  SuiteResult out{"threshold", {}};
  const double horizon = 200.0;
  for (double a : {0.30, 0.40}) {
    const bool below = a < 0.35;
    const Problem p = unit_lag(a);
    const Certification c = certify(p, horizon);
    const Verdict expected = below ? Verdict::NonOscillationCertified : Verdict::OscillationCertified;
    out.properties.push_back(holds("A=" + fmt(a) + " certified " + to_string(expected), c.headline.verdict == expected,
                                   "headline " + c.headline.theorem + " " + to_string(c.headline.verdict)));
    const auto verdicts = simulate_seeds(p, horizon, below ? 10.0 : 0.0, seed, 5);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      const double n = static_cast<double>(verdicts[i].sign_change_count);
      const std::string name = "A=" + fmt(a) + " seed " + std::to_string(i + 1) + " sign changes";
      out.properties.push_back(below ? at_most(name + " on [10, 200]", n, 0.0) : at_least(name + " on [0, 200]", n, 10.0));
    }
  }
  return out;
}

SuiteResult verify_comparison(std::uint64_t seed) {
  SuiteResult out{"comparison", {}};
  const double horizon = 30.0;
  const Problem base = periodic_unit_lag(0.3, 1.0);
  {
    const CriterionReport r = compare(base, periodic_unit_lag(0.2, 1.0), horizon);
    out.properties.push_back(holds("A~=0.2 receives T4", r.verdict == Verdict::NonOscillationCertified && r.theorem == "T4",
                                   r.theorem + " " + to_string(r.verdict)));
  }
  {
    bool thrown = false, witnessed = false;
    try {
      compare(base, periodic_unit_lag(0.4, 1.0), horizon);
    } catch (const HypothesisNotMet& e) {
      thrown = true;
      witnessed = e.witness_t().has_value();
    }
    out.properties.push_back(holds("A~=0.4 > A rejected with a witness", thrown && witnessed));
  }
  Rng rng(seed);
  for (int n = 1; n <= 3; ++n) {
    const double a = uniform(rng, 0.15, 0.3);
    const double lag = uniform(rng, 0.5, 1.2);
    const double period = uniform(rng, 0.5, 1.5);
    const double b = uniform(rng, 0.9, 1.0);
    Problem p;
    p.terms.push_back({ScalarFn::constant(a), DelayFn::constant_lag(lag)});
    p.phi = ScalarFn::constant(1.0);
    p.schedule = ImpulseSchedule::periodic(period, period, b);
    Problem tilde = p;
    // Oscillates between a/2 and a.
    const std::string s = "sin(" + fmt(uniform(rng, 0.5, 2.0)) + "*t)";
    tilde.terms[0].coefficient = ScalarFn::parse(format17(a) + "*(0.5 + 0.5*" + s + "*" + s + ")");
    tilde.terms[0].delay = DelayFn::constant_lag(lag * uniform(rng, 0.5, 1.0));
    tilde.schedule = p.schedule.with_multiplier(uniform(rng, b, 1.0));
    const std::string label = "random " + std::to_string(n);
    const CriterionReport r = compare(p, tilde, horizon);
    const bool certified = r.verdict == Verdict::NonOscillationCertified;
    out.properties.push_back(holds(label + " transfer", certified, r.notes.empty() ? "" : r.notes.front()));
    if (certified) {
      const auto verdicts = simulate_seeds(tilde, horizon, 5.0, seed + n, 3);
      out.properties.push_back(at_most(label + " comparison problem oscillatory seeds", count_oscillatory(verdicts),
                                       2.0));
      const double own = static_cast<double>(classify(solve(tilde, horizon, 1e-3), 5.0).sign_change_count);
      out.properties.push_back(at_most(label + " comparison problem sign changes after cut", own, 1.0));
    }
  }
  return out;
}

SuiteResult verify_corollary2(std::uint64_t seed) {
  SuiteResult out{"corollary2", {}};
  Rng rng(seed);
  const double horizon = 60.0;
  for (int n = 1; n <= 4; ++n) {
    Problem p;
    p.terms.push_back({ScalarFn::constant(uniform(rng, 0.05, 0.3)), DelayFn::constant_lag(uniform(rng, 0.5, 1.2))});
    p.phi = ScalarFn::constant(1.0);
    const double period = uniform(rng, 0.4, 2.0);
    p.schedule = ImpulseSchedule::periodic(period, period, uniform(rng, 1.0, 3.0));
    const std::string label = "random " + std::to_string(n);

    Problem plain = p;
    plain.schedule = ImpulseSchedule{};
    const auto before = simulate_seeds(plain, horizon, 10.0, seed + n, 3);
    out.properties.push_back(at_most(label + " impulse-free oscillatory seeds", count_oscillatory(before), 0.0));

    const CriterionReport r = compare_without_impulses(p, horizon);
    out.properties.push_back(holds(label + " certified by comparison", r.verdict == Verdict::NonOscillationCertified,
                                   r.notes.empty() ? "" : r.notes.front()));
    const auto after = simulate_seeds(p, horizon, 10.0, seed + n, 3);
    out.properties.push_back(at_most(label + " impulsive oscillatory seeds", count_oscillatory(after), 2.0));
  }
  return out;
}

SuiteResult verify_positivity(std::uint64_t seed) {
  SuiteResult out{"positivity", {}};
  const double horizon = 6.0, t1 = 0.0;
  std::vector<Problem> problems;
  problems.push_back(unit_lag(0.3));
  {
    Problem p = unit_lag(0.2);
    p.schedule = ImpulseSchedule::periodic(0.7, 0.7, 0.8);
    problems.push_back(p);
  }
  {
    Problem p = unit_lag(0.15);
    p.terms.push_back({ScalarFn::parse("0.05*(1 + sin(t))"), DelayFn::constant_lag(0.5)});
    p.schedule = ImpulseSchedule({{1.3, 1.5}, {2.9, 0.9}});
    problems.push_back(p);
  }
  Rng rng(seed);
  for (int n = 0; n < 3; ++n) {
    Problem p;
    p.terms.push_back({random_sinusoid(rng, 0.0, 0.1, 0.1, 0.25), DelayFn::constant_lag(uniform(rng, 0.5, 1.5))});
    const double period = uniform(rng, 0.5, 2.0);
    p.schedule = ImpulseSchedule::periodic(period, period, uniform(rng, 0.7, 2.0));
    problems.push_back(p);
  }

  std::size_t certified = 0;
  for (std::size_t n = 0; n < problems.size(); ++n) {
    const Problem& p = problems[n];
    const InequalityResult r = solve_inequality(p, t1, horizon);
    if (!r.converged()) continue;
    ++certified;
    const std::string label = "problem " + std::to_string(n + 1);
    double min_x = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
      const double s = t1 + i * (horizon - t1) / 20.0;
      const FundamentalSlice x = fundamental(p, s, horizon, 1e-3);
      for (int j = 1; j <= 20; ++j) {
        const double t = s + j * (horizon - s) / 20.0;
        min_x = std::min({min_x, x(t), x.left_limit(t)});
      }
    }
    out.properties.push_back(
        {label + " min X(t,s) on the grid", min_x > 0.0, min_x, 0.0, "strictly positive required"});

    const FundamentalSlice x = fundamental(p, t1, horizon, 1e-3);
    const ImpulseProductIndex index(p.schedule, horizon);
    double worst = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 20; ++j) {
      const double t = t1 + j * (horizon - t1) / 20.0;
      worst = std::min(worst, x(t) - std::exp(-r.u.integral(t1, t)) * index.product(t1, t));
    }
    out.properties.push_back(at_least(label + " X(t,t1) minus lower bound", worst, -1e-6));
  }
  out.properties.push_back(at_least("problems certified by the fixed point", static_cast<double>(certified), 3.0));
  return out;
}

void write_suite(std::ostream& os, const SuiteResult& result) {
  for (const PropertyResult& p : result.properties) {
    os << (p.passed ? "PASS " : "FAIL ") << result.suite << ": " << p.name << " measured=" << std::setprecision(6)
       << p.measured << " bound=" << p.bound;
    if (!p.detail.empty()) os << " (" << p.detail << ')';
    os << '\n';
  }
  os << result.suite << ": " << (result.passed() ? "passed" : "FAILED") << '\n';
}

}  // namespace idde
