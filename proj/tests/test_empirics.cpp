#include <doctest.h>

#include <random>
#include <sstream>

#include "idde/empirics.hpp"
#include "idde/error.hpp"
#include "idde/integrator.hpp"

using namespace idde;

namespace {

Problem unit_lag(double a) {
  Problem p;
  p.terms.push_back({ScalarFn::constant(a), DelayFn::constant_lag(1.0)});
  p.phi = ScalarFn::constant(1.0);
  return p;
}

bool all_oscillatory(const SweepRow& row) {
  for (const EmpiricalVerdict& v : row.empirical)
    if (v.cls != EmpiricalClass::Oscillatory) return false;
  return !row.empirical.empty();
}

}  // namespace

TEST_CASE("classification examples") {
  Problem decay;
  decay.terms.push_back({ScalarFn::constant(1.0), DelayFn::constant_lag(0.0)});
  auto v = classify(solve(decay, 10.0, 1e-2), 1.0);
  CHECK(v.cls == EmpiricalClass::EventuallyPositive);
  CHECK(v.sign_change_count == 0);
  CHECK_FALSE(v.last_crossing);

  v = classify(solve(unit_lag(2.0), 50.0, 1e-3), 10.0);
  CHECK(v.cls == EmpiricalClass::Oscillatory);
  CHECK(v.sign_change_count > 2);

  v = classify(solve(unit_lag(0.2), 50.0, 1e-3), 10.0);
  CHECK(v.cls == EmpiricalClass::EventuallyPositive);
}

TEST_CASE("single crossings are undetermined") {
  Problem line;
  line.terms.push_back({ScalarFn::constant(0.0), DelayFn::constant_lag(1.0)});
  line.forcing = ScalarFn::constant(-1.0);
  const Trajectory x = solve(line, 2.0, 1e-2);
  auto v = classify(x, 0.0);
  CHECK(v.cls == EmpiricalClass::Undetermined);
  CHECK(v.sign_change_count == 1);
  REQUIRE(v.last_crossing);
  CHECK(*v.last_crossing == doctest::Approx(1.0).epsilon(1e-9));
  v = classify(x, 1.5);
  CHECK(v.cls == EmpiricalClass::EventuallyNegative);
}

TEST_CASE("random initial functions are deterministic bounded trigonometric polynomials") {
  const auto a = random_initial_functions(7, 4);
  const auto b = random_initial_functions(7, 4);
  const auto c = random_initial_functions(8, 4);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (double t = -3.0; t <= 3.0; t += 0.25) {
      CHECK(a[i](t) == b[i](t));
      CHECK(std::fabs(a[i](t)) <= 7.0);
    }
    CHECK(a[i](0.3) != c[i](0.3));
  }
  const Problem p = with_initial_function(unit_lag(0.3), a[0]);
  CHECK(p.x0 == a[0](0.0));
}

TEST_CASE("knobs") {
  Problem p = unit_lag(0.5);
  p.terms.push_back({ScalarFn::parse("sin(t)"), DelayFn::proportional(0.5)});
  p.schedule = ImpulseSchedule({{0.5, 3.0}}, PeriodicTail{2.0, 1.0, 0.5});

  Problem q = apply_knob(p, Knob::CoefficientScale, 2.0);
  CHECK(q.terms[0].coefficient(3.0) == 1.0);
  CHECK(q.terms[1].coefficient(1.0) == doctest::Approx(2.0 * std::sin(1.0)));

  q = apply_knob(p, Knob::DelayLag, 0.25);
  CHECK(q.terms[1].delay(4.0) == 3.75);

  q = apply_knob(p, Knob::ImpulseMultiplier, 1.5);
  for (const Impulse& imp : q.schedule.materialize(5.0)) CHECK(imp.multiplier == 1.5);

  q = apply_knob(p, Knob::ImpulsePeriod, 0.75);
  const auto imps = q.schedule.materialize(3.0);
  REQUIRE(imps.size() == 4);
  CHECK(imps[0].time == 0.75);
  CHECK(imps[3].time == 3.0);
  CHECK(imps[0].multiplier == 3.0);

  CHECK(parse_knob("delay_lag") == Knob::DelayLag);
  CHECK(std::string(to_string(Knob::ImpulsePeriod)) == "impulse_period");
  CHECK_THROWS_AS(parse_knob("lag"), ConfigError);
}

TEST_CASE("empty sweep gives an empty table") {
  SweepOptions o;
  const auto rows = sweep(unit_lag(1.0), Knob::CoefficientScale, {}, o);
  CHECK(rows.empty());
  std::ostringstream os;
  write_sweep_csv(os, rows, 2);
  CHECK(os.str() == "value,certified,certified_theorem,empirical_seed_1,empirical_seed_2\n");
}

TEST_CASE("coefficient sweep brackets 1/e") {
  SweepOptions o;
  o.horizon = 100.0;
  o.seeds = 3;
  const std::vector<double> values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto rows = sweep(unit_lag(1.0), Knob::CoefficientScale, values, o);
  REQUIRE(rows.size() == values.size());
  for (const SweepRow& row : rows) {
    const bool below = row.value < 0.35;
    CHECK(row.certified == (below ? Verdict::NonOscillationCertified : Verdict::OscillationCertified));
    for (const EmpiricalVerdict& v : row.empirical) CHECK((v.cls == EmpiricalClass::Oscillatory) == !below);
  }

  std::ostringstream a, b;
  write_sweep_csv(a, rows, o.seeds);
  write_sweep_csv(b, sweep(unit_lag(1.0), Knob::CoefficientScale, values, o), o.seeds);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("0.29999999999999999,NonOscillationCertified,T3.2,") != std::string::npos);
}

TEST_CASE("multiplier sweep shows oscillation below one") {
  Problem p = unit_lag(0.3);
  p.schedule = ImpulseSchedule::periodic(1.0, 1.0, 1.0);
  SweepOptions o;
  o.horizon = 100.0;
  o.seeds = 3;
  const auto rows = sweep(p, Knob::ImpulseMultiplier, {0.25, 0.5, 1.0, 2.0, 4.0}, o);
  for (const SweepRow& row : rows) {
    const bool oscillating = row.value < 1.0;
    CHECK(row.certified == (oscillating ? Verdict::OscillationCertified : Verdict::NonOscillationCertified));
    CHECK(all_oscillatory(row) == oscillating);
  }
}

TEST_CASE("no sweep row contradicts its certificate") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lag(0.5, 1.5), coef(0.05, 0.6);
  SweepOptions o;
  o.horizon = 60.0;
  o.seeds = 3;
  for (int trial = 0; trial < 4; ++trial) {
    Problem p;
    p.terms.push_back({ScalarFn::constant(coef(rng)), DelayFn::constant_lag(lag(rng))});
    p.schedule = ImpulseSchedule::periodic(0.7, 1.3, 1.0);
    for (const SweepRow& row : sweep(p, Knob::ImpulseMultiplier, {0.6, 0.9, 1.2}, o)) {
      if (row.certified == Verdict::NonOscillationCertified) CHECK_FALSE(all_oscillatory(row));
      if (row.certified == Verdict::OscillationCertified)
        for (const EmpiricalVerdict& v : row.empirical) CHECK(v.sign_change_count > 0);
    }
  }
}

TEST_CASE("impulses with B >= 1 keep non-oscillating equations non-oscillating") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(0.05, 0.3), mult(1.0, 3.0), period(0.4, 2.0);
  SweepOptions o;
  o.horizon = 60.0;
  o.seeds = 3;
  for (int trial = 0; trial < 5; ++trial) {
    Problem base = unit_lag(coef(rng));
    const auto plain = sweep(base, Knob::CoefficientScale, {1.0}, o);
    bool eventually_positive = true;
    for (const auto& v : plain[0].empirical) eventually_positive &= v.cls != EmpiricalClass::Oscillatory;
    REQUIRE(eventually_positive);
    base.schedule = ImpulseSchedule::periodic(0.5, period(rng), mult(rng));
    const auto impulsive = sweep(base, Knob::CoefficientScale, {1.0}, o);
    CHECK_FALSE(all_oscillatory(impulsive[0]));
  }
}
