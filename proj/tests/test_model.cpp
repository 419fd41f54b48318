#include <doctest.h>

#include <cmath>
#include <random>

#include "idde/error.hpp"
#include "idde/problem.hpp"

using namespace idde;

namespace {

Problem unit_lag(double a) {
  Problem p;
  p.terms.push_back({ScalarFn::constant(a), DelayFn::constant_lag(1.0)});
  p.phi = ScalarFn::constant(1.0);
  return p;
}

}  // namespace

TEST_CASE("scalar function families") {
  CHECK(ScalarFn::constant(2.5)(100.0) == 2.5);
  const auto s = ScalarFn::sinusoid(2.0, 3.0, 0.5, 1.0);
  CHECK(s(0.7) == doctest::Approx(2.0 * std::sin(3.0 * 0.7 + 0.5) + 1.0));

  const auto tab = ScalarFn::table({0.0, 1.0, 2.0}, {5.0, 6.0, 7.0});
  CHECK(tab(-1.0) == 5.0);
  CHECK(tab(0.0) == 5.0);
  CHECK(tab(0.999) == 5.0);
  CHECK(tab(1.0) == 6.0);  // right-continuous
  CHECK(tab(2.0) == 7.0);
  CHECK(tab(50.0) == 7.0);
  CHECK_THROWS_AS(ScalarFn::table({1.0, 1.0}, {0.0, 0.0}), InputError);
  CHECK_THROWS_AS(ScalarFn::table({1.0}, {0.0, 0.0}), InputError);

  CHECK(ScalarFn::parse("2*t")(3.0) == 6.0);
  CHECK(tab.scaled(2.0)(1.5) == 12.0);
  CHECK(ScalarFn::parse("t").scaled(3.0)(2.0) == 6.0);
}

TEST_CASE("delay families keep h(t) <= t") {
  CHECK(DelayFn::constant_lag(1.0)(5.0) == 4.0);
  CHECK(DelayFn::proportional(0.5)(4.0) == 2.0);
  CHECK_THROWS_AS(DelayFn::proportional(1.5), InputError);
  CHECK_THROWS_AS(DelayFn::constant_lag(-1.0), InputError);
  CHECK(DelayFn::parse("t - 2")(3.0) == 1.0);
  CHECK_THROWS_AS(DelayFn::parse("t + 1")(3.0), DelayAdvanced);
  CHECK(DelayFn::parse("t + 1").unchecked(3.0) == 4.0);

}

TEST_CASE("every sampled delay stays at or below t") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tdist(0.0, 100.0);
  const DelayFn delays[] = {DelayFn::constant_lag(0.3), DelayFn::proportional(0.7), DelayFn::parse("t - abs(sin(t))"),
                            DelayFn::parse("min2(t - 1, 0.5 * t)")};
  for (const DelayFn& h : delays)
    for (int i = 0; i < 1000; ++i) {
      const double t = tdist(rng);
      CHECK(h(t) <= t);
    }
}

TEST_CASE("impulse schedule construction and materialization") {
  CHECK_THROWS_AS(ImpulseSchedule({{1.0, 0.0}}), InputError);
  CHECK_THROWS_AS(ImpulseSchedule::periodic(0.0, 0.0, 2.0), InputError);
  CHECK_THROWS_AS(ImpulseSchedule::periodic(0.0, 1.0, 0.0), InputError);

  const ImpulseSchedule sched({{0.5, 2.0}, {0.75, 3.0}}, PeriodicTail{1.0, 0.3, 0.5});
  const auto short_run = sched.materialize(5.0);
  const auto long_run = sched.materialize(50.0);
  REQUIRE(short_run.size() < long_run.size());
  for (std::size_t j = 0; j < short_run.size(); ++j) {
    CHECK(short_run[j].time == long_run[j].time);
    CHECK(short_run[j].multiplier == long_run[j].multiplier);
  }
  CHECK(sched.materialize(0.4).empty());
  CHECK_FALSE(sched.first_order_violation(50.0).has_value());

  const ImpulseSchedule dup({{1.0, 2.0}, {1.0, 2.0}});
  CHECK(dup.first_order_violation(10.0) == 1u);
  CHECK_THROWS_AS(dup.require_ordered(10.0), InputError);

  const ImpulseSchedule tail_overlap({{3.0, 2.0}}, PeriodicTail{2.0, 1.0, 2.0});
  CHECK(tail_overlap.first_order_violation(10.0).has_value());
}

TEST_CASE("periodic materialization agrees across horizons") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sched = ImpulseSchedule::periodic(u(rng), u(rng), u(rng));
    const double T = 10.0 * u(rng);
    const double T2 = T + 10.0 * u(rng);
    const auto a = sched.materialize(T);
    const auto b = sched.materialize(T2);
    REQUIRE(a.size() <= b.size());
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j].time == b[j].time);
    for (std::size_t j = a.size(); j < b.size(); ++j) CHECK(b[j].time > T);
  }
}

TEST_CASE("validate examples") {
  const Problem p = unit_lag(0.5);
  const auto report = validate(p, 10.0);
  CHECK(report.check("a3").status == CheckStatus::Pass);
  CHECK(report.check("a5").status == CheckStatus::Pass);
  CHECK(report.all_passed());
  CHECK(report.history_start == doctest::Approx(-1.0));
  REQUIRE(report.settle_time.has_value());
  CHECK(*report.settle_time == doctest::Approx(1.0).epsilon(1e-3));

  Problem dup = p;
  dup.schedule = ImpulseSchedule({{1.0, 2.0}, {1.0, 3.0}});
  const auto r1 = validate(dup, 10.0);
  CHECK(r1.check("a1").status == CheckStatus::Fail);
  REQUIRE(r1.check("a1").witness.has_value());
  CHECK(r1.check("a1").witness->first == 1.0);

  Problem adv = p;
  adv.terms[0].delay = DelayFn::parse("t + 1");
  const auto r3 = validate(adv, 10.0);
  CHECK(r3.check("a3").status == CheckStatus::Fail);
  REQUIRE(r3.check("a3").witness.has_value());
  CHECK(r3.check("a3").witness->first == p.t0);
  CHECK(r3.check("a3").witness->second == 1.0);

  Problem bad_coeff = p;
  bad_coeff.terms[0].coefficient = ScalarFn::parse("ln(t - 5)");
  const auto r2 = validate(bad_coeff, 10.0);
  CHECK(r2.check("a2").status == CheckStatus::Fail);
  CHECK(r2.check("a2").witness.has_value());

  Problem bad_phi = p;
  bad_phi.phi = ScalarFn::parse("ln(t)");
  CHECK(validate(bad_phi, 10.0).check("a4").status == CheckStatus::Fail);

  // h(t) = t/2 >= t0 = 0 from the start.
  Problem prop = p;
  prop.terms[0].delay = DelayFn::proportional(0.5);
  CHECK(validate(prop, 10.0).check("a5").status == CheckStatus::Pass);

  // A delay that stays below t0 throughout the horizon.
  Problem stuck = p;
  stuck.terms[0].delay = DelayFn::constant_lag(20.0);
  const auto r5 = validate(stuck, 10.0);
  CHECK(r5.check("a5").status == CheckStatus::NotFound);
  CHECK(r5.all_passed());
}

TEST_CASE("cutoff follows the two-branch definition") {
  Problem p = unit_lag(1.0);
  const Problem c = cutoff(p, 2.0);
  CHECK(c.terms[0].coefficient(1.0) == 0.0);
  CHECK(c.terms[0].coefficient(2.0) == 1.0);
  CHECK(c.terms[0].delay.unchecked(1.5) == 2.0);
  CHECK(c.terms[0].delay.unchecked(5.0) == 4.0);

  p.terms[0].coefficient = ScalarFn::parse("sin(t) + 0.5");
  const Problem once = cutoff(p, 2.0);
  const Problem twice = cutoff(once, 2.0);
  for (int i = 0; i <= 1000; ++i) {
    const double t = -1.0 + 0.01 * i;
    CHECK(once.terms[0].coefficient(t) == twice.terms[0].coefficient(t));
    CHECK(once.terms[0].delay.unchecked(t) == twice.terms[0].delay.unchecked(t));
  }
}
