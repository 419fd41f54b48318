#include <doctest.h>

#include <random>
#include <sstream>

#include "idde/config.hpp"
#include "idde/error.hpp"

using namespace idde;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kFull = R"ini([problem]
t0 = 0.5
x0 = -2
phi = "sin(t) + 0.1"
forcing = "exp(-t) * cos(3 * t)"

[term.1]
coefficient = "0.3 + 0.1 * sin(t)"
lag = 1.25

[term.2]
coefficient = "0.05"
factor = 0.5

[term.3]
coefficient = "-0.01 * t"
delay = "t - 1 - 0.2 * cos(t) * cos(t)"

[schedule]
times = 1, 2.5
multipliers = 2, 0.75
tail_start = 3
tail_period = 0.7
tail_multiplier = 1.1

[run]
horizon = 12
step = 0.002
grid_n = 500
max_iter = 50
cap = 100
tail_fraction = 0.25
margin = 1e-5
transient_cut = 2
t1 = 1

[output]
trajectory = "out/x.csv"
stride = 10
samples = 31

[sweep]
parameter = "impulse_multiplier"
values = 0.5, 1, 2
seeds = 3
)ini";

}  // namespace

TEST_CASE("config parses every section") {
  const ScenarioConfig c = parse(kFull);
  CHECK(c.t0 == 0.5);
  CHECK(c.x0 == -2.0);
  REQUIRE(c.terms.size() == 3);
  CHECK(c.terms[0].delay == TermSpec::Delay::Lag);
  CHECK(c.terms[0].value == 1.25);
  CHECK(c.terms[1].delay == TermSpec::Delay::Proportional);
  CHECK(c.terms[2].delay == TermSpec::Delay::Expression);
  CHECK(c.terms[2].expression == "t - 1 - 0.2 * cos(t) * cos(t)");
  CHECK(c.schedule.times == std::vector<double>{1.0, 2.5});
  CHECK(c.schedule.multipliers == std::vector<double>{2.0, 0.75});
  REQUIRE(c.schedule.tail);
  CHECK(c.schedule.tail->period == 0.7);
  CHECK(c.run.grid_n == 500);
  CHECK(c.run.max_iter == 50);
  CHECK(*c.run.t1 == 1.0);
  CHECK(c.transient_cut() == 2.0);
  CHECK(c.output.trajectory == "out/x.csv");
  CHECK(c.output.report == "report.txt");
  CHECK(c.output.stride == 10);
  REQUIRE(c.sweep);
  CHECK(c.sweep->values.size() == 3);

  const CertifyOptions o = c.certify_options();
  CHECK(o.inequality.grid_n == 500);
  CHECK(o.sliding.tail_fraction == 0.25);
  CHECK(*o.t1 == 1.0);
}

TEST_CASE("config defaults") {
  const ScenarioConfig c = parse("[term.1]\ncoefficient = \"0.2\"\nlag = 1\n");
  CHECK(c.t0 == 0.0);
  CHECK(c.x0 == 1.0);
  CHECK(c.run.horizon == 10.0);
  CHECK(c.run.step == 1e-3);
  CHECK(c.transient_cut() == doctest::Approx(1.0));
  CHECK(c.schedule.times.empty());
  CHECK_FALSE(c.sweep);
}

TEST_CASE("config round trip gives the same problem") {
  const ScenarioConfig a = parse(kFull);
  const ScenarioConfig b = parse(serialize(a));
  CHECK(serialize(b) == serialize(a));

  const Problem p = a.to_problem();
  const Problem q = b.to_problem();
  REQUIRE(p.terms.size() == q.terms.size());
  CHECK(p.t0 == q.t0);
  CHECK(p.x0 == q.x0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-5.0, 12.0);
  for (int i = 0; i < 100; ++i) {
    const double t = dist(rng);
    CHECK(p.phi(t) == q.phi(t));
    CHECK(p.forcing(t) == q.forcing(t));
    for (std::size_t k = 0; k < p.terms.size(); ++k) {
      CHECK(p.terms[k].coefficient(t) == q.terms[k].coefficient(t));
      CHECK(p.terms[k].delay(t) == q.terms[k].delay(t));
    }
  }
  const auto ip = p.schedule.materialize(12.0);
  const auto iq = q.schedule.materialize(12.0);
  REQUIRE(ip.size() == iq.size());
  for (std::size_t j = 0; j < ip.size(); ++j) {
    CHECK(ip[j].time == iq[j].time);
    CHECK(ip[j].multiplier == iq[j].multiplier);
  }
}

TEST_CASE("config inline comments") {
  const ScenarioConfig c = parse(
      "[term.1]\ncoefficient = \"0.2\"  ; constant\nlag = 1 # unit lag\n");
  CHECK(c.terms[0].coefficient == "0.2");
  CHECK(c.terms[0].value == 1.0);
  // Inside quotes a ';' belongs to the value.
  CHECK(error_of("[term.1]\ncoefficient = \"1 ;2\"\nlag = 1\n").find("in \"1 ;2\"") != std::string::npos);
}

TEST_CASE("config round trip keeps awkward numbers exact") {
  ScenarioConfig c = parse("[term.1]\ncoefficient = \"0.1\"\nlag = 1\n");
  c.x0 = 0.1 + 0.2;
  c.terms[0].value = 1.0 / 3.0;
  c.schedule.times = {0.1 * 3};
  c.schedule.multipliers = {2.0 / 3.0};
  const ScenarioConfig d = parse(serialize(c));
  CHECK(d.x0 == c.x0);
  CHECK(d.terms[0].value == c.terms[0].value);
  CHECK(d.schedule.times[0] == c.schedule.times[0]);
  CHECK(d.schedule.multipliers[0] == c.schedule.multipliers[0]);
}

TEST_CASE("config rejects malformed input") {
  const std::string term = "[term.1]\ncoefficient = \"0.2\"\nlag = 1\n";
  CHECK(error_of(term + "[problem]\ncolour = 1\n").find("unknown key 'colour'") != std::string::npos);
  CHECK(error_of(term + "[extra]\na = 1\n").find("unknown section") != std::string::npos);
  CHECK(error_of("[problem]\nx0 = 1\n").find("no [term.N]") != std::string::npos);
  CHECK(error_of("[term.2]\ncoefficient = \"1\"\nlag = 1\n").find("numbered") != std::string::npos);
  CHECK(error_of("[term.1]\ncoefficient = \"1\"\n").find("exactly one") != std::string::npos);
  CHECK(error_of("[term.1]\ncoefficient = \"1\"\nlag = 1\nfactor = 0.5\n").find("exactly one") !=
        std::string::npos);
  CHECK(error_of("[term.1]\nlag = 1\n").find("coefficient: missing") != std::string::npos);
  CHECK(error_of(term + "[run]\nstep = -1\n").find("step must be positive") != std::string::npos);
  CHECK(error_of(term + "[run]\nstep = 1e-3x\n").find("expected a number") != std::string::npos);
  CHECK(error_of(term + "[run]\ngrid_n = 50\n").find("grid_n") != std::string::npos);
  CHECK(error_of(term + "[run]\ngrid_n = 2.5\n").find("expected an integer") != std::string::npos);
  CHECK(error_of(term + "[run]\ntail_fraction = 1.5\n").find("tail_fraction") != std::string::npos);
  CHECK(error_of(term + "[run]\nhorizon = 0\n").find("horizon") != std::string::npos);
  CHECK(error_of(term + "[schedule]\ntimes = 1, 2\nmultipliers = 2\n").find("differ in length") !=
        std::string::npos);
  CHECK(error_of(term + "[schedule]\ntail_start = 1\n").find("go together") != std::string::npos);
  CHECK(error_of(term + "[problem]\nphi = \"1\n").find("quotes") != std::string::npos);
  CHECK(error_of("[term.1\ncoefficient = 1\n").find("malformed") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.ini"), ConfigError);
}

TEST_CASE("config reports expression errors with the byte offset") {
  const std::string e = error_of("[term.1]\ncoefficient = \"0.2 * (t +\"\nlag = 1\n");
  CHECK(e.find("[term.1] coefficient") != std::string::npos);
  CHECK(e.find("at byte 10") != std::string::npos);
  CHECK(error_of("[term.1]\ncoefficient = \"2 * q\"\nlag = 1\n").find("unknown identifier 'q'") !=
        std::string::npos);
}

TEST_CASE("config runs the hypothesis checks") {
  const std::string term = "[term.1]\ncoefficient = \"0.2\"\nlag = 1\n";
  CHECK(error_of(term + "[schedule]\ntimes = 2, 1\nmultipliers = 2, 2\n").find("hypothesis a1") !=
        std::string::npos);
  CHECK(error_of("[term.1]\ncoefficient = \"ln(t - 2)\"\nlag = 1\n[run]\nhorizon = 4\n").find("hypothesis a2") !=
        std::string::npos);
  CHECK(error_of("[term.1]\ncoefficient = \"1\"\ndelay = \"t + 1\"\n").find("hypothesis a3") !=
        std::string::npos);
  // s' missing is not an error: the delay never settles above t0 here.
  CHECK_NOTHROW(parse("[term.1]\ncoefficient = \"1\"\nfactor = 0.5\n[problem]\nt0 = 0\n"));
}
