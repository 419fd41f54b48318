#include "idde/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "idde/error.hpp"

namespace idde {
namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing "; comment" or "# comment" (preceded by whitespace and
// outside quotes); ini_parser only knows whole-line comments.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && (s[i] == ';' || s[i] == '#') && i > 0 && (s[i - 1] == ' ' || s[i - 1] == '\t'))
      return s.substr(0, i);
  }
  return s;
}

// A section with every key accounted for: reading a key marks it, and
// finish() rejects whatever was not read.
class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {
    for (const auto& [key, child] : tree_) {
      if (!child.empty()) throw ConfigError("[" + name_ + "] " + key + ": nested keys are not supported");
      pending_.insert(key);
    }
  }

  bool has(const std::string& key) const { return tree_.find(key) != tree_.not_found(); }

  std::optional<std::string> raw(const std::string& key) {
    const auto it = tree_.find(key);
    if (it == tree_.not_found()) return std::nullopt;
    pending_.erase(key);
    return trim(strip_comment(it->second.data()));
  }

  std::optional<std::string> text(const std::string& key) {
    auto v = raw(key);
    if (!v) return v;
    if (v->size() >= 2 && v->front() == '"' && v->back() == '"') return v->substr(1, v->size() - 2);
    if (!v->empty() && (v->front() == '"' || v->back() == '"')) fail(key, "unbalanced quotes");
    return v;
  }

  std::optional<double> real(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    return parse_real(key, *v);
  }

  std::optional<std::vector<double>> reals(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    std::vector<double> out;
    if (trim(*v).empty()) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
    return out;
  }

  std::optional<long long> integer(const std::string& key) {
    auto v = text(key);
    if (!v) return std::nullopt;
    long long out = 0;
    const char* end = v->data() + v->size();
    auto [ptr, ec] = std::from_chars(v->data(), end, out);
    if (ec != std::errc() || ptr != end) fail(key, "expected an integer, got '" + *v + "'");
    return out;
  }

  void finish() const {
    if (!pending_.empty()) throw ConfigError("[" + name_ + "] unknown key '" + *pending_.begin() + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError("[" + name_ + "] " + key + ": " + message);
  }

 private:
  double parse_real(const std::string& key, const std::string& s) const {
    double out = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc() || ptr != end || s.empty()) fail(key, "expected a number, got '" + s + "'");
    return out;
  }

  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> pending_;
};

// Builds `make(text)` and reports expression errors against the key.
template <typename Fn>
auto with_context(const std::string& where, const std::string& text, Fn make) {
  try {
    return make(text);
  } catch (const SyntaxError& e) {
    throw ConfigError(where + ": " + e.what() + " in \"" + text + "\"");
  } catch (const UnknownIdentifier& e) {
    throw ConfigError(where + ": " + e.what() + " in \"" + text + "\"");
  }
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + number(values[i]);
  return out;
}

void check_run(const ScenarioConfig& c) {
  const RunSpec& r = c.run;
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("[run] ") + key + " must be positive");
  };
  positive("step", r.step);
  positive("cap", r.cap);
  positive("margin", r.margin);
  if (!(r.horizon > c.t0) || !std::isfinite(r.horizon)) throw ConfigError("[run] horizon must exceed t0");
  if (r.grid_n < 100) throw ConfigError("[run] grid_n must be at least 100");
  if (r.max_iter < 1) throw ConfigError("[run] max_iter must be positive");
  if (!(r.tail_fraction > 0.0 && r.tail_fraction <= 1.0)) throw ConfigError("[run] tail_fraction must lie in (0, 1]");
  if (r.transient_cut && !(*r.transient_cut >= c.t0 && *r.transient_cut < r.horizon))
    throw ConfigError("[run] transient_cut must lie in [t0, horizon)");
  if (r.t1 && !(*r.t1 >= c.t0 && *r.t1 < r.horizon)) throw ConfigError("[run] t1 must lie in [t0, horizon)");
  if (c.output.stride < 1 || c.output.samples < 2) throw ConfigError("[output] stride >= 1 and samples >= 2 required");
}

}  // namespace

Problem ScenarioConfig::to_problem() const {
  Problem p;
  p.t0 = t0;
  p.x0 = x0;
  p.phi = with_context("[problem] phi", phi, [](const std::string& s) { return ScalarFn::parse(s); });
  p.forcing = with_context("[problem] forcing", forcing, [](const std::string& s) { return ScalarFn::parse(s); });
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const TermSpec& spec = terms[k];
    const std::string where = "[term." + std::to_string(k + 1) + "]";
    Term term{with_context(where + " coefficient", spec.coefficient,
                           [](const std::string& s) { return ScalarFn::parse(s); }),
              DelayFn::constant_lag(0.0)};
    try {
      switch (spec.delay) {
        case TermSpec::Delay::Lag:
          term.delay = DelayFn::constant_lag(spec.value);
          break;
        case TermSpec::Delay::Proportional:
          term.delay = DelayFn::proportional(spec.value);
          break;
        case TermSpec::Delay::Expression:
          term.delay = with_context(where + " delay", spec.expression,
                                    [](const std::string& s) { return DelayFn::parse(s); });
          break;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const InputError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    p.terms.push_back(std::move(term));
  }
  if (schedule.times.size() != schedule.multipliers.size())
    throw ConfigError("[schedule] times and multipliers differ in length");
  std::vector<Impulse> impulses;
  for (std::size_t j = 0; j < schedule.times.size(); ++j) impulses.push_back({schedule.times[j], schedule.multipliers[j]});
  try {
    p.schedule = ImpulseSchedule(impulses, schedule.tail);
  } catch (const InputError& e) {
    throw ConfigError(std::string("[schedule] ") + e.what());
  }
  return p;
}

CertifyOptions ScenarioConfig::certify_options() const {
  CertifyOptions o;
  o.t1 = run.t1;
  o.inequality.grid_n = run.grid_n;
  o.inequality.max_iter = run.max_iter;
  o.inequality.cap = run.cap;
  o.sliding.grid_n = run.grid_n;
  o.sliding.tail_fraction = run.tail_fraction;
  o.sliding.margin = run.margin;
  return o;
}

double ScenarioConfig::transient_cut() const { return run.transient_cut.value_or(t0 + 0.1 * (run.horizon - t0)); }

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }

  ScenarioConfig c;
  std::map<std::size_t, const pt::ptree*> term_sections;
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) throw ConfigError("key '" + name + "' outside any section");
    if (name.rfind("term.", 0) == 0) {
      const std::string n = name.substr(5);
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), index);
      if (ec != std::errc() || ptr != n.data() + n.size() || index == 0)
        throw ConfigError("bad term section '[" + name + "]'");
      term_sections[index] = &section;
    } else if (name != "problem" && name != "schedule" && name != "run" && name != "output" && name != "sweep") {
      throw ConfigError("unknown section '[" + name + "]'");
    }
  }

  if (auto it = tree.find("problem"); it != tree.not_found()) {
    Section s("problem", it->second);
    c.t0 = s.real("t0").value_or(c.t0);
    c.x0 = s.real("x0").value_or(c.x0);
    c.phi = s.text("phi").value_or(c.phi);
    c.forcing = s.text("forcing").value_or(c.forcing);
    s.finish();
  }

  if (term_sections.empty()) throw ConfigError("no [term.N] sections");
  if (term_sections.rbegin()->first != term_sections.size())
    throw ConfigError("term sections must be numbered 1.." + std::to_string(term_sections.size()));
  for (const auto& [index, section] : term_sections) {
    Section s("term." + std::to_string(index), *section);
    TermSpec t;
    auto coefficient = s.text("coefficient");
    if (!coefficient) s.fail("coefficient", "missing");
    t.coefficient = *coefficient;
    const int given = static_cast<int>(s.has("lag")) + static_cast<int>(s.has("factor")) + static_cast<int>(s.has("delay"));
    if (given != 1) s.fail("lag/factor/delay", "exactly one is required");
    if (auto lag = s.real("lag")) {
      t.delay = TermSpec::Delay::Lag;
      t.value = *lag;
    } else if (auto factor = s.real("factor")) {
      t.delay = TermSpec::Delay::Proportional;
      t.value = *factor;
    } else {
      t.delay = TermSpec::Delay::Expression;
      t.expression = *s.text("delay");
    }
    s.finish();
    c.terms.push_back(std::move(t));
  }

  if (auto it = tree.find("schedule"); it != tree.not_found()) {
    Section s("schedule", it->second);
    c.schedule.times = s.reals("times").value_or(std::vector<double>{});
    c.schedule.multipliers = s.reals("multipliers").value_or(std::vector<double>{});
    auto start = s.real("tail_start"), period = s.real("tail_period"), mult = s.real("tail_multiplier");
    if (start || period || mult) {
      if (!(start && period && mult)) s.fail("tail", "tail_start, tail_period and tail_multiplier go together");
      c.schedule.tail = PeriodicTail{*start, *period, *mult};
    }
    s.finish();
  }

  if (auto it = tree.find("run"); it != tree.not_found()) {
    Section s("run", it->second);
    RunSpec& r = c.run;
    r.horizon = s.real("horizon").value_or(r.horizon);
    r.step = s.real("step").value_or(r.step);
    if (auto n = s.integer("grid_n")) {
      if (*n < 0) s.fail("grid_n", "must be positive");
      r.grid_n = static_cast<std::size_t>(*n);
    }
    if (auto n = s.integer("max_iter")) r.max_iter = static_cast<int>(std::clamp<long long>(*n, -1, 1 << 30));
    r.cap = s.real("cap").value_or(r.cap);
    r.tail_fraction = s.real("tail_fraction").value_or(r.tail_fraction);
    r.margin = s.real("margin").value_or(r.margin);
    r.transient_cut = s.real("transient_cut");
    r.t1 = s.real("t1");
    s.finish();
  }

  if (auto it = tree.find("output"); it != tree.not_found()) {
    Section s("output", it->second);
    OutputSpec& o = c.output;
    o.trajectory = s.text("trajectory").value_or(o.trajectory);
    o.report = s.text("report").value_or(o.report);
    o.certificates = s.text("certificates").value_or(o.certificates);
    o.coefficients = s.text("coefficients").value_or(o.coefficients);
    o.sweep = s.text("sweep").value_or(o.sweep);
    if (auto n = s.integer("stride")) o.stride = *n < 1 ? 0 : static_cast<std::size_t>(*n);
    if (auto n = s.integer("samples")) o.samples = *n < 2 ? 0 : static_cast<std::size_t>(*n);
    s.finish();
  }

  if (auto it = tree.find("sweep"); it != tree.not_found()) {
    Section s("sweep", it->second);
    SweepSpec w;
    auto parameter = s.text("parameter");
    if (!parameter) s.fail("parameter", "missing");
    w.parameter = *parameter;
    w.values = s.reals("values").value_or(std::vector<double>{});
    if (auto n = s.integer("seeds")) {
      if (*n < 1) s.fail("seeds", "must be positive");
      w.seeds = static_cast<std::size_t>(*n);
    }
    s.finish();
    c.sweep = std::move(w);
  }

  check_run(c);
  const Problem problem = c.to_problem();
  const ValidationReport report = validate(problem, c.run.horizon);
  for (const HypothesisCheck& check : report.checks) {
    if (check.status != CheckStatus::Fail) continue;
    std::string message = "hypothesis " + check.id + " fails";
    if (check.witness)
      message += " at t=" + number(check.witness->first) + " (value " + number(check.witness->second) + ")";
    if (!check.note.empty()) message += ": " + check.note;
    throw ConfigError(message);
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario '" + path + "'");
  return parse_config(in);
}

std::string serialize(const ScenarioConfig& c) {
  std::ostringstream os;
  auto quoted = [](const std::string& s) { return '"' + s + '"'; };
  os << "[problem]\n"
     << "t0 = " << number(c.t0) << '\n'
     << "x0 = " << number(c.x0) << '\n'
     << "phi = " << quoted(c.phi) << '\n'
     << "forcing = " << quoted(c.forcing) << '\n';
  for (std::size_t k = 0; k < c.terms.size(); ++k) {
    const TermSpec& t = c.terms[k];
    os << "\n[term." << k + 1 << "]\ncoefficient = " << quoted(t.coefficient) << '\n';
    switch (t.delay) {
      case TermSpec::Delay::Lag:
        os << "lag = " << number(t.value) << '\n';
        break;
      case TermSpec::Delay::Proportional:
        os << "factor = " << number(t.value) << '\n';
        break;
      case TermSpec::Delay::Expression:
        os << "delay = " << quoted(t.expression) << '\n';
        break;
    }
  }
  os << "\n[schedule]\n"
     << "times = " << list(c.schedule.times) << '\n'
     << "multipliers = " << list(c.schedule.multipliers) << '\n';
  if (c.schedule.tail)
    os << "tail_start = " << number(c.schedule.tail->start) << '\n'
       << "tail_period = " << number(c.schedule.tail->period) << '\n'
       << "tail_multiplier = " << number(c.schedule.tail->multiplier) << '\n';
  const RunSpec& r = c.run;
  os << "\n[run]\n"
     << "horizon = " << number(r.horizon) << '\n'
     << "step = " << number(r.step) << '\n'
     << "grid_n = " << r.grid_n << '\n'
     << "max_iter = " << r.max_iter << '\n'
     << "cap = " << number(r.cap) << '\n'
     << "tail_fraction = " << number(r.tail_fraction) << '\n'
     << "margin = " << number(r.margin) << '\n';
  if (r.transient_cut) os << "transient_cut = " << number(*r.transient_cut) << '\n';
  if (r.t1) os << "t1 = " << number(*r.t1) << '\n';
  const OutputSpec& o = c.output;
  os << "\n[output]\n"
     << "trajectory = " << quoted(o.trajectory) << '\n'
     << "report = " << quoted(o.report) << '\n'
     << "certificates = " << quoted(o.certificates) << '\n'
     << "coefficients = " << quoted(o.coefficients) << '\n'
     << "sweep = " << quoted(o.sweep) << '\n'
     << "stride = " << o.stride << '\n'
     << "samples = " << o.samples << '\n';
  if (c.sweep)
    os << "\n[sweep]\n"
       << "parameter = " << quoted(c.sweep->parameter) << '\n'
       << "values = " << list(c.sweep->values) << '\n'
       << "seeds = " << c.sweep->seeds << '\n';
  return os.str();
}

}  // namespace idde
