#include "idde/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "idde/error.hpp"
#include "idde/impulse_index.hpp"
#include "idde/transform.hpp"

namespace idde {
namespace {

const double kInvE = std::exp(-1.0);

// Sums over a window carry rounding; a value within this relative distance
// of a threshold counts as equal to it.
constexpr double kTieSlack = 1e-12;

// The fixed point certifies only if it has settled: its tail maximum may not
// exceed the preceding quarter's maximum by more than this.
constexpr double kTailGrowthLimit = 1e-3;

bool at_most(double x, double threshold) {
  return x <= threshold + kTieSlack * std::max(std::fabs(x), std::fabs(threshold));
}

std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void require_positive_multipliers(const ImpulseSchedule& schedule, double horizon) {
  for (const Impulse& imp : schedule.materialize(horizon))
    if (!(imp.multiplier > 0.0)) throw NonPositiveMultiplier(imp.time, imp.multiplier);
}

std::vector<double> uniform(double a, double b, std::size_t cells) {
  std::vector<double> t(cells + 1);
  const double dt = (b - a) / static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) t[i] = a + static_cast<double>(i) * dt;
  t.back() = b;
  return t;
}

bool coefficients_nonnegative(const Problem& problem, const std::vector<double>& grid, double* witness = nullptr) {
  for (double t : grid)
    for (const Term& term : problem.terms)
      if (term.coefficient(t) < 0.0) {
        if (witness) *witness = t;
        return false;
      }
  return true;
}

// Per node and term: where the clamped window starts and the fixed factors.
struct WindowPlan {
  std::size_t cell = 0;   // window start lies in [t_cell, t_cell+1]
  double weight = 0.0;    // position of the start inside that cell
  double partial = 0.0;   // length from the start to t_cell+1
  double coefficient = 0.0;
  double factor = 1.0;    // prod B^{-1} over the window
  bool empty = true;
};

InequalityResult iterate(const Problem& problem, double t1, double horizon, const InequalityOptions& options,
                         const IterateObserver& observer, bool with_impulses) {
  problem.require_well_formed();
  if (options.grid_n < 100) throw InputError("grid_n must be at least 100");
  if (!(horizon > t1)) throw InputError("horizon must exceed t1");
  if (!(options.cap > 0.0) || options.max_iter < 1) throw InputError("cap and max_iter must be positive");

  std::optional<ImpulseProductIndex> index;
  if (with_impulses) {
    require_positive_multipliers(problem.schedule, horizon);
    index.emplace(problem.schedule, horizon, t1);
  }

  const std::size_t n = options.grid_n;
  const std::vector<double> nodes = uniform(t1, horizon, n);
  const double dt = (horizon - t1) / static_cast<double>(n);
  const std::size_t m = problem.terms.size();

  std::vector<WindowPlan> plan((n + 1) * m);
  std::vector<double> widest(m, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = nodes[i];
    for (std::size_t k = 0; k < m; ++k) {
      const Term& term = problem.terms[k];
      WindowPlan& p = plan[i * m + k];
      p.coefficient = std::max(term.coefficient(t), 0.0);
      double a = std::clamp(term.delay.unchecked(t), t1, t);
      if (index) {
        a = std::min(index->snap_lower(a), t);
        p.factor = index->inverse_product(a, t);
      }
      widest[k] = std::max(widest[k], t - a);
      if (a >= t) continue;
      p.empty = false;
      auto cell = static_cast<std::size_t>(std::floor((a - t1) / dt));
      cell = std::min(cell, i - 1);
      p.cell = cell;
      p.weight = std::clamp((a - nodes[cell]) / dt, 0.0, 1.0);
      p.partial = std::max(nodes[cell + 1] - a, 0.0);
    }
  }
  for (std::size_t k = 0; k < m; ++k)
    if (widest[k] > 0.0 && widest[k] < 2.0 * dt)
      throw GridTooCoarse("delay window of term " + std::to_string(k + 1) + " spans fewer than 2 grid cells");

  InequalityResult result;
  std::vector<double> u(n + 1, 0.0), next(n + 1, 0.0);
  double sup_u = 0.0;
  const double half = 0.5 * dt;
  for (int it = 1; it <= options.max_iter; ++it) {
    double sup_next = 0.0, change = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const WindowPlan& p = plan[i * m + k];
        if (p.coefficient == 0.0) continue;
        double integral = 0.0;
        if (!p.empty) {
          // Nonnegative weights only, so the map u -> next is monotone in
          // floating point as well.
          const std::size_t j = p.cell;
          const double ua = (1.0 - p.weight) * u[j] + p.weight * u[j + 1];
          double full = 0.0;
          for (std::size_t l = j + 1; l < i; ++l) full += u[l] + u[l + 1];
          integral = 0.5 * p.partial * (ua + u[j + 1]) + half * full;
        }
        const double term = p.coefficient * std::exp(integral);
        acc += with_impulses ? term * p.factor : term;
      }
      next[i] = acc;
      sup_next = std::max(sup_next, acc);
      change = std::max(change, std::fabs(acc - u[i]));
    }
    result.iterations = it;
    result.last_change = change;
    const bool converged = change <= options.tolerance * (1.0 + sup_u);
    u.swap(next);
    sup_u = sup_next;
    if (observer) observer(it, u);
    if (!std::isfinite(sup_u) || sup_u > options.cap) {
      result.outcome = InequalityOutcome::Diverged;
      break;
    }
    if (converged) {
      result.outcome = InequalityOutcome::Converged;
      break;
    }
  }
  result.sup = sup_u;
  result.u.nodes = nodes;
  result.u.values = std::move(u);
  return result;
}

// Cumulative integral of a piecewise smooth integrand on a grid that holds
// its known discontinuities. Each cell uses the right value at its start and
// the left limit at its end, so piecewise constant integrands are exact.
class SlidingIntegral {
 public:
  SlidingIntegral(const std::function<double(double)>& g, double a, double b, std::size_t cells,
                  std::vector<double> breakpoints) {
    const double dt = (b - a) / static_cast<double>(cells);
    const double snap = 1e-9 * dt;
    std::sort(breakpoints.begin(), breakpoints.end());
    std::size_t next_bp = 0;
    for (double t : uniform(a, b, cells)) {
      while (next_bp < breakpoints.size() && breakpoints[next_bp] < t - snap) {
        const double bp = breakpoints[next_bp++];
        if (!nodes_.empty() && bp > nodes_.back() + snap) nodes_.push_back(bp);
      }
      if (nodes_.empty() || t > nodes_.back() + snap)
        nodes_.push_back(t);
      else if (t == b)
        nodes_.back() = b;
    }
    const std::size_t n = nodes_.size();
    right_.resize(n);
    left_.resize(n);
    cumulative_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = nodes_[i];
      right_[i] = g(t);
      left_[i] = i == 0 ? right_[i] : g(std::max(t - 1e-11 * (1.0 + std::fabs(t)), nodes_[i - 1]));
      if (i > 0) cumulative_[i] = cumulative_[i - 1] + 0.5 * (right_[i - 1] + left_[i]) * (t - nodes_[i - 1]);
    }
  }

  const std::vector<double>& nodes() const { return nodes_; }

  double cumulative(double t) const {
    if (t <= nodes_.front()) return 0.0;
    if (t >= nodes_.back()) return cumulative_.back();
    const auto j = static_cast<std::size_t>(std::upper_bound(nodes_.begin(), nodes_.end(), t) - nodes_.begin()) - 1;
    const double len = t - nodes_[j];
    if (len == 0.0) return cumulative_[j];
    const double w = len / (nodes_[j + 1] - nodes_[j]);
    const double gt = right_[j] + w * (left_[j + 1] - right_[j]);
    return cumulative_[j] + 0.5 * (right_[j] + gt) * len;
  }

  double window(double a, double b) const { return cumulative(b) - cumulative(a); }

 private:
  std::vector<double> nodes_, right_, left_, cumulative_;
};

// Pointwise min / max of the delays, clamped into [t0, t].
double lower_delay(const Problem& p, double t, double t0) {
  double h = std::numeric_limits<double>::infinity();
  for (const Term& term : p.terms) h = std::min(h, term.delay.unchecked(t));
  return std::clamp(h, t0, t);
}

double upper_delay(const Problem& p, double t, double t0) {
  double h = -std::numeric_limits<double>::infinity();
  for (const Term& term : p.terms) h = std::max(h, term.delay.unchecked(t));
  return std::clamp(h, t0, t);
}

std::vector<NamedValue> prefixed(const std::string& prefix, const std::vector<NamedValue>& values) {
  std::vector<NamedValue> out;
  for (const NamedValue& v : values) out.push_back({prefix + v.name, v.value});
  return out;
}

void append(std::vector<NamedValue>& to, const std::vector<NamedValue>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

double sample_tolerance(double t) { return 1e-12 * (1.0 + std::fabs(t)); }

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NonOscillationCertified:
      return "NonOscillationCertified";
    case Verdict::OscillationCertified:
      return "OscillationCertified";
    case Verdict::Inconclusive:
      break;
  }
  return "Inconclusive";
}

std::optional<double> CriterionReport::evidence_value(const std::string& name) const {
  for (const NamedValue& v : evidence)
    if (v.name == name) return v.value;
  return std::nullopt;
}

std::string to_key_value(const CriterionReport& report) {
  std::ostringstream os;
  os << "theorem=" << report.theorem << '\n' << "verdict=" << to_string(report.verdict) << '\n';
  os << "horizon_conditional=" << (report.horizon_conditional ? "true" : "false") << '\n';
  for (const NamedValue& v : report.evidence) os << "evidence." << v.name << '=' << format_real(v.value) << '\n';
  for (const NamedValue& v : report.parameters) os << "parameter." << v.name << '=' << format_real(v.value) << '\n';
  for (const std::string& note : report.notes) os << "note=" << note << '\n';
  return os.str();
}

std::string csv_header() { return "id,theorem,verdict,evidence"; }

std::string to_csv_row(const std::string& problem_id, const CriterionReport& report) {
  std::string row = problem_id + ',' + report.theorem + ',' + to_string(report.verdict) + ',';
  for (std::size_t i = 0; i < report.evidence.size(); ++i) {
    if (i) row += ';';
    row += report.evidence[i].name + '=' + format_real(report.evidence[i].value);
  }
  return row;
}

double GridFunction::operator()(double t) const {
  if (nodes.empty()) return 0.0;
  if (t <= nodes.front()) return values.front();
  if (t >= nodes.back()) return values.back();
  const auto j = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin()) - 1;
  const double w = (t - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return (1.0 - w) * values[j] + w * values[j + 1];
}

double GridFunction::integral(double a, double b) const {
  if (nodes.size() < 2 || b <= a) return 0.0;
  a = std::max(a, nodes.front());
  b = std::min(b, nodes.back());
  double acc = 0.0;
  double left = a;
  auto j = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
  for (; j < nodes.size() && nodes[j] < b; ++j) {
    acc += 0.5 * ((*this)(left) + values[j]) * (nodes[j] - left);
    left = nodes[j];
  }
  acc += 0.5 * ((*this)(left) + (*this)(b)) * (b - left);
  return acc;
}

InequalityResult solve_inequality(const Problem& problem, double t1, double horizon, const InequalityOptions& options,
                                  const IterateObserver& observer) {
  return iterate(problem, t1, horizon, options, observer, true);
}

InequalityResult solve_inequality_impulse_free(const Problem& problem, double t1, double horizon,
                                               const InequalityOptions& options, const IterateObserver& observer) {
  return iterate(problem, t1, horizon, options, observer, false);
}

CriterionReport report_inequality(const Problem& problem, double t1, double horizon,
                                  const InequalityOptions& options) {
  const InequalityResult r = solve_inequality(problem, t1, horizon, options);
  CriterionReport report;
  const bool nonnegative = coefficients_nonnegative(problem, r.u.nodes);
  report.theorem = nonnegative ? "T1.3" : "T2.3";
  report.horizon_conditional = true;
  report.evidence = {{"iterations", static_cast<double>(r.iterations)},
                     {"sup_u", r.sup},
                     {"last_change", r.last_change}};
  report.parameters = {{"t1", t1},
                       {"horizon", horizon},
                       {"grid_n", static_cast<double>(options.grid_n)},
                       {"max_iter", static_cast<double>(options.max_iter)},
                       {"cap", options.cap},
                       {"tolerance", options.tolerance}};
  if (!r.converged()) {
    report.notes.push_back(r.outcome == InequalityOutcome::Diverged ? "iteration exceeded the cap"
                                                                    : "iteration limit reached");
    return report;
  }
  // Compare the last quarter with the one before it.
  const std::size_t n = r.u.values.size();
  const auto q = n / 4;
  const double tail = *std::max_element(r.u.values.end() - static_cast<std::ptrdiff_t>(q), r.u.values.end());
  const double before = *std::max_element(r.u.values.end() - static_cast<std::ptrdiff_t>(2 * q),
                                          r.u.values.end() - static_cast<std::ptrdiff_t>(q));
  const double growth = before > 0.0 ? tail / before - 1.0 : (tail > 0.0 ? 1.0 : 0.0);
  report.evidence.push_back({"tail_growth", growth});
  report.parameters.push_back({"tail_growth_limit", kTailGrowthLimit});
  if (growth > kTailGrowthLimit) {
    report.notes.push_back("fixed point still growing on the tail");
    return report;
  }
  report.verdict = Verdict::NonOscillationCertified;
  return report;
}

CriterionReport check_theorem3(const Problem& problem, double t0, double horizon, const SlidingOptions& options) {
  problem.require_well_formed();
  if (!(horizon > t0)) throw InputError("horizon must exceed t0");
  require_positive_multipliers(problem.schedule, horizon);
  const TransformedProblem tr = remove_impulses(problem, horizon, t0);
  const ImpulseProductIndex& index = *tr.product_index;

  CriterionReport report;
  report.theorem = "T3";
  report.parameters = {{"t0", t0}, {"horizon", horizon}, {"grid_n", static_cast<double>(options.grid_n)}};

  // T3.1
  double max_coefficient = -std::numeric_limits<double>::infinity();
  for (double t : uniform(t0, horizon, options.grid_n))
    for (const Term& term : problem.terms) max_coefficient = std::max(max_coefficient, term.coefficient(t));
  report.evidence.push_back({"max_coefficient", max_coefficient});

  // T3.2: positive parts of the impulse-free coefficients over the widest window.
  const SlidingIntegral with_products(
      [&](double s) {
        double acc = 0.0;
        for (const Term& term : tr.base.terms) acc += std::max(term.coefficient(s), 0.0);
        return acc;
      },
      t0, horizon, options.grid_n, tr.base.breakpoints);
  // T3.3: positive parts of the raw coefficients.
  const SlidingIntegral raw(
      [&](double s) {
        double acc = 0.0;
        for (const Term& term : problem.terms) acc += std::max(term.coefficient(s), 0.0);
        return acc;
      },
      t0, horizon, options.grid_n, problem.breakpoints);

  double sup_integral = 0.0, sup_at = t0;
  double worst_margin = -std::numeric_limits<double>::infinity(), worst_at = t0;
  bool cond3 = true;
  for (double t : with_products.nodes()) {
    const double lo = index.snap_lower(lower_delay(problem, t, t0));
    const double i2 = with_products.window(std::min(lo, t), t);
    if (i2 > sup_integral) sup_integral = i2, sup_at = t;
  }
  for (double t : raw.nodes()) {
    const double lo = std::min(index.snap_lower(lower_delay(problem, t, t0)), t);
    const double lhs = raw.window(lo, t);
    const double rhs = kInvE * (1.0 + index.log_sum_small_multipliers(lo, t));
    if (lhs - rhs > worst_margin) worst_margin = lhs - rhs, worst_at = t;
    if (!at_most(lhs, rhs)) cond3 = false;
  }
  report.evidence.push_back({"sup_integral", sup_integral});
  report.evidence.push_back({"sup_integral_at", sup_at});
  report.evidence.push_back({"threshold", kInvE});
  report.evidence.push_back({"margin_T3.2", kInvE - sup_integral});
  report.evidence.push_back({"worst_excess_T3.3", worst_margin});
  report.evidence.push_back({"worst_excess_T3.3_at", worst_at});

  if (max_coefficient <= 0.0) {
    report.theorem = "T3.1";
    report.verdict = Verdict::NonOscillationCertified;
  } else if (at_most(sup_integral, kInvE)) {
    report.theorem = "T3.2";
    report.verdict = Verdict::NonOscillationCertified;
  } else if (cond3) {
    report.theorem = "T3.3";
    report.verdict = Verdict::NonOscillationCertified;
  }
  return report;
}

CriterionReport check_theorem8(const Problem& problem, double horizon, const SlidingOptions& options) {
  problem.require_well_formed();
  const double t0 = problem.t0;
  if (!(horizon > t0)) throw InputError("horizon must exceed t0");
  if (!(options.tail_fraction > 0.0 && options.tail_fraction <= 1.0))
    throw InputError("tail_fraction must lie in (0, 1]");
  require_positive_multipliers(problem.schedule, horizon);

  CriterionReport report;
  report.theorem = "T8";
  report.horizon_conditional = true;
  const double tail_start = t0 + (1.0 - options.tail_fraction) * (horizon - t0);
  report.parameters = {{"horizon", horizon},
                       {"tail_start", tail_start},
                       {"tail_fraction", options.tail_fraction},
                       {"margin", options.margin},
                       {"grid_n", static_cast<double>(options.grid_n)}};

  double witness = 0.0;
  if (!coefficients_nonnegative(problem, uniform(t0, horizon, options.grid_n), &witness)) {
    report.evidence.push_back({"negative_coefficient_at", witness});
    report.notes.push_back("coefficients must be nonnegative");
    return report;
  }

  const TransformedProblem tr = remove_impulses(problem, horizon, t0);
  const SlidingIntegral integral(
      [&](double s) {
        double acc = 0.0;
        for (const Term& term : tr.base.terms) acc += term.coefficient(s);
        return acc;
      },
      t0, horizon, options.grid_n, tr.base.breakpoints);

  const ImpulseProductIndex& index = *tr.product_index;
  double liminf = std::numeric_limits<double>::infinity();
  double limsup = -std::numeric_limits<double>::infinity();
  for (double t : integral.nodes()) {
    if (t < tail_start) continue;
    const double lo = std::min(index.snap_lower(lower_delay(problem, t, t0)), t);
    const double hi = std::min(index.snap_lower(upper_delay(problem, t, t0)), t);
    liminf = std::min(liminf, integral.window(lo, t));
    limsup = std::max(limsup, integral.window(hi, t));
  }
  report.evidence = {{"liminf_I1", liminf},
                     {"limsup_I2", limsup},
                     {"margin_T8.1", liminf - kInvE},
                     {"margin_T8.2", limsup - 1.0}};
  std::ostringstream window;
  window << "estimates over the tail window [" << format_real(tail_start) << ", " << format_real(horizon) << "]";
  report.notes.push_back(window.str());
  if (liminf > kInvE + options.margin) {
    report.theorem = "T8.1";
    report.verdict = Verdict::OscillationCertified;
  } else if (limsup > 1.0 + options.margin) {
    report.theorem = "T8.2";
    report.verdict = Verdict::OscillationCertified;
  }
  return report;
}

CriterionReport compare(const Problem& problem, const Problem& tilde, double horizon, const CompareOptions& options) {
  problem.require_well_formed();
  tilde.require_well_formed();
  if (problem.terms.size() != tilde.terms.size())
    throw HypothesisNotMet("the problems have different numbers of delay terms", std::nullopt);

  const std::vector<Impulse> base_impulses = problem.schedule.materialize(horizon);
  const std::vector<Impulse> tilde_impulses = tilde.schedule.materialize(horizon);
  const std::size_t shared = std::min(base_impulses.size(), tilde_impulses.size());
  for (std::size_t j = 0; j < shared; ++j)
    if (base_impulses[j].time != tilde_impulses[j].time)
      throw HypothesisNotMet("impulse times differ at index " + std::to_string(j + 1), base_impulses[j].time, j + 1);
  if (base_impulses.size() != tilde_impulses.size())
    throw HypothesisNotMet("impulse counts differ", std::nullopt, shared + 1);

  bool tilde_b_at_most_one = true;
  std::optional<std::size_t> first_large_tilde_b;
  for (std::size_t j = 0; j < shared; ++j) {
    const double b = base_impulses[j].multiplier, bt = tilde_impulses[j].multiplier;
    if (!(b > 0.0)) throw HypothesisNotMet("B_j must be positive", base_impulses[j].time, j + 1);
    if (b > bt) throw HypothesisNotMet("B_j <= B~_j fails", base_impulses[j].time, j + 1);
    if (bt > 1.0 && tilde_b_at_most_one) {
      tilde_b_at_most_one = false;
      first_large_tilde_b = j + 1;
    }
  }

  const std::vector<double> grid = uniform(problem.t0, horizon, options.samples);
  bool same_delays = true, ordered_delays = true;
  std::optional<double> first_disorder;
  for (double t : grid) {
    for (std::size_t k = 0; k < problem.terms.size(); ++k) {
      const double a = problem.terms[k].coefficient(t), at = tilde.terms[k].coefficient(t);
      if (at < 0.0) throw HypothesisNotMet("A~_" + std::to_string(k + 1) + " is negative", t);
      if (a < 0.0) throw HypothesisNotMet("A_" + std::to_string(k + 1) + " is negative", t);
      if (a < at) throw HypothesisNotMet("A_" + std::to_string(k + 1) + " >= A~_" + std::to_string(k + 1) + " fails", t);
      const double h = problem.terms[k].delay.unchecked(t), ht = tilde.terms[k].delay.unchecked(t);
      if (std::fabs(h - ht) > sample_tolerance(t)) same_delays = false;
      if (h > ht + sample_tolerance(t) && ordered_delays) {
        ordered_delays = false;
        first_disorder = t;
      }
    }
  }
  if (!same_delays && !ordered_delays)
    throw HypothesisNotMet("h_k <= h~_k fails and the delays differ", first_disorder);
  if (!same_delays && !tilde_b_at_most_one)
    throw HypothesisNotMet("delays differ and B~_j <= 1 fails", tilde_impulses[*first_large_tilde_b - 1].time,
                           first_large_tilde_b);

  CriterionReport base = check_theorem3(problem, problem.t0, horizon, options.sliding);
  if (!base.decisive()) base = report_inequality(problem, problem.t0, horizon, options.inequality);

  CriterionReport report;
  report.theorem = "T4";
  report.horizon_conditional = base.horizon_conditional;
  report.evidence = prefixed("base.", base.evidence);
  report.evidence.push_back({"delay_case", same_delays ? 2.0 : 1.0});
  report.parameters = {{"horizon", horizon}, {"samples", static_cast<double>(options.samples)}};
  append(report.parameters, prefixed("base.", base.parameters));
  report.notes.push_back("base problem via " + base.theorem + ": " + to_string(base.verdict));
  if (base.verdict == Verdict::NonOscillationCertified) report.verdict = Verdict::NonOscillationCertified;
  return report;
}

CriterionReport compare_constant_bound(const Problem& problem, double horizon, const CompareOptions& options) {
  problem.require_well_formed();
  Problem base = problem;
  const std::vector<double> grid = uniform(problem.t0, horizon, options.samples);
  for (std::size_t k = 0; k < problem.terms.size(); ++k) {
    double sup_a = 0.0, sup_lag = 0.0;
    for (double t : grid) {
      sup_a = std::max(sup_a, problem.terms[k].coefficient(t));
      sup_lag = std::max(sup_lag, t - problem.terms[k].delay.unchecked(t));
    }
    base.terms[k] = {ScalarFn::constant(sup_a), DelayFn::constant_lag(sup_lag)};
  }
  base.breakpoints.clear();
  CriterionReport report = compare(base, problem, horizon, options);
  report.notes.push_back("constant-bound comparison");
  return report;
}

CriterionReport compare_without_impulses(const Problem& problem, double horizon, const CompareOptions& options) {
  Problem base = problem;
  base.schedule = problem.schedule.with_multiplier(1.0);
  CriterionReport report = compare(base, problem, horizon, options);
  report.notes.push_back("comparison with the impulse-free equation");
  return report;
}

CriterionReport certify_via_equivalence(const Problem& problem, double horizon, const CertifyOptions& options) {
  problem.require_well_formed();
  const double t1 = options.t1.value_or(problem.t0);
  CriterionReport report;
  report.theorem = "T7";
  report.horizon_conditional = true;
  report.parameters = {{"horizon", horizon}, {"t1", t1}};

  double witness = 0.0;
  if (!coefficients_nonnegative(problem, uniform(problem.t0, horizon, options.sliding.grid_n), &witness)) {
    require_positive_multipliers(problem.schedule, horizon);
    report.evidence.push_back({"negative_coefficient_at", witness});
    report.notes.push_back("coefficients must be nonnegative");
    return report;
  }
  const TransformedProblem tr = remove_impulses(problem, horizon, problem.t0);
  const CriterionReport fixed = report_inequality(tr.base, t1, horizon, options.inequality);
  append(report.evidence, prefixed("fixed_point.", fixed.evidence));
  if (fixed.verdict == Verdict::NonOscillationCertified) {
    report.verdict = Verdict::NonOscillationCertified;
    report.notes.push_back("impulse-free equation certified via fixed point");
    return report;
  }
  const CriterionReport osc = check_theorem8(tr.base, horizon, options.sliding);
  append(report.evidence, prefixed("oscillation.", osc.evidence));
  report.notes.insert(report.notes.end(), osc.notes.begin(), osc.notes.end());
  if (osc.verdict == Verdict::OscillationCertified) {
    report.verdict = Verdict::OscillationCertified;
    report.notes.push_back("impulse-free equation certified via " + osc.theorem);
  }
  return report;
}

Certification certify(const Problem& problem, double horizon, const CertifyOptions& options) {
  problem.require_well_formed();
  const double t1 = options.t1.value_or(problem.t0);
  Certification out;
  out.reports.push_back(report_inequality(problem, t1, horizon, options.inequality));
  out.reports.push_back(check_theorem3(problem, t1, horizon, options.sliding));
  out.reports.push_back(check_theorem8(problem, horizon, options.sliding));
  out.reports.push_back(certify_via_equivalence(problem, horizon, options));

  const CriterionReport* non_osc = nullptr;
  const CriterionReport* osc = nullptr;
  for (const CriterionReport& r : out.reports) {
    if (r.verdict == Verdict::NonOscillationCertified && !non_osc) non_osc = &r;
    if (r.verdict == Verdict::OscillationCertified && !osc) osc = &r;
  }
  if (non_osc && osc)
    throw InconsistentCertificates(non_osc->theorem + " certifies non-oscillation but " + osc->theorem +
                                   " certifies oscillation");

  for (std::size_t i : {1u, 2u, 0u, 3u}) {
    if (out.reports[i].decisive()) {
      out.headline = out.reports[i];
      return out;
    }
  }
  out.headline.theorem = "none";
  out.headline.notes.push_back("no criterion was decisive");
  return out;
}

}  // namespace idde
