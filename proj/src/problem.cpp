#include "idde/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "idde/error.hpp"

namespace idde {

ImpulseSchedule::ImpulseSchedule(std::vector<Impulse> impulses, std::optional<PeriodicTail> tail)
    : impulses_(std::move(impulses)), tail_(tail) {
  for (const Impulse& imp : impulses_) {
    if (!std::isfinite(imp.time)) throw InputError("impulse time must be finite");
    if (!std::isfinite(imp.multiplier) || imp.multiplier == 0.0)
      throw InputError("impulse multiplier at t=" + std::to_string(imp.time) + " must be finite and nonzero");
  }
  if (tail_) {
    if (!std::isfinite(tail_->start)) throw InputError("periodic tail start must be finite");
    if (!(tail_->period > 0.0) || !std::isfinite(tail_->period))
      throw InputError("periodic tail period must be positive");
    if (!std::isfinite(tail_->multiplier) || tail_->multiplier == 0.0)
      throw InputError("periodic tail multiplier must be finite and nonzero");
  }
}

std::vector<Impulse> ImpulseSchedule::materialize(double horizon) const {
  std::vector<Impulse> out;
  for (const Impulse& imp : impulses_)
    if (imp.time <= horizon) out.push_back(imp);
  if (tail_) {
    for (std::size_t n = 0;; ++n) {
      const double t = tail_->start + static_cast<double>(n) * tail_->period;
      if (t > horizon) break;
      out.push_back({t, tail_->multiplier});
    }
  }
  return out;
}

std::optional<std::size_t> ImpulseSchedule::first_order_violation(double horizon) const {
  const auto imps = materialize(horizon);
  for (std::size_t j = 1; j < imps.size(); ++j)
    if (!(imps[j - 1].time < imps[j].time)) return j;
  // The tail must also start after every explicit impulse, including those
  // beyond the horizon.
  if (tail_ && !impulses_.empty()) {
    const double last = std::max_element(impulses_.begin(), impulses_.end(), [](auto& a, auto& b) {
                          return a.time < b.time;
                        })->time;
    if (tail_->start <= last && tail_->start <= horizon) return impulses_.size();
  }
  return std::nullopt;
}

void ImpulseSchedule::require_ordered(double horizon) const {
  if (auto j = first_order_violation(horizon))
    throw InputError("impulse times must be strictly increasing (violation at index " + std::to_string(*j) + ")");
}

ImpulseSchedule ImpulseSchedule::with_multiplier(double multiplier) const {
  std::vector<Impulse> imps = impulses_;
  for (Impulse& imp : imps) imp.multiplier = multiplier;
  std::optional<PeriodicTail> tail = tail_;
  if (tail) tail->multiplier = multiplier;
  return ImpulseSchedule(std::move(imps), tail);
}

void Problem::require_well_formed() const {
  if (terms.empty()) throw InputError("problem needs at least one delay term");
  if (!std::isfinite(t0) || !std::isfinite(x0)) throw InputError("t0 and x0 must be finite");
}

const HypothesisCheck& ValidationReport::check(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return c;
  throw std::out_of_range("no hypothesis check " + id);
}

bool ValidationReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](auto& c) { return c.status == CheckStatus::Fail; });
}

namespace {

std::vector<double> sample_grid(double a, double b, std::size_t n) {
  n = std::max<std::size_t>(n, 2);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

}  // namespace

double history_start(const Problem& problem, double horizon, std::size_t grid_points) {
  double mu = problem.t0;
  for (double t : sample_grid(problem.t0, horizon, grid_points))
    for (const Term& term : problem.terms) mu = std::min(mu, term.delay.unchecked(t));
  return mu;
}

ValidationReport validate(const Problem& problem, double horizon, std::size_t grid_points) {
  if (!(horizon > problem.t0)) throw InputError("validation horizon must exceed t0");
  ValidationReport report;
  report.horizon = horizon;
  const auto grid = sample_grid(problem.t0, horizon, grid_points);

  HypothesisCheck a1{"a1", CheckStatus::Pass, std::nullopt, {}};
  if (auto j = problem.schedule.first_order_violation(horizon)) {
    const auto imps = problem.schedule.materialize(horizon);
    a1.status = CheckStatus::Fail;
    const double t = *j < imps.size() ? imps[*j].time : problem.schedule.tail()->start;
    const double prev = *j < imps.size() ? imps[*j - 1].time : t;
    a1.witness = {t, prev};
    a1.note = "impulse times not strictly increasing";
  }
  report.checks.push_back(a1);

  HypothesisCheck a2{"a2", CheckStatus::Pass, std::nullopt, {}};
  for (double t : grid) {
    double bad = 0.0;
    bool fail = false;
    for (const Term& term : problem.terms) {
      const double a = term.coefficient(t);
      if (!std::isfinite(a)) bad = a, fail = true;
    }
    const double f = problem.forcing(t);
    if (!std::isfinite(f)) bad = f, fail = true;
    if (fail) {
      a2.status = CheckStatus::Fail;
      a2.witness = {t, bad};
      a2.note = "coefficient or forcing not finite";
      break;
    }
  }
  report.checks.push_back(a2);

  HypothesisCheck a3{"a3", CheckStatus::Pass, std::nullopt, {}};
  for (double t : grid) {
    for (const Term& term : problem.terms) {
      const double h = term.delay.unchecked(t);
      if (!(h <= t)) {
        a3.status = CheckStatus::Fail;
        a3.witness = {t, h};
        a3.note = "delayed argument exceeds t";
        break;
      }
    }
    if (a3.status == CheckStatus::Fail) break;
  }
  report.checks.push_back(a3);

  // a5 first: the history interval for a4 depends on it.
  HypothesisCheck a5{"a5", CheckStatus::Pass, std::nullopt, {}};
  double mu = problem.t0;
  for (double t : grid) {
    for (const Term& term : problem.terms) {
      const double h = term.delay.unchecked(t);
      if (!std::isfinite(h)) {
        a5.status = CheckStatus::Fail;
        a5.witness = {t, h};
        a5.note = "delayed argument unbounded";
      } else {
        mu = std::min(mu, h);
      }
    }
    if (a5.status == CheckStatus::Fail) break;
  }
  report.history_start = mu;
  if (a5.status != CheckStatus::Fail) {
    // s' is the first grid point after which every delayed argument stays >= t0.
    std::optional<std::size_t> settle;
    for (std::size_t i = grid.size(); i-- > 0;) {
      bool ok = true;
      for (const Term& term : problem.terms) ok = ok && term.delay.unchecked(grid[i]) >= problem.t0;
      if (!ok) break;
      settle = i;
    }
    if (settle && *settle + 1 < grid.size()) {
      report.settle_time = grid[*settle];
    } else {
      a5.status = CheckStatus::NotFound;
      a5.note = "s' not found within horizon";
    }
  }

  HypothesisCheck a4{"a4", CheckStatus::Pass, std::nullopt, {}};
  if (mu < problem.t0) {
    for (double xi : sample_grid(mu, problem.t0, grid_points)) {
      if (xi >= problem.t0) break;
      const double v = problem.phi(xi);
      if (!std::isfinite(v)) {
        a4.status = CheckStatus::Fail;
        a4.witness = {xi, v};
        a4.note = "initial function not finite";
        break;
      }
    }
  }
  report.checks.push_back(a4);
  report.checks.push_back(a5);
  return report;
}

Problem cutoff(const Problem& problem, double s) {
  Problem out = problem;
  for (Term& term : out.terms) {
    term.coefficient = term.coefficient.cutoff(s);
    term.delay = term.delay.cutoff(s);
  }
  return out;
}

}  // namespace idde
