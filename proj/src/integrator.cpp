#include "idde/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <variant>

#include "idde/error.hpp"

namespace idde {
namespace {

struct JumpSpec {
  double multiplier = 1.0;
  double alpha = 0.0;
};

// Step grid: uniform from t0 with impulse times and extra breaking points
// merged in. A uniform interior node closer than 1e-9*step to a pinned time
// is replaced by it.
std::vector<double> step_grid(double t0, double t_end, double step, const std::map<double, JumpSpec>& jumps,
                              const std::vector<double>& extra) {
  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil((t_end - t0) / step - 1e-9)));
  struct Candidate {
    double t;
    bool pinned;  // t0, t_end or an impulse time
  };
  std::vector<Candidate> all;
  all.reserve(n_steps + 1 + jumps.size());
  all.push_back({t0, true});
  for (std::size_t n = 1; n < n_steps; ++n) all.push_back({t0 + static_cast<double>(n) * step, false});
  all.push_back({t_end, true});
  for (const auto& [t, spec] : jumps) all.push_back({t, true});
  for (double t : extra)
    if (t > t0 && t < t_end) all.push_back({t, true});
  std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return a.t < b.t; });

  const double snap = 1e-9 * step;
  std::vector<Candidate> merged;
  merged.reserve(all.size());
  for (const Candidate& c : all) {
    if (!merged.empty()) {
      Candidate& back = merged.back();
      if (c.t == back.t) {
        back.pinned = back.pinned || c.pinned;
        continue;
      }
      if (c.t - back.t <= snap && back.pinned != c.pinned) {
        if (c.pinned) back = c;
        continue;
      }
    }
    merged.push_back(c);
  }
  std::vector<double> grid;
  grid.reserve(merged.size());
  for (const Candidate& c : merged) grid.push_back(c.t);
  return grid;
}

class MethodOfSteps {
 public:
  MethodOfSteps(const std::vector<Term>& terms, std::function<double(double)> forcing,
                std::function<double(double)> history, double t0)
      : terms_(terms), forcing_(std::move(forcing)), history_(std::move(history)), t0_(t0) {}

  Trajectory run(double x0, double t_end, double step, const std::map<double, JumpSpec>& jumps,
                 const std::vector<double>& pinned) {
    check_lags(t_end, step);
    snap_ = 1e-9 * step;
    std::vector<double> extra = breaking_points(t_end, jumps);
    extra.insert(extra.end(), pinned.begin(), pinned.end());
    const std::vector<double> grid = step_grid(t0_, t_end, step, jumps, extra);
    const std::size_t n = grid.size();
    for (auto* v : {&data_.nodes, &data_.left, &data_.right, &data_.dleft, &data_.dright}) v->reserve(n);

    data_.nodes.push_back(t0_);
    data_.left.push_back(x0);
    data_.right.push_back(x0);
    data_.dleft.push_back(0.0);
    data_.dright.push_back(0.0);
    const double d0 = rhs(t0_, x0);
    data_.dleft.back() = d0;
    data_.dright.back() = d0;

    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double tn = grid[i];
      const double t1 = grid[i + 1];
      const double h = t1 - tn;
      const double xn = data_.right.back();
      xn_ = xn;
      const double k1 = data_.dright.back();
      const double k2 = rhs(tn + 0.5 * h, xn + 0.5 * h * k1);
      const double k3 = rhs(tn + 0.5 * h, xn + 0.5 * h * k2);
      // Stages at the step end see the history from inside the step.
      const double k4 = rhs(t1, xn + h * k3, Side::Left);
      const double x_left = xn + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!std::isfinite(x_left)) throw NonFiniteState(t1);
      const double d_left = rhs(t1, x_left, Side::Left);

      data_.nodes.push_back(t1);
      data_.left.push_back(x_left);
      data_.dleft.push_back(d_left);
      auto jump = jumps.find(t1);
      if (jump != jumps.end()) {
        const double x_right = jump->second.multiplier * x_left + jump->second.alpha;
        if (!std::isfinite(x_right)) throw NonFiniteState(t1);
        data_.right.push_back(x_right);
        data_.dright.push_back(0.0);
        data_.dright.back() = rhs(t1, x_right);
        data_.jumps.push_back({t1, x_left, x_right});
      } else {
        // The right derivative differs from d_left when a delayed argument
        // sits on a history discontinuity.
        data_.right.push_back(x_left);
        data_.dright.push_back(0.0);
        data_.dright.back() = rhs(t1, x_left);
      }
    }
    return Trajectory(std::move(data_));
  }

 private:
  // Right: right-continuous history lookups. Left: limits from below at
  // history discontinuities (t0 and jump times).
  enum class Side { Right, Left };

  // Left-side stages also take coefficients and forcing just below t, so a
  // step ending on a coefficient discontinuity integrates the left piece.
  double rhs(double t, double x, Side side = Side::Right) {
    const double tc = side == Side::Left ? t - std::max(snap_, 1e-11 * (1.0 + std::fabs(t))) : t;
    double acc = forcing_ ? forcing_(tc) : 0.0;
    for (const Term& term : terms_) {
      const double a = term.coefficient(tc);
      if (a == 0.0) continue;
      acc -= a * lookup(term.delay(t), t, x, side);
    }
    return acc;
  }

  // Delayed arguments within `snap_` of a node are treated as the node, so
  // round-off in h(t) cannot flip the side of a history discontinuity.
  double lookup(double xi, double t, double x_cur, Side side) {
    if (xi >= t) return x_cur;
    if (side == Side::Right) {
      if (xi < t0_ - snap_) return history(xi);
      xi = std::max(xi, t0_);
    } else if (xi <= t0_ + snap_) {
      return history(std::min(xi, t0_));
    }
    const double tn = data_.nodes.back();
    if (xi <= tn) return dense(xi, side);
    if (side == Side::Right && xi - tn <= snap_) return data_.right.back();
    if (!warned_inside_step_) {
      data_.warnings.push_back("delayed argument inside the current step near t=" + std::to_string(t) +
                               "; using in-step linear interpolation");
      warned_inside_step_ = true;
    }
    return xn_ + (xi - tn) / (t - tn) * (x_cur - xn_);
  }

  double history(double xi) const { return history_ ? history_(xi) : 0.0; }

  double dense(double xi, Side side) const {
    const auto& nodes = data_.nodes;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), xi);
    const auto i = static_cast<std::size_t>(it - nodes.begin()) - 1;
    if (side == Side::Right) {
      if (i + 1 < nodes.size() && nodes[i + 1] - xi <= snap_) return data_.right[i + 1];
      if (xi == nodes[i]) return data_.right[i];
    } else if (xi - nodes[i] <= snap_) {
      return data_.left[i];
    }
    if (i + 1 == nodes.size()) return data_.right[i];
    const double a = nodes[i];
    const double hseg = nodes[i + 1] - a;
    const double s = (xi - a) / hseg;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * data_.right[i] + (s3 - 2 * s2 + s) * hseg * data_.dright[i] +
           (-2 * s3 + 3 * s2) * data_.left[i + 1] + (s3 - s2) * hseg * data_.dleft[i + 1];
  }

  // First-level derivative discontinuities of constant-lag terms: the lag
  // carried forward from t0 and from every jump.
  std::vector<double> breaking_points(double t_end, const std::map<double, JumpSpec>& jumps) const {
    std::vector<double> out;
    for (const Term& term : terms_) {
      const auto* lag = std::get_if<DelayFn::ConstantLag>(&term.delay.rep());
      if (!lag || lag->lag <= 0.0) continue;
      if (t0_ + lag->lag < t_end) out.push_back(t0_ + lag->lag);
      for (const auto& [tau, spec] : jumps)
        if (tau + lag->lag < t_end) out.push_back(tau + lag->lag);
    }
    return out;
  }

  void check_lags(double t_end, double step) {
    constexpr std::size_t samples = 10000;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      double min_lag = std::numeric_limits<double>::infinity();
      bool vanishing = false;
      for (std::size_t i = 0; i <= samples; ++i) {
        const double t = t0_ + (t_end - t0_) * static_cast<double>(i) / samples;
        const double lag = t - terms_[k].delay(t);
        if (lag <= 0.0)
          vanishing = true;
        else
          min_lag = std::min(min_lag, lag);
      }
      if (vanishing) {
        data_.warnings.push_back("delay term " + std::to_string(k + 1) + " has a vanishing lag");
      } else if (min_lag < step) {
        throw StepTooLarge("step " + std::to_string(step) + " exceeds minimum lag " + std::to_string(min_lag) +
                           " of delay term " + std::to_string(k + 1));
      }
    }
  }

  const std::vector<Term>& terms_;
  std::function<double(double)> forcing_;
  std::function<double(double)> history_;
  double t0_;
  double snap_ = 0.0;
  double xn_ = 0.0;
  bool warned_inside_step_ = false;
  TrajectoryData data_;
};

std::map<double, JumpSpec> collect_jumps(const ImpulseSchedule& schedule, double after, double t_end,
                                         const std::vector<JumpOffset>& offsets) {
  schedule.require_ordered(t_end);
  std::map<double, JumpSpec> jumps;
  for (const Impulse& imp : schedule.materialize(t_end))
    if (imp.time > after) jumps[imp.time].multiplier = imp.multiplier;
  for (const JumpOffset& off : offsets)
    if (off.time > after && off.time <= t_end) jumps[off.time].alpha += off.alpha;
  return jumps;
}

void check_step(double t_start, double t_end, double step, bool allow_empty = false) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("step must be positive");
  if (!(t_end > t_start) && !(allow_empty && t_end == t_start))
    throw InputError("integration end must exceed the initial point");
}

}  // namespace

Trajectory solve(const Problem& problem, double t_end, double step, const std::vector<JumpOffset>& offsets) {
  problem.require_well_formed();
  check_step(problem.t0, t_end, step);
  const auto jumps = collect_jumps(problem.schedule, problem.t0, t_end, offsets);
  ScalarFn forcing = problem.forcing;
  ScalarFn phi = problem.phi;
  MethodOfSteps engine(problem.terms, [forcing](double t) { return forcing(t); },
                       [phi](double xi) { return phi(xi); }, problem.t0);
  return engine.run(problem.x0, t_end, step, jumps, problem.breakpoints);
}

FundamentalSlice fundamental(const Problem& problem, double s, double t_end, double step) {
  problem.require_well_formed();
  if (s < problem.t0) throw InputError("fundamental slice needs s >= t0");
  check_step(s, t_end, step, true);
  if (t_end == s) return FundamentalSlice(s, Trajectory(TrajectoryData{{s}, {1.0}, {1.0}, {0.0}, {0.0}, {}, {}}));
  const auto jumps = collect_jumps(problem.schedule, s, t_end, {});
  MethodOfSteps engine(problem.terms, nullptr, nullptr, s);
  return FundamentalSlice(s, engine.run(1.0, t_end, step, jumps, problem.breakpoints));
}

std::vector<FundamentalSlice> fundamental_grid(const Problem& problem, const std::vector<double>& s_values,
                                               double t_end, double step) {
  std::vector<FundamentalSlice> out;
  out.reserve(s_values.size());
  for (double s : s_values) out.push_back(fundamental(problem, s, t_end, step));
  return out;
}

double representation_eval(const Problem& problem, const std::vector<FundamentalSlice>& slices, double t,
                           const std::vector<JumpOffset>& alphas) {
  const double t0 = problem.t0;
  auto same = [](double a, double b) { return std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(b)); };

  // Abscissae in [t0, t], sorted, with X(t, s) from the right.
  struct Node {
    double s;
    double x_right;
    double x_left;
  };
  std::vector<Node> nodes;
  const FundamentalSlice* at_t0 = nullptr;
  for (const FundamentalSlice& sl : slices) {
    if (same(sl.s(), t0)) at_t0 = &sl;
    if (sl.s() >= t0 - 1e-12 && sl.s() <= t && !same(sl.s(), t)) {
      const double x = sl(t);
      nodes.push_back({sl.s(), x, x});
    }
  }
  if (!at_t0) throw MissingSlice(t0);
  nodes.push_back({t, 1.0, 1.0});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.s < b.s; });
  nodes.erase(std::unique(nodes.begin(), nodes.end(), [&](const Node& a, const Node& b) { return same(a.s, b.s); }),
              nodes.end());

  auto find_node = [&](double s) -> Node* {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), s - 1e-12 * (1.0 + std::fabs(s)),
                               [](const Node& n, double v) { return n.s < v; });
    if (it == nodes.end() || !same(it->s, s)) return nullptr;
    return &*it;
  };

  // X(t, tau - 0) = B X(t, tau): the slice started just before tau sees the jump.
  for (const Impulse& imp : problem.schedule.materialize(t)) {
    if (imp.time <= t0) continue;
    Node* n = find_node(imp.time);
    if (!n) throw MissingSlice(imp.time);
    n->x_left = imp.multiplier * n->x_right;
  }

  double value = (*at_t0)(t)*problem.x0;

  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double sa = nodes[i].s;
    const double sb = nodes[i + 1].s;
    const double mid = 0.5 * (sa + sb);
    auto integrand = [&](double s) {
      double g = problem.forcing(s);
      for (const Term& term : problem.terms) {
        // The initial-function term is active on the whole interval or not
        // at all, decided at the midpoint.
        if (term.delay(mid) < t0) g -= term.coefficient(s) * problem.phi(term.delay(s));
      }
      return g;
    };
    value += 0.5 * (sb - sa) * (nodes[i].x_right * integrand(sa) + nodes[i + 1].x_left * integrand(sb));
  }

  for (const JumpOffset& a : alphas) {
    if (a.time <= t0 || a.time > t) continue;
    const Node* n = find_node(a.time);
    if (!n) throw MissingSlice(a.time);
    value += n->x_right * a.alpha;
  }
  return value;
}

std::vector<double> sign_changes(const Trajectory& traj, double t_from) {
  std::vector<double> out;
  const auto& nodes = traj.nodes();
  const auto& left = traj.left_values();
  const auto& right = traj.right_values();
  if (nodes.size() < 2) return out;
  t_from = std::max(t_from, nodes.front());

  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  int prev_sign = 0;
  double prev_t = t_from;

  auto bisect = [&](double lo, double hi) {
    while (hi - lo > 5e-11) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sgn(traj.value(mid)) == prev_sign)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  // `across_jump` marks the right value at a node following its left value.
  auto visit = [&](double t, double v, bool across_jump) {
    const int s = sgn(v);
    if (s == 0) return;
    if (prev_sign != 0 && s != prev_sign) out.push_back(across_jump && prev_t == t ? t : bisect(prev_t, t));
    prev_sign = s;
    prev_t = t;
  };

  auto first = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), t_from) - nodes.begin());
  first = first == 0 ? 0 : first - 1;
  visit(t_from, traj.value(t_from), false);
  for (std::size_t i = first; i + 1 < nodes.size(); ++i) {
    const double a = std::max(nodes[i], t_from);
    const double b = nodes[i + 1];
    for (int q = 1; q <= 3; ++q) {
      const double tq = a + (b - a) * q / 4.0;
      if (tq > a && tq < b) visit(tq, traj.segment_value(i, tq), false);
    }
    visit(b, left[i + 1], false);
    if (right[i + 1] != left[i + 1]) visit(b, right[i + 1], true);
  }
  return out;
}

}  // namespace idde
