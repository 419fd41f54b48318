#include "idde/functions.hpp"

#include <algorithm>
#include <cmath>

#include "idde/error.hpp"

namespace idde {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

ScalarFn ScalarFn::constant(double c) {
  if (!std::isfinite(c)) throw InputError("constant must be finite");
  return ScalarFn(Constant{c});
}

ScalarFn ScalarFn::sinusoid(double amplitude, double angular_freq, double phase, double offset) {
  if (!std::isfinite(amplitude) || !std::isfinite(angular_freq) || !std::isfinite(phase) ||
      !std::isfinite(offset))
    throw InputError("sinusoid parameters must be finite");
  return ScalarFn(Sinusoid{amplitude, angular_freq, phase, offset});
}

ScalarFn ScalarFn::table(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.empty() || breakpoints.size() != values.size())
    throw InputError("step table needs equally many (>= 1) breakpoints and values");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i - 1] < breakpoints[i])) throw InputError("step table breakpoints must ascend");
  for (double v : values)
    if (!std::isfinite(v)) throw InputError("step table values must be finite");
  return ScalarFn(StepTable{std::move(breakpoints), std::move(values)});
}

ScalarFn ScalarFn::expression(Expression e) { return ScalarFn(std::move(e)); }

ScalarFn ScalarFn::derived(std::function<double(double)> fn, std::string label) {
  return ScalarFn(Derived{std::make_shared<const std::function<double(double)>>(std::move(fn)),
                          std::move(label)});
}

double ScalarFn::operator()(double t) const {
  return std::visit(Overloaded{
                        [](const Constant& c) { return c.value; },
                        [t](const Sinusoid& s) {
                          return s.amplitude * std::sin(s.angular_freq * t + s.phase) + s.offset;
                        },
                        [t](const StepTable& tab) {
                          auto it = std::upper_bound(tab.breakpoints.begin(), tab.breakpoints.end(), t);
                          std::size_t i = it == tab.breakpoints.begin()
                                              ? 0
                                              : static_cast<std::size_t>(it - tab.breakpoints.begin()) - 1;
                          return tab.values[i];
                        },
                        [t](const Expression& e) { return e(t); },
                        [t](const Derived& d) { return (*d.fn)(t); },
                    },
                    rep_);
}

ScalarFn ScalarFn::cutoff(double s) const {
  ScalarFn inner = *this;
  return derived([inner, s](double t) { return t < s ? 0.0 : inner(t); }, family() + "^cutoff");
}

ScalarFn ScalarFn::scaled(double factor) const {
  if (const auto* c = std::get_if<Constant>(&rep_)) return constant(c->value * factor);
  if (const auto* s = std::get_if<Sinusoid>(&rep_))
    return sinusoid(s->amplitude * factor, s->angular_freq, s->phase, s->offset * factor);
  if (const auto* tab = std::get_if<StepTable>(&rep_)) {
    std::vector<double> v = tab->values;
    for (double& x : v) x *= factor;
    return table(tab->breakpoints, std::move(v));
  }
  ScalarFn inner = *this;
  return derived([inner, factor](double t) { return factor * inner(t); }, family() + "*scaled");
}

std::string ScalarFn::family() const {
  return std::visit(Overloaded{
                        [](const Constant&) { return std::string("constant"); },
                        [](const Sinusoid&) { return std::string("sinusoid"); },
                        [](const StepTable&) { return std::string("table"); },
                        [](const Expression&) { return std::string("expression"); },
                        [](const Derived& d) { return d.label; },
                    },
                    rep_);
}

DelayFn DelayFn::constant_lag(double lag) {
  if (!(lag >= 0.0) || !std::isfinite(lag)) throw InputError("constant lag must be finite and >= 0");
  return DelayFn(ConstantLag{lag});
}

DelayFn DelayFn::proportional(double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) throw InputError("proportional delay factor must lie in (0, 1]");
  return DelayFn(Proportional{factor});
}

DelayFn DelayFn::expression(Expression e) { return DelayFn(std::move(e)); }

DelayFn DelayFn::derived(std::function<double(double)> fn, std::string label) {
  return DelayFn(Derived{std::make_shared<const std::function<double(double)>>(std::move(fn)),
                         std::move(label)});
}

double DelayFn::unchecked(double t) const {
  return std::visit(Overloaded{
                        [t](const ConstantLag& c) { return t - c.lag; },
                        [t](const Proportional& p) { return p.factor * t; },
                        [t](const Expression& e) { return e(t); },
                        [t](const Derived& d) { return (*d.fn)(t); },
                    },
                    rep_);
}

double DelayFn::operator()(double t) const {
  const double h = unchecked(t);
  if (std::holds_alternative<Expression>(rep_) && h > t) throw DelayAdvanced(t, h);
  return h;
}

DelayFn DelayFn::cutoff(double s) const {
  DelayFn inner = *this;
  return derived([inner, s](double t) { return t < s ? s : inner.unchecked(t); }, family() + "^cutoff");
}

std::string DelayFn::family() const {
  return std::visit(Overloaded{
                        [](const ConstantLag&) { return std::string("constant_lag"); },
                        [](const Proportional&) { return std::string("proportional"); },
                        [](const Expression&) { return std::string("expression"); },
                        [](const Derived& d) { return d.label; },
                    },
                    rep_);
}

}  // namespace idde
