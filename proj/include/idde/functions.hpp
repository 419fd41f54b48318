#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "idde/expression.hpp"

namespace idde {

/// Real function of t drawn from a fixed set of families.
///
/// Constant, sinusoid, right-continuous step table and parsed expression are
/// the user-facing families. `Derived` wraps a closure and is produced by
/// engine transformations (cutoffs, impulse removal).
class ScalarFn {
 public:
  struct Constant {
    double value = 0.0;
  };
  /// amplitude * sin(angular_freq * t + phase) + offset
  struct Sinusoid {
    double amplitude = 0.0;
    double angular_freq = 0.0;
    double phase = 0.0;
    double offset = 0.0;
  };
  /// values[i] on [breakpoints[i], breakpoints[i+1]); values[0] also left of
  /// the first breakpoint.
  struct StepTable {
    std::vector<double> breakpoints;
    std::vector<double> values;
  };
  struct Derived {
    std::shared_ptr<const std::function<double(double)>> fn;
    std::string label;
  };

  ScalarFn() : rep_(Constant{0.0}) {}

  static ScalarFn constant(double c);
  static ScalarFn sinusoid(double amplitude, double angular_freq, double phase, double offset);
  /// Throws InputError when breakpoints are not strictly ascending or sizes differ.
  static ScalarFn table(std::vector<double> breakpoints, std::vector<double> values);
  static ScalarFn expression(Expression e);
  static ScalarFn parse(std::string_view text) { return expression(Expression::parse(text)); }
  static ScalarFn derived(std::function<double(double)> fn, std::string label);

  double operator()(double t) const;

  /// Zero for t < s, unchanged otherwise.
  ScalarFn cutoff(double s) const;
  ScalarFn scaled(double factor) const;

  std::string family() const;
  const std::variant<Constant, Sinusoid, StepTable, Expression, Derived>& rep() const { return rep_; }

 private:
  template <class T>
  explicit ScalarFn(T rep) : rep_(std::move(rep)) {}
  std::variant<Constant, Sinusoid, StepTable, Expression, Derived> rep_;
};

/// Delayed argument h(t) with h(t) <= t.
class DelayFn {
 public:
  /// h(t) = t - lag
  struct ConstantLag {
    double lag = 0.0;
  };
  /// h(t) = factor * t
  struct Proportional {
    double factor = 1.0;
  };
  /// Closure produced by transformations; not checked against h(t) <= t
  /// (a cutoff delay h^s(t) = s exceeds t for t < s).
  struct Derived {
    std::shared_ptr<const std::function<double(double)>> fn;
    std::string label;
  };

  DelayFn() : rep_(ConstantLag{0.0}) {}

  /// Throws InputError for a negative lag.
  static DelayFn constant_lag(double lag);
  /// Throws InputError unless 0 < factor <= 1.
  static DelayFn proportional(double factor);
  static DelayFn expression(Expression e);
  static DelayFn parse(std::string_view text) { return expression(Expression::parse(text)); }
  static DelayFn derived(std::function<double(double)> fn, std::string label);

  /// Checked evaluation; an expression delay with h(t) > t throws DelayAdvanced.
  double operator()(double t) const;
  double unchecked(double t) const;

  /// h(t) for t >= s, s otherwise.
  DelayFn cutoff(double s) const;

  std::string family() const;
  const std::variant<ConstantLag, Proportional, Expression, Derived>& rep() const { return rep_; }

 private:
  template <class T>
  explicit DelayFn(T rep) : rep_(std::move(rep)) {}
  std::variant<ConstantLag, Proportional, Expression, Derived> rep_;
};

}  // namespace idde
