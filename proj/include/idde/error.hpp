#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace idde {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, bad config, invalid schedule.
class InputError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : InputError(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public InputError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : InputError("unknown identifier '" + name + "' at byte " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

/// A multiplier B_j <= 0 where the operation needs B_j > 0.
class NonPositiveMultiplier : public InputError {
 public:
  NonPositiveMultiplier(double time, double multiplier)
      : InputError("impulse multiplier " + std::to_string(multiplier) + " at t=" +
                   std::to_string(time) + " is not positive"),
        time_(time),
        multiplier_(multiplier) {}
  double time() const noexcept { return time_; }
  double multiplier() const noexcept { return multiplier_; }

 private:
  double time_;
  double multiplier_;
};

/// Raised when an expression delay evaluates to h(t) > t.
class DelayAdvanced : public InputError {
 public:
  DelayAdvanced(double t, double value)
      : InputError("delay h(t)=" + std::to_string(value) + " exceeds t=" + std::to_string(t)),
        t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Numerical failures: non-finite state, unusable step, coarse grid.
class NumericError : public Error {
 public:
  using Error::Error;
};

class HorizonExceeded : public NumericError {
 public:
  HorizonExceeded(double requested, double horizon)
      : NumericError("query at " + std::to_string(requested) + " beyond horizon " +
                     std::to_string(horizon)) {}
};

class StepTooLarge : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonFiniteState : public NumericError {
 public:
  explicit NonFiniteState(double t)
      : NumericError("non-finite state at t=" + std::to_string(t)), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

class MissingSlice : public NumericError {
 public:
  explicit MissingSlice(double s)
      : NumericError("no fundamental slice for s=" + std::to_string(s)), s_(s) {}
  double s() const noexcept { return s_; }

 private:
  double s_;
};

class GridTooCoarse : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A comparison hypothesis failed; carries the offending time or impulse index.
class HypothesisNotMet : public Error {
 public:
  HypothesisNotMet(const std::string& what, std::optional<double> witness_t,
                   std::optional<std::size_t> witness_j = std::nullopt)
      : Error(what), witness_t_(witness_t), witness_j_(witness_j) {}
  std::optional<double> witness_t() const noexcept { return witness_t_; }
  std::optional<std::size_t> witness_j() const noexcept { return witness_j_; }

 private:
  std::optional<double> witness_t_;
  std::optional<std::size_t> witness_j_;
};

/// Two routes produced contradictory certificates. Indicates an engine bug.
class InconsistentCertificates : public Error {
 public:
  using Error::Error;
};

}  // namespace idde
