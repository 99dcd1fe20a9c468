#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riskgap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)),
        expected_(expected),
        got_(got) {}
  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

// --- stl ---------------------------------------------------------------

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error("syntax error at " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownPredicate : public Error {
 public:
  explicit UnknownPredicate(std::string name)
      : Error("unknown predicate '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnboundedFormula : public Error {
 public:
  UnboundedFormula() : Error("formula contains an unbounded interval") {}
};

class TraceTooShort : public Error {
 public:
  TraceTooShort(std::size_t needed, std::size_t have)
      : Error("trace too short: need step " + std::to_string(needed) + ", last step is " +
              std::to_string(have)),
        needed_(needed),
        have_(have) {}
  std::size_t needed() const noexcept { return needed_; }
  std::size_t have() const noexcept { return have_; }

 private:
  std::size_t needed_;
  std::size_t have_;
};

class EmptyHorizon : public Error {
 public:
  EmptyHorizon() : Error("constraint horizon is empty") {}
};

// --- risk --------------------------------------------------------------

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(std::size_t n, double level)
      : Error("insufficient samples: N=" + std::to_string(n) + " gives effective level " +
              std::to_string(level) + " > 1"),
        n_(n),
        level_(level) {}
  std::size_t n() const noexcept { return n_; }
  double level() const noexcept { return level_; }

 private:
  std::size_t n_;
  double level_;
};

class MissingSupportBound : public Error {
 public:
  MissingSupportBound() : Error("CVaR upper bound requires a support bound b") {}
};

class DeltaOutOfRange : public Error {
 public:
  explicit DeltaOutOfRange(double delta)
      : Error("delta " + std::to_string(delta) + " outside (0, 0.5]") {}
};

// --- gap ---------------------------------------------------------------

class GainNotKInf : public Error {
 public:
  using Error::Error;
};

class NormNotContractive : public Error {
 public:
  explicit NormNotContractive(double norm)
      : Error("induced 2-norm " + std::to_string(norm) + " is not < 1"), norm_(norm) {}
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

class PairMismatch : public Error {
 public:
  using Error::Error;
};

class HorizonExceeded : public Error {
 public:
  HorizonExceeded(std::size_t needed, std::size_t have)
      : Error("gap schedule horizon " + std::to_string(have) + " does not cover step " +
              std::to_string(needed)) {}
};

// --- sim ---------------------------------------------------------------

class OutsideMap : public Error {
 public:
  OutsideMap() : Error("state lies outside the map") {}
};

class NumericBlowup : public Error {
 public:
  NumericBlowup(std::size_t trial, std::size_t step)
      : Error("non-finite state in trial " + std::to_string(trial) + " at step " +
              std::to_string(step)),
        trial_(trial) {}
  std::size_t trial() const noexcept { return trial_; }

 private:
  std::size_t trial_;
};

/// A per-trial failure re-raised by the Monte Carlo engine.
class TrialError : public Error {
 public:
  TrialError(std::size_t trial, const std::string& what)
      : Error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}
  std::size_t trial() const noexcept { return trial_; }

 private:
  std::size_t trial_;
};

// --- cli ---------------------------------------------------------------

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace riskgap
