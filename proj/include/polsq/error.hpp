#pragma once

#include <stdexcept>
#include <string>

namespace polsq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied value is out of its documented domain.
class InvalidInput : public Error {
  public:
    InvalidInput(std::string field, const std::string &what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Result would not be representable in double precision.
class OverflowError : public Error {
  public:
    using Error::Error;
};

/// Non-positive argument to a logarithmic conversion.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Truncated Fock space would need more ladder levels than allowed.
class CapacityError : public Error {
  public:
    CapacityError(const std::string &what, int needed_cutoff)
        : Error(what), needed_(needed_cutoff) {}

    int needed_cutoff() const noexcept { return needed_; }

  private:
    int needed_;
};

/// Cutoff enlargement or the doubling check failed to settle.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Operator algebra residual exceeded its threshold.
class SelfCheckError : public Error {
  public:
    using Error::Error;
};

/// Direction requires covariance entries the moment source does not provide.
class UnsupportedDirection : public Error {
  public:
    using Error::Error;
};

/// The optimum is degenerate (no squeezing anywhere).
class DegenerateOptimum : public Error {
  public:
    using Error::Error;
};

/// A sweep grid is larger than the configured point budget.
class BudgetExceeded : public Error {
  public:
    BudgetExceeded(const std::string &what, long long count)
        : Error(what), count_(count) {}

    long long count() const noexcept { return count_; }

  private:
    long long count_;
};

} // namespace polsq
