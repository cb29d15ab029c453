#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwind {

/// Precondition violated: zero quaternion, negative order, r0 outside the
/// state domain, empty sample set, ...
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// A simulation step could not be completed (root finder did not converge,
/// ambient process left its chart).
class StepFailure : public std::runtime_error
{
  public:
    StepFailure(const std::string& what, std::size_t step, double state)
        : std::runtime_error(what + " (step " + std::to_string(step) + ", state " +
                             std::to_string(state) + ")"),
          step_(step), state_(state)
    {
    }

    std::size_t step() const noexcept { return step_; }
    double state() const noexcept { return state_; }

  private:
    std::size_t step_;
    double state_;
};

/// Adaptive quadrature ran out of subdivisions.
class AccuracyError : public std::runtime_error
{
  public:
    AccuracyError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound)
    {
    }

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

  private:
    double estimate_;
    double error_bound_;
};

/// Bad run configuration (unknown key, wrong type, out-of-domain value).
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace qwind
