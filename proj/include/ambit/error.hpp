#pragma once

#include <stdexcept>
#include <string>

namespace ambit {

/// Raised when adaptive quadrature exhausts its budget before reaching the
/// requested tolerance. Carries what was actually attained.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double attained_error)
        : std::runtime_error(what + " (estimate " + std::to_string(estimate) + ", attained error " +
                             std::to_string(attained_error) + ")"),
          estimate_(estimate),
          attained_error_(attained_error) {}

    double estimate() const noexcept { return estimate_; }
    double attained_error() const noexcept { return attained_error_; }

private:
    double estimate_;
    double attained_error_;
};

/// The simulation window needed to honour the tail tolerance exceeds the
/// configured limit.
class WindowError : public std::runtime_error {
public:
    WindowError(const std::string& what, double required_lookback)
        : std::runtime_error(what + " (required lookback " + std::to_string(required_lookback) + ")"),
          required_lookback_(required_lookback) {}

    double required_lookback() const noexcept { return required_lookback_; }

private:
    double required_lookback_;
};

/// A Lévy measure, mixing measure or volatility model violates a structural
/// requirement (positivity, admissibility, finite activity, ...).
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ambit
