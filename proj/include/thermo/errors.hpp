#pragma once

#include <stdexcept>
#include <string>

namespace thermo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

/// Requested volume does not fit the configured row or memory budget.
class BudgetExceededError : public Error {
public:
    using Error::Error;
};

/// A domain-type invariant was violated; `invariant()` names it.
class InvariantError : public Error {
public:
    InvariantError(std::string invariant, const std::string& detail)
        : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// The question cannot be answered from the data at hand (e.g. a finite
/// prefix of an infinite frequency sequence).
class UndecidableError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace thermo
