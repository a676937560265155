#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fkde {

// Bad values or flag combinations supplied by the caller.
class InvalidArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Two point sets do not live in the same dimension.
class DimensionMismatchError : public InvalidArgumentError {
public:
    using InvalidArgumentError::InvalidArgumentError;
};

// Data whose spread is zero in every dimension; bandwidth rules are undefined.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The score denominator underflowed to zero at a specific evaluation point.
// Raised instead of letting NaN shifts propagate into downstream passes.
class ScoreUnderflowError : public std::runtime_error {
public:
    ScoreUnderflowError(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Estimator produced a NaN/Inf where the metrics pipeline needs a number.
class NonFiniteValueError : public std::runtime_error {
public:
    NonFiniteValueError(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// File-format and filesystem failures.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fkde
