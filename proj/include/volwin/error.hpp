#pragma once

#include <stdexcept>
#include <string>

namespace volwin {

/// Malformed or inconsistent input data (files, series, windows).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters or arguments outside the admissible domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a usable result
/// (singular regression, degenerate variance, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace volwin
