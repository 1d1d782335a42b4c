#pragma once

#include <stdexcept>
#include <string>

namespace finex {

/// Bad input: violated precondition, malformed file, inconsistent dimensions.
/// CLI exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A cross-check between two independently computed values failed.
/// CLI exit code 3.
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The request exceeds a hard resource budget (tensor entries, enumeration
/// counts, LP size). CLI exit code 4.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace finex
