#pragma once

#include <stdexcept>
#include <string>

namespace chaoscalc {

/// Base class for all library errors. Subclasses carry the failure category
/// so callers (and the CLI exit-code mapping) can tell configuration mistakes
/// apart from diagnostic outcomes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two operands disagree on the underlying Gaussian dimension n.
struct DimMismatchError : Error {
    using Error::Error;
};

/// Two operands disagree on tensor order, or an order is out of range.
struct OrderMismatchError : Error {
    using Error::Error;
};

/// A numeric argument violates a documented precondition.
struct RangeError : Error {
    using Error::Error;
};

/// Distance estimators only support laws of dimension <= 3.
struct UnsupportedDimError : Error {
    using Error::Error;
};

/// The annihilator search would need more monomials than the documented cap.
struct CapTooLargeError : Error {
    using Error::Error;
};

/// The Monte Carlo zero-fraction of det Gamma sits strictly between the
/// all-zero and all-nonzero bands, so no verdict is trustworthy.
struct MixedEvidenceError : Error {
    using Error::Error;
};

/// The three absolute-continuity criteria disagree with each other.
struct ContradictionError : Error {
    using Error::Error;
};

/// A numeric subroutine (assignment, SVD, fit) failed to produce a result.
struct SolverError : Error {
    using Error::Error;
};

/// The probed quantity is degenerate (e.g. almost surely zero).
struct DegenerateError : Error {
    using Error::Error;
};

/// A config file or CLI invocation could not be parsed.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace chaoscalc
