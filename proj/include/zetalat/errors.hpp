#pragma once

#include <stdexcept>
#include <string>

namespace zetalat {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Input outside the documented domain of an operation (caller misuse).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Query violates a structural invariant (e.g. the distance condition of the
/// near/far split, asymmetric near field, non-even derivative cap).
class InvariantError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invariant"; }
};

/// Evaluation hits a pole of a meromorphic continuation.
class PoleError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "pole"; }
};

/// Iterative or truncated procedure did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence"; }
};

/// Summand integral diverges classically (overlapping bodies with too large
/// an exponent); its finite-part continuation is not provided.
class DivergentConfigurationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "divergent-configuration"; }
};

/// Integer result does not fit the representable range.
class OverflowError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "overflow"; }
};

/// True for errors that stem from the numerics rather than from the request.
inline bool is_numerical(const Error& e) noexcept {
    return dynamic_cast<const PoleError*>(&e) != nullptr ||
           dynamic_cast<const ConvergenceError*>(&e) != nullptr ||
           dynamic_cast<const DivergentConfigurationError*>(&e) != nullptr ||
           dynamic_cast<const OverflowError*>(&e) != nullptr;
}

}  // namespace zetalat
