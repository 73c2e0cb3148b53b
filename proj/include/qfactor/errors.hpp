#pragma once

#include <stdexcept>
#include <string>

namespace qfactor {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NormalizationError : public Error {
public:
    using Error::Error;
};

// Requested qubit count has no curated condition list, or is out of range.
class UnsupportedArity : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

// A density-form radicand fell below the rounding tolerance.
class PositivityViolation : public Error {
public:
    using Error::Error;
};

class NotFactorizable : public Error {
public:
    using Error::Error;
};

// Invalid numeric option (step size, time span, grid size...).
class DomainError : public Error {
public:
    using Error::Error;
};

class IntegrationDiverged : public Error {
public:
    IntegrationDiverged(double time, const std::string& what)
        : Error(what + " at t=" + std::to_string(time)), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace qfactor
