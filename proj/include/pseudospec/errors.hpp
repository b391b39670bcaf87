#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pseudospec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Matrix is singular to working tolerance. Carries the 2-norm condition estimate.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Change of basis too ill-conditioned to trust (cond(A) above the configured cap).
class IllConditionedError : public Error {
public:
    IllConditionedError(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Kernel dimensions of (H - E)^l are not a valid Jordan staircase at power l.
class StaircaseError : public Error {
public:
    StaircaseError(const std::string& what, std::size_t power)
        : Error(what), power_(power) {}
    std::size_t power() const noexcept { return power_; }

private:
    std::size_t power_;
};

/// Conjugate-pair structure required by C0 / X / eta is absent.
class PairingError : public Error {
public:
    using Error::Error;
};

class ExtrapolationError : public Error {
public:
    using Error::Error;
};

/// A closed form was requested outside the parameter regime where it is defined.
class RegimeError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace pseudospec
