#pragma once

#include <stdexcept>
#include <string>

namespace lrlab {

// Base of every error raised by the library. The C API maps the concrete
// subclass onto a status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (empty block,
// negative Lambert W argument, t outside [0, T], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed input: non-Hermitian matrix, NaN entries, bad config, dimension
// mismatch, overlapping supports.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed to meet its tolerance or hit a degeneracy.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double defect)
        : NumericalError(what), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

class LevelCrossingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class GapClosureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Fewer than two levels crossed the detection threshold.
class InsufficientCrossingsError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace lrlab
