#pragma once

#include <stdexcept>
#include <string>

namespace qqchain {

/// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadShapeError : public Error {
public:
    using Error::Error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

/// Jacobi iteration exceeded its sweep cap.
class NoConvergenceError : public Error {
public:
    using Error::Error;
};

class NotDensityMatrixError : public Error {
public:
    using Error::Error;
};

class InvalidParamsError : public Error {
public:
    using Error::Error;
};

class NonPositiveTemperatureError : public InvalidParamsError {
public:
    using InvalidParamsError::InvalidParamsError;
};

/// Closed-form branch requested at (or too near) J = 0, where the
/// analytic amplitude ratios are undefined.
class DegenerateCouplingError : public InvalidParamsError {
public:
    using InvalidParamsError::InvalidParamsError;
};

class InvalidSpecError : public Error {
public:
    using Error::Error;
};

class InvalidBracketError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qqchain
