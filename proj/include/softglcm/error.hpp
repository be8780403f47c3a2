#pragma once

#include <stdexcept>
#include <string>

namespace softglcm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value lies outside its admissible domain (intensity range, raw level).
class InputDomainError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Unsupported or malformed file format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Image or patch dimensions incompatible with an offset or patch size.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Patch set does not cover a grid exactly once.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Caller violated a shape or configuration contract.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Input is valid but degenerate for the requested operation.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Non-finite loss or gradient during optimization.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, int step)
        : Error(what), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

}  // namespace softglcm
