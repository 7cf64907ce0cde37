#pragma once

#include <stdexcept>
#include <string>

namespace faberfield {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid domain data, or a point outside the region an operation accepts.
class DomainError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Evaluation requested too close to the inclusion boundary.
class BoundaryProximity : public Error {
public:
    using Error::Error;
};

/// The exterior map is not conformal somewhere on the boundary curve.
class DegenerateBoundary : public DomainError {
public:
    using DomainError::DomainError;
};

class SingularTau : public Error {
public:
    using Error::Error;
};

class ZeroTarget : public Error {
public:
    using Error::Error;
};

class InvalidContrast : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class TruncationNotConverged : public Error {
public:
    using Error::Error;
};

class TooCloseToBoundary : public Error {
public:
    using Error::Error;
};

class StencilCrossesBoundary : public Error {
public:
    using Error::Error;
};

}  // namespace faberfield
