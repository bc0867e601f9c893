#pragma once

#include <stdexcept>
#include <string>

namespace tch {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptySpaceError : public Error {
public:
    using Error::Error;
};

class NotInSectorError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DuplicateHopError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Thrown when a propagation changes the norm by more than the configured tolerance.
class NormDriftError : public Error {
public:
    using Error::Error;
};

class OverlapError : public Error {
public:
    using Error::Error;
};

class GridResolutionError : public Error {
public:
    using Error::Error;
};

class EmptySampleError : public Error {
public:
    using Error::Error;
};

}  // namespace tch
