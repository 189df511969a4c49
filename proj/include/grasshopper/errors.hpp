#pragma once

#include <stdexcept>
#include <string>

namespace grasshopper {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters: depth out of range, empty run lists, bad schedules.
struct ConfigError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain (theta outside [0, pi], NaN).
struct DomainError : Error {
    using Error::Error;
};

// Objects built for different grids or pair counts were combined.
struct ShapeError : Error {
    using Error::Error;
};

// An operation's hypothesis does not hold for the given input.
struct PreconditionError : Error {
    using Error::Error;
};

// A grid violated one of its geometric invariants.
struct GeometryError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace grasshopper
