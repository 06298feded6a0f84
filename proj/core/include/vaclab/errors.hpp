#pragma once

#include <stdexcept>
#include <string>

namespace vaclab {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument value: non-positive distance, demand behind infinity, ...
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed configuration, command line, or input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Estimation failure: insufficient data, singular system, non-identifiable fit.
class FitError : public Error {
public:
    using Error::Error;
};

// Requested value lies outside an achievable range; the message names the range.
class RangeError : public Error {
public:
    using Error::Error;
};

// A simulated dynamical system left its sane operating region.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace vaclab
