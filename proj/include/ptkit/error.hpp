#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptkit {

/// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnboundParameter : public Error {
public:
    explicit UnboundParameter(const std::string& name)
        : Error("unbound parameter '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Pole or branch point hit exactly (ln 0, division by zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// f1 or f2 vanished where the model needs it to be nonzero.
class ModulationZero : public Error {
public:
    using Error::Error;
};

class BranchTrackingError : public Error {
public:
    using Error::Error;
};

/// Invalid user configuration (schema, ranges, inconsistent inputs).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Integrator or quadrature failure (step underflow, step budget exhausted).
class NumericError : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    using Error::Error;
};

/// Argument outside the range where an algorithm is known to converge.
class RangeError : public Error {
public:
    using Error::Error;
};

}  // namespace ptkit
