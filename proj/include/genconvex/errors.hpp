#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace genconvex {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A function was asked for a value it does not have: outside its interval,
/// or at a point where a partial node (sqrt, ln, division) is undefined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid catalog family or parameter, or an inconsistent class spec.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An interval whose endpoints are in the wrong order (or coincide).
class OrientationError : public Error {
public:
    using Error::Error;
};

/// Integrand produced a non-finite value or a domain error at `abscissa()`.
class IntegrandError : public Error {
public:
    IntegrandError(const std::string& what, double abscissa)
        : Error(what), abscissa_(abscissa) {}
    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

/// Scenario file does not match the schema; `path()` names the field.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::string path)
        : Error(what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace genconvex
