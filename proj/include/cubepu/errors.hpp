#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "cubepu/geometry.hpp"

namespace cubepu {

/// A point fell outside [0,1]^3.
class DomainError : public std::invalid_argument {
public:
    DomainError(const std::string& what, Point3 point)
        : std::invalid_argument(what), point_(point) {}
    [[nodiscard]] const Point3& point() const noexcept { return point_; }

private:
    Point3 point_;
};

/// A radius query exceeds the halo the grid can answer exactly.
class RadiusTooLargeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure; the CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularSystemError : public NumericalError {
public:
    SingularSystemError(const std::string& what, std::size_t subdomain, std::size_t size)
        : NumericalError(what), subdomain_(subdomain), size_(size) {}
    [[nodiscard]] std::size_t subdomain() const noexcept { return subdomain_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

private:
    std::size_t subdomain_;
    std::size_t size_;
};

class EmptySubdomainError : public NumericalError {
public:
    EmptySubdomainError(const std::string& what, std::size_t subdomain, Point3 center)
        : NumericalError(what), subdomain_(subdomain), center_(center) {}
    [[nodiscard]] std::size_t subdomain() const noexcept { return subdomain_; }
    [[nodiscard]] const Point3& center() const noexcept { return center_; }

private:
    std::size_t subdomain_;
    Point3 center_;
};

class UncoveredPointError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Malformed input data (point files); carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace cubepu
