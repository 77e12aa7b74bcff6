#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace luq {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument to a library call (bad parameter, empty input, ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A velocity query fell outside the region where the field is defined.
class DomainError : public Error {
  public:
    DomainError(double x, double y, double t);

    double x() const { return x_; }
    double y() const { return y_; }
    double t() const { return t_; }

  private:
    double x_, y_, t_;
};

/// Spherical kinematics evaluated at or beyond a pole.
class PoleError : public Error {
  public:
    explicit PoleError(double latitude_deg);
};

/// Non-finite state produced while integrating.
class IntegrationError : public Error {
  public:
    using Error::Error;
};

/// Malformed line in a text input.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Declared dimensions disagree with the payload.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Non-finite value in a velocity grid, with its (time, row, column) index.
class ValueError : public Error {
  public:
    ValueError(std::size_t it, std::size_t iy, std::size_t ix, const std::string& what);
    std::size_t it() const { return it_; }
    std::size_t iy() const { return iy_; }
    std::size_t ix() const { return ix_; }

  private:
    std::size_t it_, iy_, ix_;
};

/// An asymptotic approximation queried outside its regime of validity.
class ValidityError : public Error {
  public:
    using Error::Error;
};

} // namespace luq
