#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace nonloc {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A local dimension below what a construction or definition requires.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Mismatched party counts, dimensions, matrix shapes or index ranges.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed user input: selectors, groupings, files.
class InputError : public Error {
public:
    using Error::Error;
};

/// Rational as "p/q", always with an explicit denominator.
std::string to_fraction_string(const Rational& value);

/// Inverse of to_fraction_string; also accepts a bare integer.
Rational parse_fraction(const std::string& text);

Integer parse_integer(const std::string& text);

} // namespace nonloc
