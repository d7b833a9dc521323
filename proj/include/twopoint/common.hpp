#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace twopoint {

using Complex = std::complex<double>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. position() is the 0-based byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A function was evaluated at (or expanded about) one of its poles.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Mathematically invalid request: coincident points, empty region,
/// essential singularity, unsupported denominator, inconsistent pole orders.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method (root finder, adaptive quadrature) did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

inline bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

/// base^n by repeated squaring; negative n inverts the result once at the end.
inline Complex ipow(Complex base, int n) {
    Complex result = 1.0;
    const bool invert = n < 0;
    for (unsigned m = invert ? 0u - static_cast<unsigned>(n) : static_cast<unsigned>(n); m > 0; m >>= 1) {
        if (m & 1u) result *= base;
        if (m > 1) base *= base;
    }
    return invert ? 1.0 / result : result;
}

}  // namespace twopoint
