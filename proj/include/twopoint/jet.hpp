#pragma once

#include <span>
#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/expr.hpp"

namespace twopoint {

/// Largest order accepted by jet_of() and derivative().
inline constexpr int kMaxJetOrder = 64;

/// Truncated Laurent series sum_k c_k (z - base)^k for min_exponent <= k <= order.
///
/// order() is the highest exponent whose coefficient is known exactly (up to
/// rounding). Arithmetic tracks it, so that a quotient by a jet with a zero
/// leading coefficient yields a correspondingly shorter result.
///
/// A jet with min_exponent() < 0 always has a nonzero leading coefficient.
/// Regular jets have min_exponent() == 0.
class Jet {
public:
    Jet(Complex base, int min_exponent, std::vector<Complex> coefficients);

    static Jet constant(Complex base, Complex value, int order);
    static Jet variable(Complex base, int order);

    Complex base_point() const noexcept { return base_; }
    int min_exponent() const noexcept { return lo_; }
    int order() const noexcept { return lo_ + static_cast<int>(c_.size()) - 1; }
    std::span<const Complex> coefficients() const noexcept { return c_; }
    bool regular() const noexcept { return lo_ >= 0; }

    /// Coefficient of (z - base)^exponent; zero below min_exponent().
    Complex operator[](int exponent) const;

    /// Drops every coefficient above `order`.
    Jet truncated(int order) const;

    friend Jet operator-(const Jet& a);
    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator*(Complex s, const Jet& a);
    friend Jet pow(const Jet& a, int n);
    friend Jet exp(const Jet& a);
    friend Jet sin(const Jet& a);
    friend Jet cos(const Jet& a);

private:
    void normalize();

    Complex base_;
    int lo_;
    std::vector<Complex> c_;
};

/// Laurent (or Taylor) jet of expr at z0 through exponent `order`.
///
/// Throws DomainError for exp/sin/cos of a principal part (essential
/// singularity) or a quotient by a jet that vanishes to all retained orders.
Jet jet_of(const Expr& expr, Complex z0, int order);

/// k-th derivative of expr at z0, which must be a regular point.
Complex derivative(const Expr& expr, Complex z0, int k);

/// f^(j)(z0)/j! for j = 0..order. Throws PoleError if z0 is a pole of expr.
std::vector<Complex> taylor_coefficients(const Expr& expr, Complex z0, int order);

}  // namespace twopoint
