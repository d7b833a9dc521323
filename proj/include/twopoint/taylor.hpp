#pragma once

#include <span>
#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/expr.hpp"

namespace twopoint {

/// Coefficient pair of one term: `fwd` multiplies (z - z1), `rev` multiplies (z - z2).
struct CoefficientPair {
    Complex fwd;
    Complex rev;
};

/// Two-point Taylor expansion
///   f(z) ~ sum_{n<N} [a_n(z1,z2) (z-z1) + a_n(z2,z1) (z-z2)] ((z-z1)(z-z2))^n.
/// pairs[n] = {a_n(z1,z2), a_n(z2,z1)}.
struct TwoPointExpansion {
    Complex z1;
    Complex z2;
    std::vector<CoefficientPair> pairs;

    int size() const noexcept { return static_cast<int>(pairs.size()); }
    /// The same expansion with the roles of z1 and z2 exchanged.
    TwoPointExpansion swapped() const;
};

/// The symmetric form f(z) ~ sum_n (A_n + B_n z) ((z-z1)(z-z2))^n, which stays
/// finite as z1 -> z2.
struct ABExpansion {
    Complex z1;
    Complex z2;
    struct Term {
        Complex a;
        Complex b;
    };
    std::vector<Term> terms;

    int size() const noexcept { return static_cast<int>(terms.size()); }
};

/// Relative separation below which the (z1, z2) form is refused: the closed
/// form divides by (z1 - z2)^(n+k+1).
inline constexpr double kConfluenceThreshold = 1e-6;

/// a_n(z1, z2) from derivatives of f at both points.
Complex coeff_a(const FunctionModel& f, Complex z1, Complex z2, int n);

/// The same closed form, from Taylor coefficients t1[j] = f^(j)(z1)/j! and
/// t2[j] = f^(j)(z2)/j!, each holding at least n + 1 entries.
Complex coeff_a(std::span<const Complex> t1, std::span<const Complex> t2, Complex z1, Complex z2, int n);

TwoPointExpansion expand(const FunctionModel& f, Complex z1, Complex z2, int terms);

/// Partial sum of the expansion at z.
Complex evaluate(const TwoPointExpansion& e, Complex z);

ABExpansion to_ab(const TwoPointExpansion& e);
Complex evaluate(const ABExpansion& e, Complex z);

/// A_n and B_n at coincident points z1 = z2 = z0: the even and odd parts of
/// the Taylor series about z0, A_n = t_{2n} - z0 t_{2n+1}, B_n = t_{2n+1}.
ABExpansion ab_confluent(const FunctionModel& f, Complex z0, int terms);

/// |P^(k)(z_i) - f^(k)(z_i)| for k < N, first at z1 then at z2, where P is the
/// degree 2N-1 partial sum of e.
std::vector<double> hermite_residuals(const FunctionModel& f, const TwoPointExpansion& e);

}  // namespace twopoint
