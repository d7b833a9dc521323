#pragma once

// Closed-form coefficient sums shared by the expansion builders and the
// verification suite. Each sum also reports the magnitude of its terms, which
// bounds its rounding error: the closed forms cancel heavily once the
// coefficients decay.

#include <cstdlib>
#include <span>
#include <utility>
#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/expr.hpp"

namespace twopoint::detail {

struct Sum {
    Complex value{};
    double magnitude = 0.0;

    void add(Complex term) {
        value += term;
        magnitude += std::abs(term);
    }
};

/// Taylor coefficients g^(j)(z0)/j!, j = 0..order, of g = (z - z0)^m f.
/// Throws DomainError when g is still singular at z0.
std::vector<Complex> regular_part(const FunctionModel& f, Complex z0, int m, int order);

/// a_n(z1, z2) from t1[j] = f^(j)(z1)/j!, t2[j] = f^(j)(z2)/j!.
Sum a_sum(std::span<const Complex> t1, std::span<const Complex> t2, Complex z1, Complex z2, int n);

/// b_n(z1, z2) and c_n(z1, z2) from the regular parts g1 at z1 and g2 at z2.
Sum b_sum(std::span<const Complex> g1, std::span<const Complex> g2, Complex z1, Complex z2, int m1, int m2, int n);
Sum c_sum(std::span<const Complex> g1, std::span<const Complex> g2, Complex z1, Complex z2, int m1, int m2, int n);

/// {d_n(z1,z2), d_n(z2,z1)} and e_n(z1,z2) from g at z1 and t[j] = f^(j)(z2)/j!.
std::pair<Sum, Sum> d_sum(std::span<const Complex> g, std::span<const Complex> t, Complex z1, Complex z2, int m,
                          int n);
Sum e_sum(std::span<const Complex> g, Complex z1, Complex z2, int m, int n);

}  // namespace twopoint::detail
