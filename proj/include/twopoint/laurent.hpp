#pragma once

#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/expr.hpp"
#include "twopoint/taylor.hpp"

namespace twopoint {

/// Pole-order bounds at the two expansion points: (z-z1)^m1 f is regular at
/// z1 and (z-z2)^m2 f is regular at z2.
struct PoleSpec {
    int m1 = 0;
    int m2 = 0;

    int max_order() const noexcept { return m1 > m2 ? m1 : m2; }
    PoleSpec swapped() const noexcept { return {m2, m1}; }
};

/// Orders of the detected poles of f at z1 and z2 (0 where f is regular).
PoleSpec detect_pole_spec(const FunctionModel& f, Complex z1, Complex z2);

/// Rising factorial x (x+1) ... (x+k-1), with (x)_0 = 1.
double pochhammer(double x, int k);

/// Two-point Laurent expansion
///   f(z) ~ sum_{n<N} [b_n(z1,z2)(z-z1) + b_n(z2,z1)(z-z2)] ((z-z1)(z-z2))^n
///        + sum_{n<N} [c_n(z1,z2)(z-z1) + c_n(z2,z1)(z-z2)] ((z-z1)(z-z2))^(-n-1).
struct TwoPointLaurentExpansion {
    Complex z1;
    Complex z2;
    PoleSpec spec;
    std::vector<CoefficientPair> b;
    std::vector<CoefficientPair> c;

    int size() const noexcept { return static_cast<int>(b.size()); }
};

/// Two-point Taylor-Laurent expansion (singular at z1 only)
///   f(z) ~ sum_{n<N} [d_n(z1,z2)(z-z1) + d_n(z2,z1)(z-z2)] ((z-z1)(z-z2))^n
///        + sum_{n<N} e_n(z1,z2) (z-z2)^n (z-z1)^(-n-1).
struct TaylorLaurentExpansion {
    Complex z1;
    Complex z2;
    int m = 0;
    std::vector<CoefficientPair> d;
    std::vector<Complex> e;

    int size() const noexcept { return static_cast<int>(d.size()); }
};

/// b_n(z1, z2) from derivatives of g1 = (z-z1)^m1 f at z1 and g2 = (z-z2)^m2 f at z2.
/// The mirrored b_n(z2, z1) is coeff_b(f, z2, z1, spec.swapped(), n).
Complex coeff_b(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec, int n);

/// c_n(z1, z2); zero once n >= max(m1, m2).
Complex coeff_c(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec, int n);

TwoPointLaurentExpansion laurent_expand(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec, int terms);

/// Partial sum of a two-point Laurent expansion. Throws PoleError at z1 or z2
/// when a singular term is present.
Complex evaluate_laurent(const TwoPointLaurentExpansion& e, Complex z);

/// {d_n(z1,z2), d_n(z2,z1)} for g = (z-z1)^m f regular at z1 and f regular at z2.
CoefficientPair coeff_d(const FunctionModel& f, Complex z1, Complex z2, int m, int n);

/// e_n(z1, z2); zero once n >= m.
Complex coeff_e(const FunctionModel& f, Complex z1, Complex z2, int m, int n);

TaylorLaurentExpansion taylor_laurent_expand(const FunctionModel& f, Complex z1, Complex z2, int m, int terms);

Complex evaluate_tl(const TaylorLaurentExpansion& e, Complex z);

/// g = f minus the max(m1,m2) singular two-point Laurent terms. The returned
/// model keeps every pole of f except those at z1 and z2.
FunctionModel regularize_laurent(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec);

/// g = f minus the m singular Taylor-Laurent terms. The returned model keeps
/// every pole of f except the one at z1.
FunctionModel regularize_taylor_laurent(const FunctionModel& f, Complex z1, Complex z2, int m);

}  // namespace twopoint
