#include "twopoint/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "twopoint/detail/formulas.hpp"
#include "twopoint/jet.hpp"

namespace twopoint {

namespace {

void require_distinct(Complex z1, Complex z2) {
    const double scale = std::max({1.0, std::abs(z1), std::abs(z2)});
    if (std::abs(z1 - z2) < kConfluenceThreshold * scale) throw DomainError("expansion points must be distinct");
}

double sign_of_power(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

namespace detail {

std::vector<Complex> regular_part(const FunctionModel& f, Complex z0, int m, int order) {
    if (m < 0) throw std::invalid_argument("pole order bound must be nonnegative");
    const Expr g = m == 0 ? f.expr() : multiply_by_power(f.expr(), z0, m);
    const Jet j = jet_of(g, z0, order);
    if (!j.regular())
        throw DomainError("pole order bound " + std::to_string(m) + " is smaller than the pole order " +
                          std::to_string(-j.min_exponent() + m) + " of f at the expansion point");
    const auto c = j.coefficients();
    return {c.begin(), c.end()};
}

Sum b_sum(std::span<const Complex> g1, std::span<const Complex> g2, Complex z1, Complex z2, int m1, int m2, int n) {
    Sum sum;
    // k = 0 .. n+m1-1, empty when n = m1 = 0.
    const int p = n + m1 - 1;
    double ratio = 1.0;  // (n+1)_k / k!
    for (int k = 0; k <= p; ++k) {
        if (k > 0) ratio *= static_cast<double>(n + k) / k;
        sum.add(-sign_of_power(k) * ratio * g1[static_cast<std::size_t>(p - k)] * ipow(z1 - z2, -(n + k + 2)));
    }
    // k = 0 .. n+m2; (0)_k vanishes for k > 0.
    const int q = n + m2;
    ratio = 1.0;  // (n)_k / k!
    for (int k = 0; k <= q; ++k) {
        if (k > 0) ratio *= static_cast<double>(n + k - 1) / k;
        if (ratio == 0.0) break;
        sum.add(sign_of_power(k) * ratio * g2[static_cast<std::size_t>(q - k)] * ipow(z2 - z1, -(n + k + 1)));
    }
    return sum;
}

Sum c_sum(std::span<const Complex> g1, std::span<const Complex> g2, Complex z1, Complex z2, int m1, int m2, int n) {
    Sum sum;
    const int p = m1 - n - 2;
    double binom = 1.0;  // C(n, k)
    for (int k = 0; k <= p && k <= n; ++k) {
        if (k > 0) binom *= static_cast<double>(n - k + 1) / k;
        sum.add(-binom * ipow(z1 - z2, n - k - 1) * g1[static_cast<std::size_t>(p - k)]);
    }
    const int q = m2 - n - 1;
    binom = 1.0;  // C(n+1, k)
    for (int k = 0; k <= q && k <= n + 1; ++k) {
        if (k > 0) binom *= static_cast<double>(n + 2 - k) / k;
        sum.add(binom * ipow(z2 - z1, n - k) * g2[static_cast<std::size_t>(q - k)]);
    }
    return sum;
}

std::pair<Sum, Sum> d_sum(std::span<const Complex> g, std::span<const Complex> t, Complex z1, Complex z2, int m,
                          int n) {
    const Complex h = z2 - z1;
    Sum fwd, rev;
    if (n == 0) {
        fwd.add(t[0] / h);
        for (int k = 0; k < m; ++k) fwd.add(-g[static_cast<std::size_t>(m - k - 1)] * ipow(h, -(k + 2)));
        rev.add(g[static_cast<std::size_t>(m)] / (z1 - z2));
        return {fwd, rev};
    }
    const double lead = -sign_of_power(n);
    double binom = 1.0;  // C(n+k, k)
    for (int k = 0; k <= m + n - 1; ++k) {
        if (k > 0) binom *= static_cast<double>(n + k) / k;
        fwd.add(lead * binom * g[static_cast<std::size_t>(m + n - k - 1)] * ipow(h, -(n + k + 2)));
    }
    binom = 1.0;  // C(n+k-1, k)
    for (int k = 0; k <= n; ++k) {
        if (k > 0) binom *= static_cast<double>(n + k - 1) / k;
        fwd.add(lead * binom * t[static_cast<std::size_t>(n - k)] * ipow(-h, -(n + k + 1)));
    }
    binom = 1.0;  // C(n+k-1, k)
    for (int k = 0; k <= m + n; ++k) {
        if (k > 0) binom *= static_cast<double>(n + k - 1) / k;
        rev.add(lead * binom * g[static_cast<std::size_t>(m + n - k)] * ipow(h, -(n + k + 1)));
    }
    binom = 1.0;  // C(n+k, k)
    for (int k = 0; k <= n - 1; ++k) {
        if (k > 0) binom *= static_cast<double>(n + k) / k;
        rev.add(lead * binom * t[static_cast<std::size_t>(n - k - 1)] * ipow(-h, -(n + k + 2)));
    }
    return {fwd, rev};
}

Sum e_sum(std::span<const Complex> g, Complex z1, Complex z2, int m, int n) {
    Sum sum;
    const double sign = sign_of_power(n);
    double binom = 1.0;  // C(n+k, k)
    for (int k = 0; k <= m - n - 1; ++k) {
        if (k > 0) binom *= static_cast<double>(n + k) / k;
        sum.add(sign * binom * g[static_cast<std::size_t>(m - n - k - 1)] * ipow(z2 - z1, -(n + k)));
    }
    return sum;
}

}  // namespace detail

namespace {

using detail::regular_part;

Complex b_formula(std::span<const Complex> g1, std::span<const Complex> g2, Complex z1, Complex z2, int m1, int m2,
                  int n) {
    return detail::b_sum(g1, g2, z1, z2, m1, m2, n).value;
}

Complex c_formula(std::span<const Complex> g1, std::span<const Complex> g2, Complex z1, Complex z2, int m1, int m2,
                  int n) {
    return detail::c_sum(g1, g2, z1, z2, m1, m2, n).value;
}

CoefficientPair d_formula(std::span<const Complex> g, std::span<const Complex> t, Complex z1, Complex z2, int m,
                          int n) {
    const auto [fwd, rev] = detail::d_sum(g, t, z1, z2, m, n);
    return {fwd.value, rev.value};
}

Complex e_formula(std::span<const Complex> g, Complex z1, Complex z2, int m, int n) {
    return detail::e_sum(g, z1, z2, m, n).value;
}

std::vector<Pole> poles_except(const FunctionModel& f, std::initializer_list<Complex> removed) {
    std::vector<Pole> kept;
    for (const auto& p : f.poles()) {
        bool drop = false;
        for (const Complex z : removed) drop = drop || near(p.location, z, 1e-9 * std::max(1.0, std::abs(z)));
        if (!drop) kept.push_back(p);
    }
    return kept;
}

}  // namespace

PoleSpec detect_pole_spec(const FunctionModel& f, Complex z1, Complex z2) {
    return {f.pole_order_at(z1).value_or(0), f.pole_order_at(z2).value_or(0)};
}

double pochhammer(double x, int k) {
    if (k < 0) throw std::invalid_argument("pochhammer index must be nonnegative");
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= x + j;
    return r;
}

Complex coeff_b(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec, int n) {
    require_distinct(z1, z2);
    const auto g1 = regular_part(f, z1, spec.m1, std::max(n + spec.m1, 0));
    const auto g2 = regular_part(f, z2, spec.m2, n + spec.m2);
    return b_formula(g1, g2, z1, z2, spec.m1, spec.m2, n);
}

Complex coeff_c(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec, int n) {
    require_distinct(z1, z2);
    if (n >= spec.max_order()) {
        // Both sums are empty, but the spec must still be consistent with f.
        regular_part(f, z1, spec.m1, 0);
        regular_part(f, z2, spec.m2, 0);
        return {};
    }
    const auto g1 = regular_part(f, z1, spec.m1, std::max(spec.m1, 0));
    const auto g2 = regular_part(f, z2, spec.m2, std::max(spec.m2, 0));
    return c_formula(g1, g2, z1, z2, spec.m1, spec.m2, n);
}

TwoPointLaurentExpansion laurent_expand(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec, int terms) {
    if (terms < 1) throw std::invalid_argument("expansion needs at least one term");
    require_distinct(z1, z2);
    const auto g1 = regular_part(f, z1, spec.m1, terms - 1 + spec.m1);
    const auto g2 = regular_part(f, z2, spec.m2, terms - 1 + spec.m2);
    TwoPointLaurentExpansion e{z1, z2, spec, {}, {}};
    for (int n = 0; n < terms; ++n) {
        e.b.push_back({b_formula(g1, g2, z1, z2, spec.m1, spec.m2, n),
                       b_formula(g2, g1, z2, z1, spec.m2, spec.m1, n)});
        e.c.push_back({c_formula(g1, g2, z1, z2, spec.m1, spec.m2, n),
                       c_formula(g2, g1, z2, z1, spec.m2, spec.m1, n)});
    }
    return e;
}

Complex evaluate_laurent(const TwoPointLaurentExpansion& e, Complex z) {
    const Complex u = z - e.z1, v = z - e.z2;
    const Complex q = u * v;
    Complex sum{}, power = 1.0;
    for (const auto& p : e.b) {
        sum += (p.fwd * u + p.rev * v) * power;
        power *= q;
    }
    const bool singular = std::any_of(e.c.begin(), e.c.end(),
                                      [](const CoefficientPair& p) { return p.fwd != 0.0 || p.rev != 0.0; });
    if (!singular) return sum;
    if (q == 0.0) throw PoleError("two-point Laurent sum evaluated at an expansion point");
    Complex inverse = 1.0 / q;
    for (const auto& p : e.c) {
        sum += (p.fwd * u + p.rev * v) * inverse;
        inverse /= q;
    }
    return sum;
}

CoefficientPair coeff_d(const FunctionModel& f, Complex z1, Complex z2, int m, int n) {
    require_distinct(z1, z2);
    const auto g = regular_part(f, z1, m, m + n);
    const auto t = taylor_coefficients(f.expr(), z2, n);
    return d_formula(g, t, z1, z2, m, n);
}

Complex coeff_e(const FunctionModel& f, Complex z1, Complex z2, int m, int n) {
    require_distinct(z1, z2);
    const auto g = regular_part(f, z1, m, std::max(m - 1, 0));
    return e_formula(g, z1, z2, m, n);
}

TaylorLaurentExpansion taylor_laurent_expand(const FunctionModel& f, Complex z1, Complex z2, int m, int terms) {
    if (terms < 1) throw std::invalid_argument("expansion needs at least one term");
    require_distinct(z1, z2);
    const auto g = regular_part(f, z1, m, m + terms - 1);
    const auto t = taylor_coefficients(f.expr(), z2, terms - 1);
    TaylorLaurentExpansion e{z1, z2, m, {}, {}};
    for (int n = 0; n < terms; ++n) {
        e.d.push_back(d_formula(g, t, z1, z2, m, n));
        e.e.push_back(e_formula(g, z1, z2, m, n));
    }
    return e;
}

Complex evaluate_tl(const TaylorLaurentExpansion& e, Complex z) {
    const Complex u = z - e.z1, v = z - e.z2;
    const Complex q = u * v;
    Complex sum{}, power = 1.0;
    for (const auto& p : e.d) {
        sum += (p.fwd * u + p.rev * v) * power;
        power *= q;
    }
    if (std::all_of(e.e.begin(), e.e.end(), [](Complex c) { return c == 0.0; })) return sum;
    if (u == 0.0) throw PoleError("Taylor-Laurent sum evaluated at its singular point");
    // Term n is (z-z2)^n / (z-z1)^(n+1), built one factor at a time.
    Complex term = 1.0 / u;
    for (const Complex c : e.e) {
        sum += c * term;
        term *= v / u;
    }
    return sum;
}

FunctionModel regularize_laurent(const FunctionModel& f, Complex z1, Complex z2, PoleSpec spec) {
    const int count = spec.max_order();
    Expr g = f.expr();
    if (count > 0) {
        const auto e = laurent_expand(f, z1, z2, spec, count);
        const Expr u = Expr::variable() - Expr::constant(z1);
        const Expr v = Expr::variable() - Expr::constant(z2);
        for (int n = 0; n < count; ++n) {
            const auto& p = e.c[static_cast<std::size_t>(n)];
            g = g - (Expr::constant(p.fwd) * u + Expr::constant(p.rev) * v) * pow(u * v, -(n + 1));
        }
    }
    return FunctionModel(g, poles_except(f, {z1, z2}));
}

FunctionModel regularize_taylor_laurent(const FunctionModel& f, Complex z1, Complex z2, int m) {
    Expr g = f.expr();
    if (m > 0) {
        const Expr u = Expr::variable() - Expr::constant(z1);
        const Expr v = Expr::variable() - Expr::constant(z2);
        for (int n = 0; n < m; ++n) g = g - Expr::constant(coeff_e(f, z1, z2, m, n)) * pow(v, n) / pow(u, n + 1);
    }
    return FunctionModel(g, poles_except(f, {z1}));
}

}  // namespace twopoint
