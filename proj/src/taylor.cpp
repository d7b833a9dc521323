#include "twopoint/taylor.hpp"

#include <algorithm>
#include <cmath>

#include "twopoint/detail/formulas.hpp"
#include "twopoint/jet.hpp"

namespace twopoint {

namespace {

void require_separated(Complex z1, Complex z2) {
    const double scale = std::max({1.0, std::abs(z1), std::abs(z2)});
    if (std::abs(z1 - z2) < kConfluenceThreshold * scale)
        throw DomainError("expansion points coincide (or nearly so); use ab_confluent for z1 = z2");
}

}  // namespace

TwoPointExpansion TwoPointExpansion::swapped() const {
    TwoPointExpansion s{z2, z1, pairs};
    for (auto& p : s.pairs) std::swap(p.fwd, p.rev);
    return s;
}

namespace detail {

Sum a_sum(std::span<const Complex> t1, std::span<const Complex> t2, Complex z1, Complex z2, int n) {
    Sum sum;
    if (n == 0) {
        sum.add(t2[0] / (z2 - z1));
        return sum;
    }
    const Complex d = z1 - z2;
    const double sign_z2 = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^(n+1)
    Complex inv_power = 1.0;                            // d^-(n+k+1)
    for (int j = 0; j <= n; ++j) inv_power /= d;
    double binom = 1.0;  // C(n+k-1, k)
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            binom *= static_cast<double>(n + k - 1) / k;
            inv_power /= d;
        }
        const double sign_z1 = (k % 2 == 0) ? 1.0 : -1.0;
        sum.add(sign_z2 * binom * t2[n - k] * inv_power);
        sum.add(sign_z1 * (static_cast<double>(k) / n) * binom * t1[n - k] * inv_power);
    }
    return sum;
}

}  // namespace detail

Complex coeff_a(std::span<const Complex> t1, std::span<const Complex> t2, Complex z1, Complex z2, int n) {
    return detail::a_sum(t1, t2, z1, z2, n).value;
}

Complex coeff_a(const FunctionModel& f, Complex z1, Complex z2, int n) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    require_separated(z1, z2);
    const auto t1 = taylor_coefficients(f.expr(), z1, n);
    const auto t2 = taylor_coefficients(f.expr(), z2, n);
    return coeff_a(t1, t2, z1, z2, n);
}

TwoPointExpansion expand(const FunctionModel& f, Complex z1, Complex z2, int terms) {
    if (terms < 1) throw std::invalid_argument("expansion needs at least one term");
    require_separated(z1, z2);
    const auto t1 = taylor_coefficients(f.expr(), z1, terms - 1);
    const auto t2 = taylor_coefficients(f.expr(), z2, terms - 1);
    TwoPointExpansion e{z1, z2, {}};
    e.pairs.reserve(static_cast<std::size_t>(terms));
    for (int n = 0; n < terms; ++n) e.pairs.push_back({coeff_a(t1, t2, z1, z2, n), coeff_a(t2, t1, z2, z1, n)});
    return e;
}

Complex evaluate(const TwoPointExpansion& e, Complex z) {
    const Complex u = z - e.z1, v = z - e.z2;
    const Complex q = u * v;
    Complex power = 1.0, sum{};
    for (const auto& p : e.pairs) {
        sum += (p.fwd * u + p.rev * v) * power;
        power *= q;
    }
    return sum;
}

ABExpansion to_ab(const TwoPointExpansion& e) {
    ABExpansion ab{e.z1, e.z2, {}};
    ab.terms.reserve(e.pairs.size());
    for (const auto& p : e.pairs) ab.terms.push_back({-e.z1 * p.fwd - e.z2 * p.rev, p.fwd + p.rev});
    return ab;
}

Complex evaluate(const ABExpansion& e, Complex z) {
    const Complex q = (z - e.z1) * (z - e.z2);
    Complex power = 1.0, sum{};
    for (const auto& t : e.terms) {
        sum += (t.a + t.b * z) * power;
        power *= q;
    }
    return sum;
}

ABExpansion ab_confluent(const FunctionModel& f, Complex z0, int terms) {
    if (terms < 1) throw std::invalid_argument("expansion needs at least one term");
    const auto t = taylor_coefficients(f.expr(), z0, 2 * terms - 1);
    ABExpansion ab{z0, z0, {}};
    for (int n = 0; n < terms; ++n) {
        const Complex odd = t[2 * n + 1];
        ab.terms.push_back({t[2 * n] - z0 * odd, odd});
    }
    return ab;
}

std::vector<double> hermite_residuals(const FunctionModel& f, const TwoPointExpansion& e) {
    const int order = e.size() - 1;
    std::vector<double> residuals;
    for (const Complex zi : {e.z1, e.z2}) {
        const Jet u = Jet::variable(zi, order) - Jet::constant(zi, e.z1, order);
        const Jet v = Jet::variable(zi, order) - Jet::constant(zi, e.z2, order);
        const Jet q = u * v;
        Jet power = Jet::constant(zi, 1.0, order);
        Jet p = Jet::constant(zi, 0.0, order);
        for (const auto& c : e.pairs) {
            p = p + (c.fwd * u + c.rev * v) * power;
            power = power * q;
        }
        const auto t = taylor_coefficients(f.expr(), zi, order);
        double factorial = 1.0;
        for (int k = 0; k <= order; ++k) {
            if (k > 1) factorial *= k;
            residuals.push_back(factorial * std::abs(p[k] - t[static_cast<std::size_t>(k)]));
        }
    }
    return residuals;
}

}  // namespace twopoint
