#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "twopoint/contour.hpp"
#include "twopoint/detail/formulas.hpp"
#include "twopoint/jet.hpp"
#include "twopoint/laurent.hpp"
#include "twopoint/taylor.hpp"

using namespace twopoint;
using namespace std::complex_literals;

namespace {

FunctionModel fn(const char* text) { return FunctionModel::parse(text); }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Point with z^2 - 1 = level e^{i phi}, i.e. Cassini level about {-1, 1}.
Complex at_level(double level, double phi) { return std::sqrt(1.0 + level * std::polar(1.0, phi)); }

Expr poly_expr(const std::vector<Complex>& c) {
    Expr e = Expr::constant(c.back());
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k)
        e = e * Expr::variable() + Expr::constant(c[static_cast<std::size_t>(k)]);
    return e;
}

}  // namespace

TEST_CASE("pochhammer") {
    CHECK(pochhammer(3.0, 0) == 1.0);
    CHECK(pochhammer(3.0, 4) == 3.0 * 4 * 5 * 6);
    CHECK(pochhammer(0.0, 2) == 0.0);
    CHECK(pochhammer(1.0, 5) == 120.0);
}

TEST_CASE("pole spec detection") {
    const auto s = detect_pole_spec(fn("1/((z-1)^2*(z+2))"), -2.0, 1.0);
    CHECK(s.m1 == 1);
    CHECK(s.m2 == 2);
    CHECK(s.max_order() == 2);
    CHECK(s.swapped().m1 == 2);
    const auto r = detect_pole_spec(fn("exp(z)"), -1.0, 1.0);
    CHECK(r.m1 == 0);
    CHECK(r.m2 == 0);
}

TEST_CASE("b and c of 1/((z-z1)(z-z2))") {
    for (const auto& [z1, z2] : {std::pair<Complex, Complex>{-1.0, 1.0}, {0.5i, 2.0}, {Complex(1, 1), Complex(-2, 0.5)}}) {
        const FunctionModel f{Expr::constant(1.0) /
                              ((Expr::variable() - Expr::constant(z1)) * (Expr::variable() - Expr::constant(z2)))};
        const PoleSpec s{1, 1};
        for (int n = 0; n <= 5; ++n) {
            CHECK(std::abs(coeff_b(f, z1, z2, s, n)) < 1e-12);
            CHECK(std::abs(coeff_b(f, z2, z1, s, n)) < 1e-12);
        }
        CHECK(std::abs(coeff_c(f, z1, z2, s, 0) - 1.0 / (z2 - z1)) < 1e-15);
        CHECK(std::abs(coeff_c(f, z2, z1, s, 0) - 1.0 / (z1 - z2)) < 1e-15);
        CHECK(coeff_c(f, z1, z2, s, 1) == Complex(0.0));
    }
    const auto f = fn("1/((z+1)*(z-1))");
    CHECK(std::abs(coeff_c(f, -1.0, 1.0, {1, 1}, 0) - 0.5) < 1e-15);
    CHECK(std::abs(coeff_c(f, 1.0, -1.0, {1, 1}, 0) + 0.5) < 1e-15);
    const auto o = oracle_c(f, -1.0, 1.0, 0);
    CHECK(std::abs(o.value - 0.5) < 1e-12);
    CHECK(std::abs(oracle_b(f, -1.0, 1.0, 0).value) < 1e-12);
}

TEST_CASE("c-part reconstructs 1/((z+1)(z-1)) exactly") {
    const auto f = fn("1/((z+1)*(z-1))");
    const auto e = laurent_expand(f, -1.0, 1.0, {1, 1}, 3);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 50; ++k) {
        Complex z(u(rng), u(rng));
        if (std::abs(z * z - 1.0) < 1e-3) continue;
        CHECK(rel(evaluate_laurent(e, z), f(z)) < 1e-13);
    }
    CHECK_THROWS_AS(evaluate_laurent(e, 1.0), PoleError);
}

TEST_CASE("entire functions: c vanishes and b reduces to a") {
    for (const char* text : {"exp(z)", "sin(z)", "z^5-3*z+1", "1/(1+z^2)"}) {
        const auto f = fn(text);
        for (int n = 0; n <= 5; ++n) {
            INFO(text, " n=", n);
            CHECK(coeff_c(f, -1.0, 1.0, {0, 0}, n) == Complex(0.0));
            const Complex a = coeff_a(f, -1.0, 1.0, n), b = coeff_b(f, -1.0, 1.0, {0, 0}, n);
            CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
            const auto d = coeff_d(f, -1.0, 1.0, 0, n);
            CHECK(std::abs(d.fwd - a) <= 1e-13 * std::max(1.0, std::abs(a)));
            CHECK(std::abs(d.rev - coeff_a(f, 1.0, -1.0, n)) <= 1e-13 * std::max(1.0, std::abs(a)));
            CHECK(coeff_e(f, -1.0, 1.0, 0, n) == Complex(0.0));
        }
    }
}

TEST_CASE("c vanishes beyond the largest pole order") {
    const auto f = fn("1/((z-1)^2*(z+2))");
    for (int n = 2; n < 6; ++n) {
        CHECK(coeff_c(f, -2.0, 1.0, {1, 2}, n) == Complex(0.0));
        CHECK(coeff_c(f, 1.0, -2.0, {2, 1}, n) == Complex(0.0));
    }
}

TEST_CASE("exp(z)/(z^2-1) inside the annulus") {
    const auto f = fn("exp(z)/(z^2-1)");
    const auto e = laurent_expand(f, -1.0, 1.0, {1, 1}, 12);
    for (const double level : {1.0, 4.0})
        for (const double phi : {0.3, 1.9, -2.4}) {
            const Complex z = at_level(level, phi);
            INFO("level ", level, " phi ", phi);
            CHECK(std::abs(evaluate_laurent(e, z) - f(z)) < 1e-9);
        }
}

TEST_CASE("rational functions with poles only at the expansion points") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int m1 = 1 + trial % 3, m2 = 1 + (trial / 3) % 3;
        const Complex z1(u(rng) - 1.0, u(rng)), z2(u(rng) + 1.0, u(rng));
        std::vector<Complex> c(static_cast<std::size_t>(m1 + m2));  // numerator degree < m1 + m2
        for (auto& x : c) x = Complex(u(rng), u(rng));
        const Expr z = Expr::variable();
        const FunctionModel f{poly_expr(c) / (pow(z - Expr::constant(z1), m1) * pow(z - Expr::constant(z2), m2))};
        const PoleSpec spec{m1, m2};
        const auto e = laurent_expand(f, z1, z2, spec, spec.max_order());
        for (const auto& b : e.b) {
            CHECK(std::abs(b.fwd) < 1e-10);
            CHECK(std::abs(b.rev) < 1e-10);
        }
        TwoPointLaurentExpansion c_only = e;
        for (auto& b : c_only.b) b = {0.0, 0.0};
        for (int k = 0; k < 20; ++k) {
            const Complex p = 0.5 * (z1 + z2) + 3.0 * Complex(u(rng), u(rng));
            INFO("m1=", m1, " m2=", m2, " z=", p);
            CHECK(rel(evaluate_laurent(c_only, p), f(p)) < 1e-12);
        }
    }
}

TEST_CASE("oracle equality for b, c on the corpus, n <= 8") {
    for (const char* text : {"exp(z)/(z+1)", "1/((z^2-1)*(z^2-4))", "1/((z-1)^2*(z+2))", "1/(1+z^2)"}) {
        const auto f = fn(text);
        const Complex z1 = -1.0, z2 = 1.0;
        const auto s = detect_pole_spec(f, z1, z2);
        const auto g1 = detail::regular_part(f, z1, s.m1, 8 + s.m1);
        const auto g2 = detail::regular_part(f, z2, s.m2, 8 + s.m2);
        for (int n = 0; n <= 8; ++n) {
            INFO(text, " n=", n);
            const auto bf = detail::b_sum(g1, g2, z1, z2, s.m1, s.m2, n);
            const auto br = detail::b_sum(g2, g1, z2, z1, s.m2, s.m1, n);
            const auto cf = detail::c_sum(g1, g2, z1, z2, s.m1, s.m2, n);
            const auto cr = detail::c_sum(g2, g1, z2, z1, s.m2, s.m1, n);
            CHECK(agreement_ratio(bf.value, bf.magnitude, oracle_b(f, z1, z2, n), 1e-10) <= 1.0);
            CHECK(agreement_ratio(br.value, br.magnitude, oracle_b(f, z2, z1, n), 1e-10) <= 1.0);
            CHECK(agreement_ratio(cf.value, cf.magnitude, oracle_c(f, z1, z2, n), 1e-10) <= 1.0);
            CHECK(agreement_ratio(cr.value, cr.magnitude, oracle_c(f, z2, z1, n), 1e-10) <= 1.0);
        }
    }
}

TEST_CASE("annulus convergence for 1/((z^2-1)(z^2-4))") {
    const auto f = fn("1/((z^2-1)*(z^2-4))");
    const auto e20 = laurent_expand(f, -1.0, 1.0, {1, 1}, 20);
    const auto e40 = laurent_expand(f, -1.0, 1.0, {1, 1}, 40);
    for (const double level : {0.5, 1.5, 2.0})
        CHECK(std::abs(evaluate_laurent(e40, at_level(level, 0.7)) - f(at_level(level, 0.7))) < 1e-6);
    const Complex out = at_level(4.0, 0.7);
    CHECK(std::abs(evaluate_laurent(e40, out)) > std::abs(evaluate_laurent(e20, out)));
}

TEST_CASE("Taylor-Laurent coefficients of 1/(z-z1)") {
    for (const auto& [z1, z2] : {std::pair<Complex, Complex>{-1.0, 1.0}, {2i, 0.5}}) {
        const FunctionModel f{Expr::constant(1.0) / (Expr::variable() - Expr::constant(z1))};
        const auto d0 = coeff_d(f, z1, z2, 1, 0);
        CHECK(std::abs(d0.fwd) < 1e-15);
        CHECK(std::abs(d0.rev) < 1e-15);
        CHECK(std::abs(coeff_e(f, z1, z2, 1, 0) - 1.0) < 1e-15);
        for (int n = 1; n < 4; ++n) {
            CHECK(coeff_e(f, z1, z2, 1, n) == Complex(0.0));
            const auto d = coeff_d(f, z1, z2, 1, n);
            CHECK(std::abs(d.fwd) < 1e-14);
            CHECK(std::abs(d.rev) < 1e-14);
        }
    }
    const auto f = fn("1/(z+1)");
    const auto e = taylor_laurent_expand(f, -1.0, 1.0, 1, 2);
    for (const Complex z : {Complex(0.0), Complex(3.0, -2.0), Complex(-1.2, 0.1)}) CHECK(rel(evaluate_tl(e, z), f(z)) < 1e-14);
}

TEST_CASE("e-part of 1/(z+1)^2 carries the principal part") {
    const auto f = fn("1/(z+1)^2");
    const auto e = taylor_laurent_expand(f, -1.0, 1.0, 2, 2);
    const Expr z = Expr::variable();
    Expr part = Expr::constant(0.0);
    for (int n = 0; n < 2; ++n)
        part = part + Expr::constant(e.e[static_cast<std::size_t>(n)]) * pow(z - Expr::constant(1.0), n) /
                          pow(z + Expr::constant(1.0), n + 1);
    CHECK(jet_of(part - f.expr(), -1.0, 3).min_exponent() >= 0);
    // (z-1) = (z+1) - 2 gives e_0 = 1/2, e_1 = -1/2.
    CHECK(std::abs(e.e[0] - 0.5) < 1e-15);
    CHECK(std::abs(e.e[1] + 0.5) < 1e-15);
    for (const Complex p : {Complex(0.3, 0.1), Complex(-0.5, -0.2)}) CHECK(rel(evaluate_tl(e, p), f(p)) < 1e-13);
}

TEST_CASE("exp(z)/(z+1) Taylor-Laurent") {
    const auto f = fn("exp(z)/(z+1)");
    const auto g = detail::regular_part(f, -1.0, 1, 1 + 8);
    const auto t = taylor_coefficients(f.expr(), 1.0, 8);
    for (int n = 0; n <= 6; ++n) {
        const auto [fwd, rev] = detail::d_sum(g, t, -1.0, 1.0, 1, n);
        const auto o = oracle_d(f, -1.0, 1.0, n);
        INFO("n=", n);
        CHECK(agreement_ratio(fwd.value, fwd.magnitude, o.fwd, 1e-10) <= 1.0);
        CHECK(agreement_ratio(rev.value, rev.magnitude, o.rev, 1e-10) <= 1.0);
        const auto es = detail::e_sum(g, -1.0, 1.0, 1, n);
        CHECK(agreement_ratio(es.value, es.magnitude, oracle_e(f, -1.0, 1.0, n), 1e-10) <= 1.0);
    }
    const auto e = taylor_laurent_expand(f, -1.0, 1.0, 1, 15);
    for (const double level : {0.5, 1.0, 2.0})
        for (const double phi : {0.4, 2.0, -1.5}) {
            const Complex z = at_level(level, phi);
            INFO("level ", level, " phi ", phi);
            CHECK(std::abs(evaluate_tl(e, z) - f(z)) < 1e-9);
        }
}

TEST_CASE("regularized functions") {
    const auto zero1 = regularize_laurent(fn("1/((z+1)*(z-1))"), -1.0, 1.0, {1, 1});
    const auto zero2 = regularize_taylor_laurent(fn("1/(z+1)"), -1.0, 1.0, 1);
    for (const Complex z : {Complex(0.0), Complex(2.0, 1.0), Complex(-0.4, -3.0)}) {
        CHECK(std::abs(zero1(z)) < 1e-14);
        CHECK(std::abs(zero2(z)) < 1e-14);
    }
    CHECK(zero1.entire());

    const auto f = fn("exp(z)/(z+1)");
    const auto g = regularize_taylor_laurent(f, -1.0, 1.0, 1);
    CHECK(jet_of(g.expr(), -1.0, 4).min_exponent() >= 0);
    CHECK(g.entire());
    const double e0 = std::exp(-1.0);  // residue of f at -1
    CHECK(std::abs(coeff_e(f, -1.0, 1.0, 1, 0) - e0) < 1e-15);
    const Complex g0 = 1.0 - e0;
    CHECK(std::abs(g(0.0) - g0) < 1e-14);
    CHECK(std::abs(evaluate(expand(g, -1.0, 1.0, 20), 0.0) - g0) < 1e-10);

    const auto h = regularize_laurent(fn("1/((z^2-1)*(z^2-4))"), -1.0, 1.0, {1, 1});
    CHECK(jet_of(h.expr(), -1.0, 3).min_exponent() >= 0);
    CHECK(jet_of(h.expr(), 1.0, 3).min_exponent() >= 0);
    CHECK(h.poles().size() == 2);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(laurent_expand(fn("1/(z-1)^2"), -1.0, 1.0, {0, 1}, 3), DomainError);
    CHECK_THROWS_AS(taylor_laurent_expand(fn("1/(z-1)"), -1.0, 1.0, 0, 3), PoleError);
    CHECK_THROWS_AS(coeff_b(fn("exp(z)"), 1.0, 1.0, {0, 0}, 0), DomainError);
}
