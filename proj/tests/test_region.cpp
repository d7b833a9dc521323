#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "twopoint/laurent.hpp"
#include "twopoint/region.hpp"
#include "twopoint/taylor.hpp"

using namespace twopoint;
using namespace std::complex_literals;

namespace {

FunctionModel fn(const char* text) { return FunctionModel::parse(text); }

FunctionModel with_poles(std::vector<Pole> poles) { return FunctionModel(parse("1"), std::move(poles)); }

// A point with |(z - z1)(z - z2)| = level, direction set by phi and the root choice.
Complex at_level(Complex z1, Complex z2, double level, double phi, bool other_root = false) {
    const Complex c = 0.5 * (z1 + z2), h = 0.5 * (z1 - z2);
    const Complex w = std::sqrt(h * h + level * std::polar(1.0, phi));
    return other_root ? c - w : c + w;
}

void check_on_curves(const std::vector<BoundaryPoint>& pts, Complex z1, Complex z2, double r_cassini, double r_outer,
                     double r_inner, double r_apollonius) {
    for (const auto& p : pts) {
        INFO(p.curve, " theta=", p.theta, " z=", p.z);
        double r = 0.0;
        if (p.curve.rfind("cassini", 0) == 0)
            r = r_cassini;
        else if (p.curve.rfind("outer", 0) == 0)
            r = r_outer;
        else if (p.curve.rfind("inner", 0) == 0)
            r = r_inner;
        if (p.curve == "apollonius") {
            if (std::abs(r_apollonius - 1.0) <= 1e-12)
                CHECK(std::abs(std::abs(p.z - z2) - std::abs(p.z - z1)) <= 1e-10 * std::abs(z1 - z2));
            else
                CHECK(std::abs(std::abs(p.z - z2) / std::abs(p.z - z1) - r_apollonius) <= 1e-10 * r_apollonius);
        } else {
            CHECK(std::abs(cassini_level(z1, z2, p.z) - r) <= 1e-10 * r);
        }
    }
}

}  // namespace

TEST_CASE("Taylor regions") {
    const auto o = taylor_region(fn("1/(1+z^2)"), -1.0, 1.0);
    CHECK(std::abs(o.r - 2.0) < 1e-14);
    CHECK(o.topology == Topology::one_lobe);
    CHECK(contains(o, 0.0));
    CHECK(!contains(o, 2.0));

    const auto e = taylor_region(fn("exp(z)"), -1.0, 1.0);
    CHECK(std::isinf(e.r));
    CHECK(e.topology == Topology::unbounded);
    CHECK(contains(e, Complex(1e6, -3e7)));
    CHECK_THROWS_AS(boundary(e, 64), DomainError);

    const auto t = taylor_region(fn("1/(z^2-1/4)"), -1.0, 1.0);
    CHECK(std::abs(t.r - 0.75) < 1e-14);
    CHECK(t.topology == Topology::two_lobes);
    CHECK(!contains(t, 0.0));
    CHECK(contains(t, 1.1));

    CHECK_THROWS_AS(taylor_region(fn("1/(z-1)"), -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(taylor_region(fn("exp(z)"), 1.0, 1.0), DomainError);
}

TEST_CASE("Laurent annuli") {
    const Complex inner[] = {-1.0, 1.0};
    const auto a = laurent_region(fn("1/((z^2-1)*(z^2-4))"), -1.0, 1.0, inner);
    CHECK(a.r2 == 0.0);
    CHECK(std::abs(a.r1 - 3.0) < 1e-14);
    const auto b = laurent_region(fn("1/(z^2-1)"), -1.0, 1.0, inner);
    CHECK(b.r2 == 0.0);
    CHECK(std::isinf(b.r1));
    const Complex zero[] = {0.0};
    const auto c = laurent_region(fn("1/(z*(z^2-9))"), -1.0, 1.0, zero);
    CHECK(std::abs(c.r2 - 1.0) < 1e-14);
    CHECK(std::abs(c.r1 - 8.0) < 1e-12);
    const CassiniAnnulus ring{-1.0, 1.0, 3.0, 1.0};
    CHECK(!contains(ring, 0.0));  // |z^2 - 1| = 1 is the inner boundary
    CHECK(contains(ring, 1.2i));
    CHECK_THROWS_AS(laurent_region(fn("1/(z*(z-3))"), -1.0, 1.0, std::vector<Complex>{0.5}), DomainError);
    // Inner pole farther out than an outer one: empty annulus.
    CHECK_THROWS_AS(laurent_region(fn("1/((z-0.1)*(z-5))"), -1.0, 1.0, std::vector<Complex>{5.0}), DomainError);
}

TEST_CASE("Taylor-Laurent regions and Apollonius sets") {
    const auto v = taylor_laurent_region(fn("exp(z)/(z+1)"), -1.0, 1.0);
    CHECK(std::isinf(v.r1));
    CHECK(v.apollonius.side == Apollonius::Side::vacuous);
    CHECK(contains(v, 5.0));
    CHECK(!contains(v, -1.0));

    const Complex zero[] = {0.0};
    const auto h = taylor_laurent_region(fn("1/((z+1)*z*(z-4))"), -1.0, 1.0, zero);
    CHECK(std::abs(h.r2 - 1.0) < 1e-15);
    CHECK(h.apollonius.side == Apollonius::Side::half_plane);
    CHECK(std::abs(h.r1 - 15.0) < 1e-12);
    CHECK(contains(h, 0.5));
    CHECK(!contains(h, -0.5));

    const auto circle = apollonius(-1.0, 1.0, 0.5);
    CHECK(circle.side == Apollonius::Side::interior);
    CHECK(std::abs(circle.center - 5.0 / 3.0) < 1e-15);
    CHECK(std::abs(circle.radius - 4.0 / 3.0) < 1e-15);
    const auto outside = apollonius(-1.0, 1.0, 2.0);
    CHECK(outside.side == Apollonius::Side::exterior);
    // r2 = 2 is the mirror image of r2 = 1/2 in the bisector.
    CHECK(std::abs(outside.center + 5.0 / 3.0) < 1e-15);
    CHECK(std::abs(outside.radius - 4.0 / 3.0) < 1e-15);

    CHECK_THROWS_AS(taylor_laurent_region(fn("1/((z+1)*(z-1))"), -1.0, 1.0), DomainError);
}

TEST_CASE("topology across the lemniscate") {
    const Complex z1(0.3, -0.2), z2 = z1 + std::polar(2.0, 0.9);  // |z1 - z2|^2 = 4
    CHECK(classify(z1, z2, 1.0) == Topology::lemniscate);
    for (int k = 1; k <= 10; ++k) {
        const double d = std::pow(10.0, -k);
        CHECK(classify(z1, z2, 1.0 + d) == Topology::one_lobe);
        CHECK(classify(z1, z2, 1.0 - d) == Topology::two_lobes);
    }
    CHECK(classify(z1, z2, 1.0 + 1e-13) == Topology::lemniscate);
    CHECK(classify(z1, z2, 1.0 - 1e-13) == Topology::lemniscate);
    CHECK(classify(z1, z2, kUnbounded) == Topology::unbounded);
}

TEST_CASE("boundary samples lie on their curves") {
    for (const double r : {0.3, 0.75, 1.0, 2.0, 9.0}) {
        const Complex z1(-1.0, 0.2), z2(1.0, -0.2);
        const auto pts = boundary(CassiniOval{z1, z2, r, classify(z1, z2, r)}, 128);
        CHECK(pts.size() >= 120);
        check_on_curves(pts, z1, z2, r, 0, 0, 0);
    }
    const CassiniAnnulus ring{-1.0, 1.0, 3.0, 0.5};
    check_on_curves(boundary(ring, 64), -1.0, 1.0, 0, 3.0, 0.5, 0);
    for (const double r2 : {0.5, 1.0, 2.0}) {
        TaylorLaurentRegion d{-1.0, 1.0, 4.0, r2, apollonius(-1.0, 1.0, r2)};
        check_on_curves(boundary(d, 64), -1.0, 1.0, 4.0, 0, 0, r2);
    }
    CHECK_THROWS_AS(boundary(ring, 4), DomainError);
}

TEST_CASE("lemniscate boundary passes through the midpoint") {
    const auto pts = boundary(CassiniOval{-1.0, 1.0, 1.0, Topology::lemniscate}, 64);
    int at_center = 0;
    for (const auto& p : pts)
        if (std::abs(p.z) < 1e-12) ++at_center;
    CHECK(at_center == 1);
}

TEST_CASE("membership is invariant under rigid motions") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const std::vector<Pole> poles{{Complex(0.0, 1.0), 1}, {Complex(0.0, -1.0), 1}, {Complex(2.5, 0.3), 2}, {0.1, 1}};
    const Complex z1 = -1.0, z2 = 1.0;
    const Complex inner_pt[] = {0.1};
    for (int trial = 0; trial < 20; ++trial) {
        const Complex rot = std::polar(1.0, u(rng)), shift(u(rng), u(rng));
        auto move = [&](Complex z) { return rot * z + shift; };
        std::vector<Pole> moved = poles;
        for (auto& p : moved) p.location = move(p.location);
        const Complex moved_inner[] = {move(0.1)};
        const auto o = taylor_region(with_poles({poles[0], poles[1], poles[2]}), z1, z2);
        const auto om = taylor_region(with_poles({moved[0], moved[1], moved[2]}), move(z1), move(z2));
        const auto a = laurent_region(with_poles(poles), z1, z2, inner_pt);
        const auto am = laurent_region(with_poles(moved), move(z1), move(z2), moved_inner);
        const auto d = taylor_laurent_region(with_poles(poles), z1, z2, inner_pt);
        const auto dm = taylor_laurent_region(with_poles(moved), move(z1), move(z2), moved_inner);
        for (int k = 0; k < 50; ++k) {
            const Complex z(u(rng), u(rng));
            const double level = cassini_level(z1, z2, z);
            // Stay clear of boundaries where rounding could flip the answer.
            if (std::abs(level - o.r) < 1e-9 || std::abs(level - a.r1) < 1e-9 || std::abs(level - a.r2) < 1e-9) continue;
            CHECK(contains(o, z) == contains(om, move(z)));
            CHECK(contains(a, z) == contains(am, move(z)));
            const double ratio = std::abs(z - z2) / std::abs(z - z1);
            if (std::abs(ratio - d.r2) < 1e-9) continue;
            CHECK(contains(d, z) == contains(dm, move(z)));
        }
    }
}

TEST_CASE("partial sums converge inside and diverge outside") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Complex z1 = -1.0, z2 = 1.0;
    // Entire cases stop at level 2: the closed-form coefficients carry absolute
    // rounding near eps, amplified by level^N in the partial sum.
    const double entire_cap = 2.0;
    for (const char* text : {"exp(z)", "sin(z)", "z^5-3*z+1", "1/(1+z^2)", "1/(z^2-1/4)"}) {
        const auto f = fn(text);
        const auto o = taylor_region(f, z1, z2);
        const auto e = expand(f, z1, z2, 40);
        const TwoPointExpansion e20{z1, z2, {e.pairs.begin(), e.pairs.begin() + 20}};
        const TwoPointExpansion e25{z1, z2, {e.pairs.begin(), e.pairs.begin() + 25}};
        const double cap = std::isfinite(o.r) ? 0.5 * o.r : entire_cap;
        for (int k = 0; k < 20; ++k) {
            const Complex z = at_level(z1, z2, cap * u(rng), 6.3 * u(rng), k % 2 == 1);
            REQUIRE(contains(o, z));
            INFO(std::string(text), " level ", cassini_level(z1, z2, z), " z=", z);
            CHECK(std::abs(evaluate(e25, z) - f(z)) <= 1e-6 * std::max(1.0, std::abs(f(z))));
        }
        if (!std::isfinite(o.r)) continue;
        for (int k = 0; k < 5; ++k) {
            const Complex z = at_level(z1, z2, o.r * (1.2 + u(rng)), 6.3 * u(rng), k % 2 == 1);
            INFO(std::string(text), " outside z=", z);
            CHECK(std::abs(evaluate(e, z)) > std::abs(evaluate(e20, z)));
        }
    }
    for (const char* text : {"exp(z)/(z+1)", "1/((z^2-1)*(z^2-4))", "1/((z-1)^2*(z+2))"}) {
        const auto f = fn(text);
        const auto a = laurent_region(f, z1, z2);
        const auto spec = detect_pole_spec(f, z1, z2);
        const auto e40 = laurent_expand(f, z1, z2, spec, 40);
        const auto e25 = laurent_expand(f, z1, z2, spec, 25);
        const auto e20 = laurent_expand(f, z1, z2, spec, 20);
        const double cap = std::isfinite(a.r1) ? 0.5 * a.r1 : entire_cap;
        for (int k = 0; k < 20; ++k) {
            const Complex z = at_level(z1, z2, cap * (0.05 + 0.95 * u(rng)), 6.3 * u(rng), k % 2 == 1);
            REQUIRE(contains(a, z));
            INFO(std::string(text), " level ", cassini_level(z1, z2, z), " z=", z);
            CHECK(std::abs(evaluate_laurent(e25, z) - f(z)) <= 1e-6 * std::max(1.0, std::abs(f(z))));
        }
        if (!std::isfinite(a.r1)) continue;
        for (int k = 0; k < 5; ++k) {
            const Complex z = at_level(z1, z2, a.r1 * (1.2 + u(rng)), 6.3 * u(rng), k % 2 == 1);
            INFO(std::string(text), " outside z=", z);
            CHECK(std::abs(evaluate_laurent(e40, z)) > std::abs(evaluate_laurent(e20, z)));
        }
    }
}
