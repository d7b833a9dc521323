#include "twopoint/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace twopoint {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kTwoPiI{0.0, kTwoPi};

// Running trapezoid sums for one circle: sum F(w_k) e^{i theta_k} and sum |F(w_k)|.
struct CircleSums {
    Complex weighted{};
    double magnitude = 0.0;
};

void accumulate(const Integrand& fn, const Circle& c, int nodes, int first, int stride, CircleSums& sums) {
    for (int k = first; k < nodes; k += stride) {
        const double theta = kTwoPi * k / nodes;
        const Complex e = std::polar(1.0, theta);
        const Complex value = fn(c.center + c.radius * e);
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
            throw DomainError("integrand is not finite on the contour");
        sums.weighted += value * e;
        sums.magnitude += std::abs(value);
    }
}

Integral combine(const Contour& c, const std::vector<CircleSums>& sums, int nodes) {
    Integral r{{}, 0.0, nodes};
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const double h = kTwoPi * c.circles[i].radius / nodes;
        r.value += Complex(0.0, h) * sums[i].weighted;
        r.scale += h * sums[i].magnitude;
    }
    return r;
}

// Quadrature scale of fn on a circle with a fixed node count.
double scale_on(const Integrand& fn, const Circle& c, int nodes) {
    CircleSums s;
    try {
        accumulate(fn, c, nodes, 0, 1, s);
    } catch (const Error&) {
        return kInf;
    }
    return kTwoPi * c.radius / nodes * s.magnitude;
}

bool clear_of(const Circle& c, std::span<const Complex> points) {
    for (const Complex p : points)
        if (std::abs(std::abs(p - c.center) - c.radius) <= 1e-6 * c.radius) return false;
    return true;
}

// Best radius in [lo, hi] for a circle about center, by quadrature scale.
std::optional<Circle> pick_circle(const Integrand& fn, Complex center, double lo, double hi, double fallback,
                                  std::span<const Complex> a, std::span<const Complex> b) {
    std::vector<double> radii;
    if (lo < hi) {
        constexpr int kCandidates = 12;
        for (int k = 0; k < kCandidates; ++k) radii.push_back(lo * std::pow(hi / lo, k / (kCandidates - 1.0)));
    }
    if (std::isfinite(fallback) && fallback > 0.0) radii.push_back(fallback);
    std::optional<Circle> best;
    double best_scale = kInf;
    for (const double r : radii) {
        const Circle c{center, r};
        if (!clear_of(c, a) || !clear_of(c, b)) continue;
        const double s = scale_on(fn, c, 256);
        if (s < best_scale) {
            best_scale = s;
            best = c;
        }
    }
    return best;
}

bool windings_ok(const Contour& c, std::span<const Complex> enclosed, std::span<const Complex> excluded) {
    for (const Complex p : enclosed)
        if (std::abs(winding_number(c, p) - 1.0) > 1e-6) return false;
    for (const Complex p : excluded)
        if (std::abs(winding_number(c, p)) > 1e-6) return false;
    return true;
}

std::vector<Complex> distinct(std::vector<Complex> points) {
    std::vector<Complex> out;
    for (const Complex p : points) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](Complex q) {
            return near(p, q, 1e-12 * std::max(1.0, std::abs(p)));
        });
        if (!seen) out.push_back(p);
    }
    return out;
}

bool contains_point(std::span<const Complex> set, Complex p) {
    return std::any_of(set.begin(), set.end(),
                       [&](Complex q) { return near(p, q, 1e-9 * std::max(1.0, std::abs(p))); });
}

// Poles of f outside the inner set.
std::vector<Complex> outer_poles(const FunctionModel& f, std::span<const Complex> inner) {
    std::vector<Complex> out;
    for (const auto& p : f.poles())
        if (!contains_point(inner, p.location)) out.push_back(p.location);
    return out;
}

void require_distinct(Complex z1, Complex z2) {
    if (near(z1, z2, 1e-12 * std::max({1.0, std::abs(z1), std::abs(z2)})))
        throw DomainError("expansion points must be distinct");
}

void require_regular(const FunctionModel& f, Complex z) {
    if (f.pole_order_at(z)) throw PoleError("function has a pole at an expansion point");
}

OracleValue normalized(const Integral& i, Complex factor) {
    return {i.value * factor / kTwoPiI, i.scale * std::abs(factor) / kTwoPi};
}

Integral integrate_around(const Integrand& fn, Complex center, std::span<const Complex> enclosed,
                          std::span<const Complex> excluded, const QuadratureOptions& q) {
    return integrate(fn, make_contour(fn, center, enclosed, excluded), q);
}

Complex centroid(std::span<const Complex> points) {
    Complex s{};
    for (const Complex p : points) s += p;
    return s / static_cast<double>(points.size());
}

}  // namespace

Integral integrate(const Integrand& fn, const Contour& c, const QuadratureOptions& options) {
    if (c.circles.empty()) throw std::invalid_argument("empty contour");
    int nodes = std::max(options.min_nodes, 4);
    std::vector<CircleSums> sums(c.circles.size());
    for (std::size_t i = 0; i < sums.size(); ++i) accumulate(fn, c.circles[i], nodes, 0, 1, sums[i]);
    Integral previous = combine(c, sums, nodes);
    while (nodes < options.max_nodes) {
        nodes *= 2;
        for (std::size_t i = 0; i < sums.size(); ++i) accumulate(fn, c.circles[i], nodes, 1, 2, sums[i]);
        const Integral current = combine(c, sums, nodes);
        const double change = std::abs(current.value - previous.value);
        if (change <= options.tol * std::abs(current.value) + 64.0 * kEps * current.scale) return current;
        previous = current;
    }
    throw ConvergenceError("contour quadrature did not converge with " + std::to_string(options.max_nodes) +
                           " nodes");
}

double winding_number(const Contour& c, Complex p) {
    const Integral i = integrate([p](Complex w) { return 1.0 / (w - p); }, c, {1e-10, 64, 1 << 16});
    return (i.value / kTwoPiI).real();
}

Contour make_contour(const Integrand& fn, Complex center, std::span<const Complex> enclosed_in,
                     std::span<const Complex> excluded_in) {
    const auto enclosed = distinct({enclosed_in.begin(), enclosed_in.end()});
    const auto excluded = distinct({excluded_in.begin(), excluded_in.end()});
    if (enclosed.empty()) throw std::invalid_argument("contour must enclose at least one point");
    for (const Complex p : enclosed)
        for (const Complex q : excluded)
            if (near(p, q, 1e-12 * std::max(1.0, std::abs(p))))
                throw DomainError("no contour separates a point that must be enclosed from one that must not");

    double r_in = 0.0, r_out = kInf;
    for (const Complex p : enclosed) r_in = std::max(r_in, std::abs(p - center));
    for (const Complex p : excluded) r_out = std::min(r_out, std::abs(p - center));

    if (r_in < r_out) {
        double lo, hi;
        if (std::isfinite(r_out)) {
            hi = 0.85 * r_out;
            lo = r_in > 0.0 ? r_in / 0.85 : 0.01 * r_out;
        } else {
            hi = 64.0 * std::max(1.0, r_in);
            lo = r_in > 0.0 ? r_in / 0.85 : 0.25;
        }
        const double middle = std::isfinite(r_out) && r_in > 0.0 ? std::sqrt(r_in * r_out) : kInf;
        if (auto circle = pick_circle(fn, center, lo, hi, lo < hi ? kInf : middle, enclosed, excluded)) {
            Contour c{{*circle}};
            if (windings_ok(c, enclosed, excluded)) return c;
        }
    }

    // One circle per enclosed point.
    Contour c;
    for (const Complex p : enclosed) {
        double d_in = kInf, d_out = kInf;
        for (const Complex q : enclosed)
            if (q != p) d_in = std::min(d_in, std::abs(q - p));
        for (const Complex q : excluded) d_out = std::min(d_out, std::abs(q - p));
        double hi = std::min(0.45 * d_in, 0.85 * d_out);
        if (!std::isfinite(hi)) hi = 1.0;
        auto circle = pick_circle(fn, p, 0.1 * hi, hi, hi, enclosed, excluded);
        if (!circle) throw DomainError("no admissible circle around an enclosed point");
        c.circles.push_back(*circle);
    }
    if (!windings_ok(c, enclosed, excluded)) throw DomainError("constructed contour failed its winding check");
    return c;
}

double relative_error(Complex formula, const OracleValue& oracle) {
    return std::abs(formula - oracle.value) / std::max(std::abs(oracle.value), 1e-300);
}

double agreement_ratio(Complex formula, double formula_magnitude, const OracleValue& oracle, double rel_tol) {
    const double allowed = rel_tol * std::abs(oracle.value) + 64.0 * kEps * (oracle.scale + formula_magnitude);
    return std::abs(formula - oracle.value) / std::max(allowed, 1e-300);
}

OracleValue oracle_a(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    require_distinct(z1, z2);
    require_regular(f, z1);
    require_regular(f, z2);
    const Integrand fn = [&](Complex w) { return f(w) * ipow(w - z1, -n) * ipow(w - z2, -(n + 1)); };
    const std::vector<Complex> enclosed{z1, z2};
    const auto excluded = outer_poles(f, {});
    return normalized(integrate_around(fn, 0.5 * (z1 + z2), enclosed, excluded, options.quadrature), 1.0 / (z2 - z1));
}

ABOracle oracle_ab(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    require_regular(f, z1);
    require_regular(f, z2);
    const Integrand fb = [&](Complex w) { return f(w) * ipow((w - z1) * (w - z2), -(n + 1)); };
    const Integrand fa = [&](Complex w) { return (w - z1 - z2) * fb(w); };
    const std::vector<Complex> enclosed{z1, z2};
    const auto excluded = outer_poles(f, {});
    const Contour c = make_contour(fb, 0.5 * (z1 + z2), enclosed, excluded);
    return {normalized(integrate(fa, c, options.quadrature), 1.0), normalized(integrate(fb, c, options.quadrature), 1.0)};
}

namespace {

// Inner set of the Laurent family: z1, z2 and the extra inner poles.
std::vector<Complex> laurent_inner(Complex z1, Complex z2, const OracleOptions& options) {
    std::vector<Complex> inner{z1, z2};
    inner.insert(inner.end(), options.inner_poles.begin(), options.inner_poles.end());
    return distinct(std::move(inner));
}

std::vector<Complex> tl_inner(const FunctionModel& f, Complex z1, Complex z2, const OracleOptions& options) {
    require_regular(f, z2);
    std::vector<Complex> inner{z1};
    inner.insert(inner.end(), options.inner_poles.begin(), options.inner_poles.end());
    inner = distinct(std::move(inner));
    if (contains_point(inner, z2)) throw DomainError("z2 cannot belong to the inner pole set");
    return inner;
}

}  // namespace

OracleValue oracle_b(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    require_distinct(z1, z2);
    const auto inner = laurent_inner(z1, z2, options);
    const Integrand fn = [&](Complex w) { return f(w) * ipow(w - z1, -n) * ipow(w - z2, -(n + 1)); };
    return normalized(integrate_around(fn, 0.5 * (z1 + z2), inner, outer_poles(f, inner), options.quadrature),
                      1.0 / (z2 - z1));
}

OracleValue oracle_c(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    require_distinct(z1, z2);
    const auto inner = laurent_inner(z1, z2, options);
    const Integrand fn = [&](Complex w) { return f(w) * ipow(w - z1, n + 1) * ipow(w - z2, n); };
    return normalized(integrate_around(fn, 0.5 * (z1 + z2), inner, outer_poles(f, inner), options.quadrature),
                      1.0 / (z2 - z1));
}

OraclePair oracle_d(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    require_distinct(z1, z2);
    auto enclosed = tl_inner(f, z1, z2, options);
    const auto excluded = outer_poles(f, enclosed);
    enclosed.push_back(z2);
    const Integrand fwd = [&](Complex w) { return f(w) * ipow(w - z1, -n) * ipow(w - z2, -(n + 1)); };
    const Integrand rev = [&](Complex w) { return f(w) * ipow(w - z2, -n) * ipow(w - z1, -(n + 1)); };
    const Complex mid = 0.5 * (z1 + z2);
    return {normalized(integrate_around(fwd, mid, enclosed, excluded, options.quadrature), 1.0 / (z2 - z1)),
            normalized(integrate_around(rev, mid, enclosed, excluded, options.quadrature), 1.0 / (z1 - z2))};
}

OracleValue oracle_e(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options) {
    if (n < 0) throw std::invalid_argument("coefficient index must be nonnegative");
    require_distinct(z1, z2);
    const auto inner = tl_inner(f, z1, z2, options);
    auto excluded = outer_poles(f, inner);
    excluded.push_back(z2);
    const Integrand fn = [&](Complex w) { return f(w) * ipow(w - z1, n) * ipow(w - z2, -(n + 1)); };
    return normalized(integrate_around(fn, centroid(inner), inner, excluded, options.quadrature), z1 - z2);
}

const char* to_string(Family family) {
    switch (family) {
        case Family::taylor:
            return "taylor";
        case Family::laurent:
            return "laurent";
        case Family::taylor_laurent:
            return "taylor-laurent";
    }
    return "unknown";
}

OracleValue oracle_remainder(Family family, const FunctionModel& f, Complex z1, Complex z2, int terms, Complex z,
                             const OracleOptions& options) {
    if (terms < 1) throw std::invalid_argument("remainder needs at least one term");
    require_distinct(z1, z2);
    if (f.pole_order_at(z)) throw DomainError("remainder requested at a pole of the function");
    const int N = terms;
    const Complex mid = 0.5 * (z1 + z2);
    const Complex q = (z - z1) * (z - z2);
    // Outer integral, shared by all three families.
    const Integrand outer_fn = [&](Complex w) {
        return f(w) * ipow((w - z1) * (w - z2), -N) / (w - z);
    };

    if (family == Family::taylor) {
        require_regular(f, z1);
        require_regular(f, z2);
        const std::vector<Complex> enclosed{z1, z2, z};
        const auto i = integrate_around(outer_fn, mid, enclosed, outer_poles(f, {}), options.quadrature);
        return normalized(i, ipow(q, N));
    }

    std::vector<Complex> inner;
    Integrand inner_fn;
    Complex inner_factor;
    Complex inner_center;
    std::vector<Complex> outer_enclosed;
    if (family == Family::laurent) {
        inner = laurent_inner(z1, z2, options);
        if (contains_point(inner, z)) throw DomainError("remainder point lies in the inner set");
        inner_fn = [&](Complex w) { return f(w) * ipow((w - z1) * (w - z2), N) / (w - z); };
        inner_factor = ipow(q, -N);
        inner_center = mid;
        outer_enclosed = inner;
    } else {
        inner = tl_inner(f, z1, z2, options);
        if (contains_point(inner, z)) throw DomainError("remainder point lies in the inner set");
        inner_fn = [&](Complex w) { return f(w) * ipow((w - z1) / (w - z2), N) / (w - z); };
        inner_factor = ipow((z - z2) / (z - z1), N);
        inner_center = centroid(inner);
        outer_enclosed = inner;
        outer_enclosed.push_back(z2);
    }
    const auto excluded = outer_poles(f, inner);
    outer_enclosed.push_back(z);
    std::vector<Complex> inner_excluded = excluded;
    inner_excluded.push_back(z);
    if (family == Family::taylor_laurent) inner_excluded.push_back(z2);

    const auto i1 = normalized(integrate_around(outer_fn, mid, outer_enclosed, excluded, options.quadrature), ipow(q, N));
    const auto i2 = normalized(
        integrate_around(inner_fn, inner_center, inner, inner_excluded, options.quadrature), inner_factor);
    return {i1.value - i2.value, i1.scale + i2.scale};
}

}  // namespace twopoint
