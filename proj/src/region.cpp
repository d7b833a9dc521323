#include "twopoint/region.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace twopoint {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool same_point(Complex a, Complex b) { return near(a, b, 1e-9 * std::max(1.0, std::abs(a))); }

bool in_set(std::span<const Complex> set, Complex p) {
    return std::any_of(set.begin(), set.end(), [&](Complex q) { return same_point(p, q); });
}

void require_distinct(Complex z1, Complex z2) {
    if (same_point(z1, z2)) throw DomainError("expansion points must be distinct");
}

void require_poles_of(const FunctionModel& f, std::span<const Complex> inner) {
    for (const Complex s : inner)
        if (!f.pole_order_at(s)) throw DomainError("inner pole is not a pole of the function");
}

// Cassini curve |(z-z1)(z-z2)| = r. Parameter theta is the argument of
// (z-z1)(z-z2), anchored where the discriminant vanishes so the lemniscate
// samples its double point. With theta = anchor + phi, e^{i anchor} h^-2 is
// exactly -|h|^-2, which keeps the double point exact.
void cassini_curve(Complex z1, Complex z2, double r, int count, const std::string& label,
                   std::vector<BoundaryPoint>& out) {
    const int m = count / 2;
    const Complex c = 0.5 * (z1 + z2);
    const Complex h = 0.5 * (z1 - z2);
    const Complex h2 = h * h;
    const double hn = std::norm(h);
    const double anchor = std::arg(-h2);
    const Topology t = classify(z1, z2, r);
    auto theta_at = [&](int k) { return std::fmod(anchor + kTwoPi * k / m + 2 * kTwoPi, kTwoPi); };
    if (t == Topology::one_lobe) {
        // w^2 = h^2 + r e^{i theta} winds once around 0: follow the + root over
        // one turn of theta and the - root over the next.
        const double sr = std::sqrt(r);
        for (int branch = 0; branch < 2; ++branch)
            for (int k = 0; k < m; ++k) {
                const double phi = kTwoPi * k / m;
                const double phase = 0.5 * (anchor + phi) + (branch == 0 ? 0.0 : std::numbers::pi);
                const Complex w = sr * std::polar(1.0, phase) * std::sqrt(1.0 - hn / r * std::polar(1.0, -phi));
                out.push_back({label, theta_at(k), c + w});
            }
        return;
    }
    // Two lobes (or the lemniscate): w = +-h sqrt(1 - (r/|h|^2) e^{i phi}),
    // continuous in phi since r <= |h|^2.
    for (int lobe = 0; lobe < 2; ++lobe) {
        const double sign = lobe == 0 ? 1.0 : -1.0;
        const std::string name = label + "-lobe" + std::to_string(lobe + 1);
        for (int k = 0; k < m; ++k) {
            const Complex w = sign * h * std::sqrt(1.0 - r / hn * std::polar(1.0, kTwoPi * k / m));
            if (lobe == 1 && t == Topology::lemniscate && std::abs(w) <= 1e-6 * std::abs(h)) continue;
            out.push_back({name, theta_at(k), c + w});
        }
    }
}

void apollonius_curve(Complex z1, Complex z2, const Apollonius& a, double extent, int count,
                      std::vector<BoundaryPoint>& out) {
    switch (a.side) {
        case Apollonius::Side::vacuous:
            return;
        case Apollonius::Side::half_plane: {
            const Complex mid = 0.5 * (z1 + z2);
            const Complex dir = Complex(0.0, 1.0) * (z2 - z1) / std::abs(z2 - z1);
            for (int k = 0; k < count; ++k) {
                const double t = -extent + 2.0 * extent * k / (count - 1);
                out.push_back({"apollonius", t, mid + t * dir});
            }
            return;
        }
        case Apollonius::Side::interior:
        case Apollonius::Side::exterior:
            for (int k = 0; k < count; ++k) {
                const double theta = kTwoPi * k / count;
                out.push_back({"apollonius", theta, a.center + a.radius * std::polar(1.0, theta)});
            }
            return;
    }
}

void require_count(int count) {
    if (count < 8) throw DomainError("boundary needs at least 8 samples");
}

}  // namespace

const char* to_string(Topology t) {
    switch (t) {
        case Topology::one_lobe:
            return "one-lobe";
        case Topology::lemniscate:
            return "lemniscate";
        case Topology::two_lobes:
            return "two-lobes";
        case Topology::unbounded:
            return "unbounded";
    }
    return "unknown";
}

const char* to_string(Apollonius::Side s) {
    switch (s) {
        case Apollonius::Side::interior:
            return "interior";
        case Apollonius::Side::exterior:
            return "exterior";
        case Apollonius::Side::half_plane:
            return "half-plane";
        case Apollonius::Side::vacuous:
            return "vacuous";
    }
    return "unknown";
}

Topology classify(Complex z1, Complex z2, double r) {
    if (!std::isfinite(r)) return Topology::unbounded;
    const double four_r = 4.0 * r;
    const double d2 = std::norm(z1 - z2);
    if (std::abs(four_r - d2) <= 1e-12 * std::max(four_r, d2)) return Topology::lemniscate;
    return four_r > d2 ? Topology::one_lobe : Topology::two_lobes;
}

Apollonius apollonius(Complex z1, Complex z2, double r2) {
    if (!(r2 > 0.0)) throw DomainError("Apollonius ratio must be positive");
    if (!std::isfinite(r2)) return {Apollonius::Side::vacuous, {}, 0.0};
    if (std::abs(r2 - 1.0) <= 1e-12) return {Apollonius::Side::half_plane, {}, 0.0};
    const double s = r2 * r2;
    return {r2 < 1.0 ? Apollonius::Side::interior : Apollonius::Side::exterior, z1 + (z2 - z1) / (1.0 - s),
            std::abs(z1 - z2) * r2 / std::abs(s - 1.0)};
}

CassiniOval taylor_region(const FunctionModel& f, Complex z1, Complex z2) {
    require_distinct(z1, z2);
    double r = kUnbounded;
    for (const auto& p : f.poles()) r = std::min(r, cassini_level(z1, z2, p.location));
    if (r <= 0.0 || f.pole_order_at(z1) || f.pole_order_at(z2))
        throw DomainError("pole at an expansion point: the Taylor region is empty, use a Laurent variant");
    return {z1, z2, r, classify(z1, z2, r)};
}

CassiniAnnulus laurent_region(const FunctionModel& f, Complex z1, Complex z2, std::span<const Complex> inner_poles) {
    require_distinct(z1, z2);
    require_poles_of(f, inner_poles);
    CassiniAnnulus a{z1, z2, kUnbounded, 0.0};
    for (const auto& p : f.poles()) {
        const Complex s = p.location;
        if (same_point(s, z1) || same_point(s, z2)) continue;
        const double level = cassini_level(z1, z2, s);
        if (in_set(inner_poles, s))
            a.r2 = std::max(a.r2, level);
        else
            a.r1 = std::min(a.r1, level);
    }
    if (a.r2 >= a.r1) throw DomainError("empty Cassini annulus: r2 >= r1");
    return a;
}

TaylorLaurentRegion taylor_laurent_region(const FunctionModel& f, Complex z1, Complex z2,
                                          std::span<const Complex> inner_poles) {
    require_distinct(z1, z2);
    require_poles_of(f, inner_poles);
    if (f.pole_order_at(z2) || in_set(inner_poles, z2))
        throw DomainError("z2 must be a regular point for the Taylor-Laurent expansion");
    TaylorLaurentRegion d{z1, z2, kUnbounded, kUnbounded, {}};
    for (const auto& p : f.poles()) {
        const Complex s = p.location;
        if (same_point(s, z1)) continue;
        if (in_set(inner_poles, s))
            d.r2 = std::min(d.r2, std::abs(s - z2) / std::abs(s - z1));
        else
            d.r1 = std::min(d.r1, cassini_level(z1, z2, s));
    }
    if (!(d.r1 > 0.0) || !(d.r2 > 0.0)) throw DomainError("empty Taylor-Laurent region");
    d.apollonius = apollonius(z1, z2, d.r2);
    return d;
}

bool contains(const CassiniOval& region, Complex z) {
    return cassini_level(region.z1, region.z2, z) < region.r;
}

bool contains(const CassiniAnnulus& region, Complex z) {
    const double level = cassini_level(region.z1, region.z2, z);
    return region.r2 < level && level < region.r1;
}

bool contains(const TaylorLaurentRegion& region, Complex z) {
    if (!(cassini_level(region.z1, region.z2, z) < region.r1)) return false;
    const double to_z1 = std::abs(z - region.z1);
    if (to_z1 == 0.0) return false;
    if (!std::isfinite(region.r2)) return true;
    return std::abs(z - region.z2) < region.r2 * to_z1;
}

std::vector<BoundaryPoint> boundary(const CassiniOval& region, int count) {
    require_count(count);
    if (!std::isfinite(region.r)) throw DomainError("unbounded region has no boundary");
    std::vector<BoundaryPoint> out;
    cassini_curve(region.z1, region.z2, region.r, count, "cassini", out);
    return out;
}

std::vector<BoundaryPoint> boundary(const CassiniAnnulus& region, int count) {
    require_count(count);
    std::vector<BoundaryPoint> out;
    if (std::isfinite(region.r1)) cassini_curve(region.z1, region.z2, region.r1, count, "outer", out);
    if (region.r2 > 0.0) cassini_curve(region.z1, region.z2, region.r2, count, "inner", out);
    if (out.empty()) throw DomainError("annulus has no finite boundary curve");
    return out;
}

std::vector<BoundaryPoint> boundary(const TaylorLaurentRegion& region, int count) {
    require_count(count);
    std::vector<BoundaryPoint> out;
    if (std::isfinite(region.r1)) cassini_curve(region.z1, region.z2, region.r1, count, "cassini", out);
    const double extent = 2.0 * std::max(std::abs(region.z1 - region.z2),
                                          std::isfinite(region.r1) ? std::sqrt(region.r1) : 0.0);
    apollonius_curve(region.z1, region.z2, region.apollonius, extent, count, out);
    if (out.empty()) throw DomainError("region has no finite boundary curve");
    return out;
}

}  // namespace twopoint
