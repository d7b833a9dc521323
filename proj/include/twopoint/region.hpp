#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/expr.hpp"

namespace twopoint {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class Topology { one_lobe, lemniscate, two_lobes, unbounded };

const char* to_string(Topology t);

/// Shape of |(z-z1)(z-z2)| = r: one lobe when 4r > |z1-z2|^2, two when
/// 4r < |z1-z2|^2, the lemniscate in between (to 1e-12 relative).
Topology classify(Complex z1, Complex z2, double r);

/// |(z - z1)(z - z2)|.
inline double cassini_level(Complex z1, Complex z2, Complex z) { return std::abs((z - z1) * (z - z2)); }

/// |(z-z1)(z-z2)| < r; r = kUnbounded for entire functions.
struct CassiniOval {
    Complex z1;
    Complex z2;
    double r = kUnbounded;
    Topology topology = Topology::unbounded;
};

/// r2 < |(z-z1)(z-z2)| < r1.
struct CassiniAnnulus {
    Complex z1;
    Complex z2;
    double r1 = kUnbounded;
    double r2 = 0.0;
};

/// The set |z - z2| < r2 |z - z1|.
struct Apollonius {
    enum class Side { interior, exterior, half_plane, vacuous };
    Side side = Side::vacuous;
    /// Circle center and radius for interior/exterior.
    Complex center;
    double radius = 0.0;
};

const char* to_string(Apollonius::Side s);

/// |(z-z1)(z-z2)| < r1 and |z - z2| < r2 |z - z1|. r2 = kUnbounded when the
/// only inner pole is z1, which makes the second condition vacuous.
struct TaylorLaurentRegion {
    Complex z1;
    Complex z2;
    double r1 = kUnbounded;
    double r2 = kUnbounded;
    Apollonius apollonius;
};

/// Apollonius set |z - z2| < r2 |z - z1| for 0 < r2 <= kUnbounded.
Apollonius apollonius(Complex z1, Complex z2, double r2);

/// r = min over poles s of |(s-z1)(s-z2)|. Throws DomainError when a pole
/// sits at z1 or z2 (r = 0).
CassiniOval taylor_region(const FunctionModel& f, Complex z1, Complex z2);

/// Poles at z1 and z2 are always inner; `inner_poles` adds others, each of
/// which must be a pole of f. Throws DomainError when r2 >= r1.
CassiniAnnulus laurent_region(const FunctionModel& f, Complex z1, Complex z2, std::span<const Complex> inner_poles = {});

/// The inner set is {z1} plus `inner_poles`; z2 must be a regular point.
TaylorLaurentRegion taylor_laurent_region(const FunctionModel& f, Complex z1, Complex z2,
                                          std::span<const Complex> inner_poles = {});

/// Strict membership; boundaries and poles are never members.
bool contains(const CassiniOval& region, Complex z);
bool contains(const CassiniAnnulus& region, Complex z);
bool contains(const TaylorLaurentRegion& region, Complex z);

struct BoundaryPoint {
    std::string curve;
    double theta = 0.0;
    Complex z;
};

/// Samples of each boundary curve, labeled. Cassini curves take both roots
/// z = [(z1+z2) +- sqrt((z1-z2)^2 + 4 r e^{i theta})]/2 on count/2 angles,
/// ordered along each lobe. Apollonius circles use count angles; a half-plane
/// boundary is sampled as a segment of the bisector, with theta holding the
/// arc-length parameter. Throws DomainError for count < 8 and for a region
/// with no finite boundary.
std::vector<BoundaryPoint> boundary(const CassiniOval& region, int count);
std::vector<BoundaryPoint> boundary(const CassiniAnnulus& region, int count);
std::vector<BoundaryPoint> boundary(const TaylorLaurentRegion& region, int count);

}  // namespace twopoint
