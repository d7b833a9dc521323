#pragma once

#include <functional>
#include <span>
#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/expr.hpp"

namespace twopoint {

/// Positively oriented circle.
struct Circle {
    Complex center;
    double radius = 1.0;
};

/// One circle, or a union of disjoint circles (the C1 u C2 form). The
/// integral over a contour is the sum of the circle integrals.
struct Contour {
    std::vector<Circle> circles;

    bool single() const noexcept { return circles.size() == 1; }
};

struct QuadratureOptions {
    double tol = 1e-12;
    int min_nodes = 64;
    int max_nodes = 1 << 16;
};

struct Integral {
    Complex value;
    /// sum |F(w_k)| |dw_k| at the final node count; eps * scale is the
    /// rounding floor of value.
    double scale = 0.0;
    /// Nodes per circle at convergence.
    int nodes = 0;
};

using Integrand = std::function<Complex(Complex)>;

/// Trapezoidal rule on each circle, doubling the node count until two
/// successive estimates agree. Throws ConvergenceError at max_nodes.
Integral integrate(const Integrand& fn, const Contour& c, const QuadratureOptions& options = {});

/// Winding number of c around p, computed by quadrature of 1/(w - p).
double winding_number(const Contour& c, Complex p);

/// A contour around every point of `enclosed` that leaves every point of
/// `excluded` outside. Tries one circle about `center` first, with the radius
/// chosen to minimize the quadrature scale of `fn`; falls back to one small
/// circle per enclosed point. Throws DomainError when the sets are not
/// separable (an enclosed point coincides with an excluded one).
Contour make_contour(const Integrand& fn, Complex center, std::span<const Complex> enclosed,
                     std::span<const Complex> excluded);

/// Value of a normalized Cauchy integral together with its rounding floor.
struct OracleValue {
    Complex value;
    double scale = 0.0;
};

/// |formula - oracle| / |oracle|.
double relative_error(Complex formula, const OracleValue& oracle);

/// |formula - oracle| measured against rel_tol |oracle| plus the rounding
/// floor 64 eps (oracle.scale + formula_magnitude), where formula_magnitude
/// is the sum of the magnitudes of the closed form's terms. At most 1 means
/// the two agree. Exactly-zero coefficients make a pure relative test
/// meaningless; the floor is what both routes can resolve in double.
double agreement_ratio(Complex formula, double formula_magnitude, const OracleValue& oracle, double rel_tol);

struct OracleOptions {
    QuadratureOptions quadrature;
    /// Poles of f, besides z1 and z2, that belong to the inner set
    /// (Laurent and Taylor-Laurent families only).
    std::vector<Complex> inner_poles;
};

/// a_n(z1, z2) as a Cauchy integral over a contour around z1 and z2.
OracleValue oracle_a(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options = {});

struct ABOracle {
    OracleValue a;
    OracleValue b;
};

/// A_n and B_n by their Cauchy integrals; z1 = z2 is allowed.
ABOracle oracle_ab(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options = {});

/// b_n(z1, z2) over the outer contour.
OracleValue oracle_b(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options = {});
/// c_n(z1, z2) over the inner contour.
OracleValue oracle_c(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options = {});
struct OraclePair {
    OracleValue fwd;
    OracleValue rev;
};

/// {d_n(z1, z2), d_n(z2, z1)} over the outer contour. z1 is the singular point.
OraclePair oracle_d(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options = {});
/// e_n(z1, z2) over an inner contour that leaves z2 outside.
OracleValue oracle_e(const FunctionModel& f, Complex z1, Complex z2, int n, const OracleOptions& options = {});

enum class Family { taylor, laurent, taylor_laurent };

const char* to_string(Family family);

/// r_N(z1, z2; z) by its Cauchy integral(s). Throws DomainError when z sits
/// on a pole of f or, for the Laurent families, on a point of the inner set.
OracleValue oracle_remainder(Family family, const FunctionModel& f, Complex z1, Complex z2, int terms, Complex z,
                             const OracleOptions& options = {});

}  // namespace twopoint
