#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/contour.hpp"
#include "twopoint/expr.hpp"

namespace twopoint {

/// One pass/fail line of the verification suite. A check passes when
/// measured <= threshold.
struct Check {
    std::string function;
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

struct VerificationReport {
    std::vector<Check> checks;

    int passed() const;
    int failed() const;
    bool ok() const { return failed() == 0; }
    void append(const VerificationReport& other);
};

struct VerifyOptions {
    /// Coefficients n = 0 .. terms-1 are compared with their oracles.
    int terms = 9;
    /// Random interior points per family for the remainder identity.
    int points = 20;
    std::uint64_t seed = 0;
    /// Relative tolerance for coefficient agreement.
    double coefficient_tol = 1e-10;
    /// Absolute tolerance for f = partial sum + remainder.
    double remainder_tol = 1e-9;
    /// Extra inner poles for the Laurent and Taylor-Laurent families.
    std::vector<Complex> inner_poles;
};

/// Every family that applies at (z1, z2): two-point Taylor when f is regular
/// at both points, two-point Laurent always, Taylor-Laurent when at least one
/// point is regular (oriented so that z2 is regular).
VerificationReport verify_function(const FunctionModel& f, const std::string& label, Complex z1, Complex z2,
                                   const VerifyOptions& options);

/// The built-in corpus, expanded about z1 = -1, z2 = 1.
const std::vector<std::string>& verification_corpus();
VerificationReport verify_corpus(const VerifyOptions& options);

/// Uniform random points z with lo < |(z-z1)(z-z2)| < hi, each at least
/// `clearance` away from every point of `avoid` and satisfying `accept`.
/// Throws DomainError when rejection sampling cannot fill the request.
std::vector<Complex> sample_level_band(std::mt19937_64& rng, Complex z1, Complex z2, double lo, double hi, int count,
                                       const std::vector<Complex>& avoid, double clearance,
                                       const std::function<bool(Complex)>& accept = {});

}  // namespace twopoint
