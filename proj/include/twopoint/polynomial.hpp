#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "twopoint/common.hpp"

namespace twopoint {

/// Dense polynomial with complex coefficients, lowest degree first.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coefficients);

    static Polynomial constant(Complex c) { return Polynomial({c}); }
    static Polynomial monomial_root(Complex root) { return Polynomial({-root, 1.0}); }

    /// Degree after dropping exactly-zero leading coefficients; -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    std::span<const Complex> coefficients() const noexcept { return c_; }
    Complex operator[](int k) const { return k >= 0 && k <= degree() ? c_[k] : Complex{}; }

    Complex operator()(Complex z) const;
    /// Sum of |c_k| |z|^k; the rounding error of operator() is a few ulps of this.
    double magnitude(double abs_z) const;
    Polynomial derivative() const;

    friend Polynomial operator-(const Polynomial& a);
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Complex s, const Polynomial& a);
    friend Polynomial pow(const Polynomial& a, int n);

private:
    void trim();
    std::vector<Complex> c_;
};

struct Root {
    Complex location;
    int multiplicity = 1;
};

struct RootOptions {
    int max_iterations = 500;
    int max_restarts = 8;
    std::uint64_t seed = 0x5eed;
};

/// All roots of p with multiplicities, by Aberth-Ehrlich simultaneous iteration.
///
/// Approximations whose inclusion disks overlap are grouped into one root of
/// the combined multiplicity m, then polished by Newton's method on the
/// (m-1)-th derivative. Throws ConvergenceError when every restart fails.
std::vector<Root> polynomial_roots(const Polynomial& p, const RootOptions& options = {});

}  // namespace twopoint
