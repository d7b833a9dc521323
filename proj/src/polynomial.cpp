#include "twopoint/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace twopoint {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Horner {
    Complex value;
    Complex slope;
};

Horner horner(std::span<const Complex> c, Complex z) {
    Complex v{}, d{};
    for (auto k = c.size(); k-- > 0;) {
        d = d * z + v;
        v = v * z + c[k];
    }
    return {v, d};
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

// Runs Aberth-Ehrlich from the given starting points. Returns false if the
// iteration did not settle within max_iterations.
bool aberth(const Polynomial& p, std::vector<Complex>& z, int max_iterations) {
    const auto c = p.coefficients();
    const auto n = z.size();
    std::vector<bool> done(n, false);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const auto [value, slope] = horner(c, z[i]);
            if (std::abs(value) <= 8.0 * kEps * p.magnitude(std::abs(z[i]))) {
                done[i] = true;
                continue;
            }
            all_done = false;
            if (slope == Complex{}) {
                z[i] += Complex(1e-3, 1e-3) * std::max(1.0, std::abs(z[i]));
                continue;
            }
            const Complex ratio = value / slope;
            Complex repulsion{};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && z[i] != z[j]) repulsion += 1.0 / (z[i] - z[j]);
            const Complex step = ratio / (1.0 - ratio * repulsion);
            z[i] -= step;
            if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) done[i] = true;
        }
        if (all_done) return true;
        for (auto zi : z)
            if (!std::isfinite(zi.real()) || !std::isfinite(zi.imag())) return false;
    }
    return std::all_of(done.begin(), done.end(), [](bool d) { return d; });
}

Complex polish(const Polynomial& p, Complex start, int multiplicity) {
    Polynomial q = p;
    for (int k = 1; k < multiplicity; ++k) q = q.derivative();
    const Polynomial dq = q.derivative();
    Complex best = start;
    double best_residual = std::abs(q(start));
    Complex x = start;
    for (int iter = 0; iter < 20 && best_residual > 0.0; ++iter) {
        const Complex slope = dq(x);
        if (slope == Complex{}) break;
        x -= q(x) / slope;
        const double residual = std::abs(q(x));
        if (!(residual < best_residual)) break;
        best = x;
        best_residual = residual;
    }
    return best;
}

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coefficients) : c_(std::move(coefficients)) { trim(); }

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
}

Complex Polynomial::operator()(Complex z) const { return horner(c_, z).value; }

double Polynomial::magnitude(double abs_z) const {
    double m = 0.0;
    for (auto k = c_.size(); k-- > 0;) m = m * abs_z + std::abs(c_[k]);
    return m;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

Polynomial operator-(const Polynomial& a) { return Complex(-1.0) * a; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = a[static_cast<int>(k)] + b[static_cast<int>(k)];
    return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
}

Polynomial operator*(Complex s, const Polynomial& a) {
    std::vector<Complex> r(a.c_);
    for (auto& x : r) x *= s;
    return Polynomial(std::move(r));
}

Polynomial pow(const Polynomial& a, int n) {
    Polynomial result = Polynomial::constant(1.0);
    Polynomial base = a;
    for (; n > 0; n >>= 1) {
        if (n & 1) result = result * base;
        if (n > 1) base = base * base;
    }
    return result;
}

std::vector<Root> polynomial_roots(const Polynomial& p, const RootOptions& options) {
    if (p.is_zero()) throw DomainError("roots of the zero polynomial are undefined");
    std::vector<Root> roots;

    // Exact zero roots are split off so that z^k factors stay exact.
    const auto all = p.coefficients();
    std::size_t zeros = 0;
    while (zeros < all.size() && all[zeros] == Complex{}) ++zeros;
    if (zeros > 0) roots.push_back({Complex{}, static_cast<int>(zeros)});
    const Polynomial q(std::vector<Complex>(all.begin() + static_cast<std::ptrdiff_t>(zeros), all.end()));
    const int n = q.degree();
    if (n <= 0) return roots;

    const auto c = q.coefficients();
    const double lead = std::abs(c[n]);
    const double r0 = std::pow(std::abs(c[0]) / lead, 1.0 / n);
    const Complex shift = -c[n - 1] / (static_cast<double>(n) * c[n]);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    std::vector<Complex> z(n);
    bool converged = false;
    for (int attempt = 0; attempt <= options.max_restarts && !converged; ++attempt) {
        const double offset = 0.7 + (attempt == 0 ? 0.0 : 2.0 * std::numbers::pi * jitter(rng));
        const double radius = std::max(r0, 1e-3) * (attempt == 0 ? 1.0 : 0.5 + jitter(rng));
        for (int k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * k / n + offset;
            z[k] = (attempt == 0 ? Complex{} : shift) + std::polar(radius, angle);
        }
        converged = aberth(q, z, options.max_iterations);
    }
    if (!converged) throw ConvergenceError("Aberth iteration failed to converge after restarts");

    // Group approximations whose inclusion disks overlap.
    std::vector<double> radius(n);
    for (int i = 0; i < n; ++i) {
        Complex prod = c[n];
        for (int j = 0; j < n; ++j)
            if (j != i) prod *= z[i] - z[j];
        const double residual = std::abs(q(z[i])) + 8.0 * kEps * q.magnitude(std::abs(z[i]));
        radius[i] = prod == Complex{} ? std::numeric_limits<double>::infinity()
                                      : n * residual / std::abs(prod);
    }
    DisjointSets sets(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(z[i] - z[j]) <= radius[i] + radius[j]) sets.unite(i, j);

    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);
    for (const auto& g : groups) {
        if (g.empty()) continue;
        Complex mean{};
        for (int i : g) mean += z[i];
        mean /= static_cast<double>(g.size());
        const int m = static_cast<int>(g.size());
        roots.push_back({polish(q, mean, m), m});
    }
    return roots;
}

}  // namespace twopoint
