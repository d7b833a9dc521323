#include "twopoint/jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace twopoint {

namespace {

// Coefficients at or below this magnitude are treated as exact zeros when
// locating the leading term of a divisor.
constexpr double kZeroFloor = 1e-290;

// A sum whose magnitude is within this many ulps of its operands' magnitudes
// is cancellation noise and is flushed to zero. This is what lets principal
// parts cancel, e.g. in (z - 1) * (1 / (z - 1)).
constexpr double kCancellation = 128.0 * std::numeric_limits<double>::epsilon();

// Raised when a divisor has no retained nonzero coefficient. jet_of retries
// with more padding, since truncation alone can make a divisor look zero.
class ZeroDivisor : public DomainError {
public:
    ZeroDivisor() : DomainError("division by a zero-divisor jet (vanishes to every retained order)") {}
};

void check_same_base(const Jet& a, const Jet& b) {
    if (a.base_point() != b.base_point()) throw std::logic_error("jets expanded about different points");
}

}  // namespace

Jet::Jet(Complex base, int min_exponent, std::vector<Complex> coefficients)
    : base_(base), lo_(min_exponent), c_(std::move(coefficients)) {
    normalize();
}

void Jet::normalize() {
    if (lo_ > 0) {
        c_.insert(c_.begin(), static_cast<std::size_t>(lo_), Complex{});
        lo_ = 0;
    }
    std::size_t lead = 0;
    while (lo_ + static_cast<int>(lead) < 0 && lead < c_.size() && std::abs(c_[lead]) <= kZeroFloor) ++lead;
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
        lo_ += static_cast<int>(lead);
    }
}

Jet Jet::constant(Complex base, Complex value, int order) {
    std::vector<Complex> c(static_cast<std::size_t>(std::max(order, 0)) + 1);
    c[0] = value;
    return Jet(base, 0, std::move(c));
}

Jet Jet::variable(Complex base, int order) {
    std::vector<Complex> c(static_cast<std::size_t>(std::max(order, 1)) + 1);
    c[0] = base;
    c[1] = 1.0;
    return Jet(base, 0, std::move(c)).truncated(std::max(order, 0));
}

Complex Jet::operator[](int exponent) const {
    if (exponent < lo_) return {};
    if (exponent > order()) throw std::out_of_range("jet coefficient above the retained order");
    return c_[static_cast<std::size_t>(exponent - lo_)];
}

Jet Jet::truncated(int order) const {
    if (order >= this->order()) return *this;
    Jet r = *this;
    r.c_.resize(static_cast<std::size_t>(std::max(order - lo_ + 1, 0)));
    return r;
}

Jet operator-(const Jet& a) { return Complex(-1.0) * a; }

Jet operator*(Complex s, const Jet& a) {
    std::vector<Complex> c(a.c_);
    for (auto& x : c) x *= s;
    return Jet(a.base_, a.lo_, std::move(c));
}

namespace {

Jet add(const Jet& a, const Jet& b, double sign) {
    check_same_base(a, b);
    const int lo = std::min(a.min_exponent(), b.min_exponent());
    const int hi = std::min(a.order(), b.order());
    std::vector<Complex> c(static_cast<std::size_t>(std::max(hi - lo + 1, 0)));
    for (int e = lo; e <= hi; ++e) {
        const Complex x = a[e], y = sign * b[e];
        Complex s = x + y;
        if (std::abs(s) <= kCancellation * (std::abs(x) + std::abs(y))) s = {};
        c[static_cast<std::size_t>(e - lo)] = s;
    }
    return Jet(a.base_point(), lo, std::move(c));
}

Jet reciprocal(const Jet& b) {
    const auto bc = b.coefficients();
    std::size_t lead = 0;
    while (lead < bc.size() && std::abs(bc[lead]) <= kZeroFloor) ++lead;
    if (lead == bc.size()) throw ZeroDivisor();
    const auto u = bc.subspan(lead);
    std::vector<Complex> v(u.size());
    v[0] = 1.0 / u[0];
    for (std::size_t k = 1; k < u.size(); ++k) {
        Complex s{};
        for (std::size_t j = 1; j <= k; ++j) s += u[j] * v[k - j];
        v[k] = -s * v[0];
    }
    const int shift = b.min_exponent() + static_cast<int>(lead);
    return Jet(b.base_point(), -shift, std::move(v));
}

}  // namespace

Jet operator+(const Jet& a, const Jet& b) { return add(a, b, 1.0); }
Jet operator-(const Jet& a, const Jet& b) { return add(a, b, -1.0); }

Jet operator*(const Jet& a, const Jet& b) {
    check_same_base(a, b);
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<Complex> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex s{};
        for (std::size_t i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
        c[k] = s;
    }
    return Jet(a.base_, a.lo_ + b.lo_, std::move(c));
}

Jet operator/(const Jet& a, const Jet& b) {
    check_same_base(a, b);
    return a * reciprocal(b);
}

Jet pow(const Jet& a, int n) {
    if (n == 0) return Jet::constant(a.base_, 1.0, std::max(a.order() - a.lo_, 0));
    if (n < 0) return reciprocal(pow(a, -n));
    std::optional<Jet> result;
    Jet base = a;
    for (unsigned m = static_cast<unsigned>(n); m > 0; m >>= 1) {
        if (m & 1u) result = result ? *result * base : base;
        if (m > 1) base = base * base;
    }
    return *result;
}

Jet exp(const Jet& a) {
    if (!a.regular()) throw DomainError("essential singularity: exp of a jet with a principal part");
    const auto& x = a.c_;
    std::vector<Complex> b(x.size());
    if (b.empty()) return a;
    b[0] = std::exp(x[0]);
    for (std::size_t k = 1; k < x.size(); ++k) {
        Complex s{};
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * x[j] * b[k - j];
        b[k] = s / static_cast<double>(k);
    }
    return Jet(a.base_, 0, std::move(b));
}

namespace {

// Joint recurrence for sin and cos of a regular jet.
std::pair<std::vector<Complex>, std::vector<Complex>> sin_cos(std::span<const Complex> x) {
    std::vector<Complex> s(x.size()), c(x.size());
    if (x.empty()) return {s, c};
    s[0] = std::sin(x[0]);
    c[0] = std::cos(x[0]);
    for (std::size_t k = 1; k < x.size(); ++k) {
        Complex ss{}, cc{};
        for (std::size_t j = 1; j <= k; ++j) {
            ss += static_cast<double>(j) * x[j] * c[k - j];
            cc += static_cast<double>(j) * x[j] * s[k - j];
        }
        s[k] = ss / static_cast<double>(k);
        c[k] = -cc / static_cast<double>(k);
    }
    return {s, c};
}

}  // namespace

Jet sin(const Jet& a) {
    if (!a.regular()) throw DomainError("essential singularity: sin of a jet with a principal part");
    return Jet(a.base_, 0, sin_cos(a.c_).first);
}

Jet cos(const Jet& a) {
    if (!a.regular()) throw DomainError("essential singularity: cos of a jet with a principal part");
    return Jet(a.base_, 0, sin_cos(a.c_).second);
}

namespace {

Jet evaluate_jet(const Expr& e, Complex z0, int order) {
    const auto a = e.args();
    switch (e.op()) {
        case Op::constant:
            return Jet::constant(z0, e.value(), order);
        case Op::variable:
            return Jet::variable(z0, order);
        case Op::negate:
            return -evaluate_jet(a[0], z0, order);
        case Op::add:
            return evaluate_jet(a[0], z0, order) + evaluate_jet(a[1], z0, order);
        case Op::subtract:
            return evaluate_jet(a[0], z0, order) - evaluate_jet(a[1], z0, order);
        case Op::multiply:
            return evaluate_jet(a[0], z0, order) * evaluate_jet(a[1], z0, order);
        case Op::divide:
            return evaluate_jet(a[0], z0, order) / evaluate_jet(a[1], z0, order);
        case Op::power:
            return pow(evaluate_jet(a[0], z0, order), e.exponent());
        case Op::exp:
            return exp(evaluate_jet(a[0], z0, order));
        case Op::sin:
            return sin(evaluate_jet(a[0], z0, order));
        case Op::cos:
            return cos(evaluate_jet(a[0], z0, order));
    }
    return Jet::constant(z0, 0.0, order);
}

}  // namespace

Jet jet_of(const Expr& expr, Complex z0, int order) {
    if (order < 0) throw std::invalid_argument("jet order must be nonnegative");
    if (order > kMaxJetOrder) throw DomainError("jet order " + std::to_string(order) + " exceeds the cap of 64");
    // Principal parts cost precision in products and quotients; retry with
    // padding until the requested order survives.
    int pad = 0;
    for (int attempt = 0; attempt < 16; ++attempt) {
        try {
            Jet j = evaluate_jet(expr, z0, order + pad);
            if (j.order() >= order) return j.truncated(order);
            pad += order - j.order();
        } catch (const ZeroDivisor&) {
            if (order + pad >= 2 * kMaxJetOrder) throw;
            pad += order + 1;
        }
    }
    throw ConvergenceError("jet precision loss did not stabilize");
}

Complex derivative(const Expr& expr, Complex z0, int k) {
    if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
    const Jet j = jet_of(expr, z0, k);
    if (!j.regular()) throw PoleError("derivative requested at a pole");
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= i;
    return factorial * j[k];
}

std::vector<Complex> taylor_coefficients(const Expr& expr, Complex z0, int order) {
    const Jet j = jet_of(expr, z0, order);
    if (!j.regular()) throw PoleError("expansion point is a pole of the function");
    const auto c = j.coefficients();
    return {c.begin(), c.end()};
}

}  // namespace twopoint
