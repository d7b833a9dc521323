#include "twopoint/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twopoint/detail/formulas.hpp"
#include "twopoint/jet.hpp"
#include "twopoint/laurent.hpp"
#include "twopoint/region.hpp"
#include "twopoint/taylor.hpp"

namespace twopoint {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRemainderTerms[] = {2, 5, 10};

class Recorder {
public:
    Recorder(VerificationReport& report, std::string function) : report_(report), function_(std::move(function)) {}

    void add(const std::string& name, double measured, double threshold) {
        report_.checks.push_back({function_, name, measured, threshold, measured <= threshold});
    }

    // Runs one family; an exception fails the family instead of the suite.
    template <typename Body>
    void family(const std::string& name, Body&& body) {
        try {
            body();
        } catch (const std::exception&) {
            add(name + ".error", kInf, 0.0);
        }
    }

private:
    VerificationReport& report_;
    std::string function_;
};

double ratio(const detail::Sum& s, const OracleValue& o, double tol) {
    return agreement_ratio(s.value, s.magnitude, o, tol);
}

std::vector<Complex> pole_locations(const FunctionModel& f) {
    std::vector<Complex> out;
    for (const auto& p : f.poles()) out.push_back(p.location);
    return out;
}

// Upper level for sampling: a fraction of the outer radius, or a fixed
// multiple of the focal scale when the region is unbounded.
double level_cap(Complex z1, Complex z2, double r) {
    if (std::isfinite(r)) return 0.9 * r;
    return std::max(4.0, std::norm(z1 - z2));
}

bool regular_at(const Expr& g, Complex z0) { return jet_of(g, z0, 4).regular(); }

void taylor_family(Recorder& rec, const FunctionModel& f, Complex z1, Complex z2, const VerifyOptions& opt,
                   std::mt19937_64& rng) {
    const int N = opt.terms;
    const OracleOptions oo{{}, opt.inner_poles};
    const auto t1 = taylor_coefficients(f.expr(), z1, N - 1);
    const auto t2 = taylor_coefficients(f.expr(), z2, N - 1);
    double worst = 0.0;
    for (int n = 0; n < N; ++n) {
        const auto fwd = detail::a_sum(t1, t2, z1, z2, n);
        const auto rev = detail::a_sum(t2, t1, z2, z1, n);
        worst = std::max(worst, ratio(fwd, oracle_a(f, z1, z2, n, oo), opt.coefficient_tol));
        worst = std::max(worst, ratio(rev, oracle_a(f, z2, z1, n, oo), opt.coefficient_tol));
        const auto ab = oracle_ab(f, z1, z2, n, oo);
        const Complex a = -z1 * fwd.value - z2 * rev.value;
        const Complex b = fwd.value + rev.value;
        const double ma = std::abs(z1) * fwd.magnitude + std::abs(z2) * rev.magnitude;
        const double mb = fwd.magnitude + rev.magnitude;
        worst = std::max(worst, agreement_ratio(a, ma, ab.a, opt.coefficient_tol));
        worst = std::max(worst, agreement_ratio(b, mb, ab.b, opt.coefficient_tol));
    }
    rec.add("taylor.coefficients", worst, 1.0);

    // Hermite residuals of the degree-9 polynomial, relative to max(1, |f^(k)|).
    {
        const int h = 5;
        const auto e = expand(f, z1, z2, h);
        const auto res = hermite_residuals(f, e);
        const auto d1 = taylor_coefficients(f.expr(), z1, h - 1);
        const auto d2 = taylor_coefficients(f.expr(), z2, h - 1);
        double r = 0.0, factorial = 1.0;
        for (int k = 0; k < h; ++k) {
            if (k > 1) factorial *= k;
            const auto i = static_cast<std::size_t>(k);
            r = std::max(r, res[i] / std::max(1.0, factorial * std::abs(d1[i])));
            r = std::max(r, res[i + h] / std::max(1.0, factorial * std::abs(d2[i])));
        }
        rec.add("taylor.hermite", r, 1e-10);
    }

    const auto region = taylor_region(f, z1, z2);
    const auto points = sample_level_band(rng, z1, z2, 0.0, level_cap(z1, z2, region.r), opt.points,
                                          pole_locations(f), 0.0);
    worst = 0.0;
    for (const int terms : kRemainderTerms) {
        const auto e = expand(f, z1, z2, terms);
        for (const Complex z : points) {
            const Complex r = oracle_remainder(Family::taylor, f, z1, z2, terms, z, oo).value;
            worst = std::max(worst, std::abs(f(z) - evaluate(e, z) - r));
        }
    }
    rec.add("taylor.remainder", worst, opt.remainder_tol);

    const auto e = expand(f, z1, z2, N);
    const auto s = expand(f, z2, z1, N);
    worst = 0.0;
    for (const Complex z : points) {
        const Complex p = evaluate(e, z);
        worst = std::max(worst, std::abs(p - evaluate(s, z)) / std::max(1.0, std::abs(p)));
    }
    rec.add("taylor.symmetry", worst, 1e-12);
}

void laurent_family(Recorder& rec, const FunctionModel& f, Complex z1, Complex z2, const VerifyOptions& opt,
                    std::mt19937_64& rng) {
    const int N = opt.terms;
    const OracleOptions oo{{}, opt.inner_poles};
    const PoleSpec spec = detect_pole_spec(f, z1, z2);
    const auto g1 = detail::regular_part(f, z1, spec.m1, N - 1 + spec.m1);
    const auto g2 = detail::regular_part(f, z2, spec.m2, N - 1 + spec.m2);
    double worst = 0.0;
    for (int n = 0; n < N; ++n) {
        const double tol = opt.coefficient_tol;
        worst = std::max(worst, ratio(detail::b_sum(g1, g2, z1, z2, spec.m1, spec.m2, n), oracle_b(f, z1, z2, n, oo), tol));
        worst = std::max(worst, ratio(detail::b_sum(g2, g1, z2, z1, spec.m2, spec.m1, n), oracle_b(f, z2, z1, n, oo), tol));
        worst = std::max(worst, ratio(detail::c_sum(g1, g2, z1, z2, spec.m1, spec.m2, n), oracle_c(f, z1, z2, n, oo), tol));
        worst = std::max(worst, ratio(detail::c_sum(g2, g1, z2, z1, spec.m2, spec.m1, n), oracle_c(f, z2, z1, n, oo), tol));
    }
    rec.add("laurent.coefficients", worst, 1.0);

    const auto annulus = laurent_region(f, z1, z2, opt.inner_poles);
    auto avoid = pole_locations(f);
    avoid.push_back(z1);
    avoid.push_back(z2);
    const auto points = sample_level_band(rng, z1, z2, 1.2 * annulus.r2, level_cap(z1, z2, annulus.r1), opt.points,
                                          avoid, 0.1 * std::abs(z1 - z2));
    worst = 0.0;
    for (const int terms : kRemainderTerms) {
        const auto e = laurent_expand(f, z1, z2, spec, terms);
        for (const Complex z : points) {
            const Complex r = oracle_remainder(Family::laurent, f, z1, z2, terms, z, oo).value;
            worst = std::max(worst, std::abs(f(z) - evaluate_laurent(e, z) - r));
        }
    }
    rec.add("laurent.remainder", worst, opt.remainder_tol);

    if (spec.max_order() > 0) {
        const auto g = regularize_laurent(f, z1, z2, spec);
        rec.add("laurent.regularized", regular_at(g.expr(), z1) && regular_at(g.expr(), z2) ? 0.0 : 1.0, 0.0);
    }
}

void taylor_laurent_family(Recorder& rec, const FunctionModel& f, Complex z1, Complex z2, int m,
                           const VerifyOptions& opt, std::mt19937_64& rng) {
    const int N = opt.terms;
    const OracleOptions oo{{}, opt.inner_poles};
    const auto g = detail::regular_part(f, z1, m, m + N - 1);
    const auto t = taylor_coefficients(f.expr(), z2, N - 1);
    double worst = 0.0;
    for (int n = 0; n < N; ++n) {
        const double tol = opt.coefficient_tol;
        const auto [fwd, rev] = detail::d_sum(g, t, z1, z2, m, n);
        const auto d = oracle_d(f, z1, z2, n, oo);
        worst = std::max({worst, ratio(fwd, d.fwd, tol), ratio(rev, d.rev, tol)});
        worst = std::max(worst, ratio(detail::e_sum(g, z1, z2, m, n), oracle_e(f, z1, z2, n, oo), tol));
    }
    rec.add("taylor-laurent.coefficients", worst, 1.0);

    const auto region = taylor_laurent_region(f, z1, z2, opt.inner_poles);
    auto avoid = pole_locations(f);
    avoid.push_back(z1);
    const auto points =
        sample_level_band(rng, z1, z2, 0.0, level_cap(z1, z2, region.r1), opt.points, avoid,
                          0.1 * std::abs(z1 - z2), [&](Complex z) { return contains(region, z); });
    worst = 0.0;
    for (const int terms : kRemainderTerms) {
        const auto e = taylor_laurent_expand(f, z1, z2, m, terms);
        for (const Complex z : points) {
            const Complex r = oracle_remainder(Family::taylor_laurent, f, z1, z2, terms, z, oo).value;
            worst = std::max(worst, std::abs(f(z) - evaluate_tl(e, z) - r));
        }
    }
    rec.add("taylor-laurent.remainder", worst, opt.remainder_tol);

    if (m > 0) {
        const auto reg = regularize_taylor_laurent(f, z1, z2, m);
        rec.add("taylor-laurent.regularized", regular_at(reg.expr(), z1) ? 0.0 : 1.0, 0.0);
    }
}

}  // namespace

int VerificationReport::passed() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.passed; }));
}

int VerificationReport::failed() const { return static_cast<int>(checks.size()) - passed(); }

void VerificationReport::append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::vector<Complex> sample_level_band(std::mt19937_64& rng, Complex z1, Complex z2, double lo, double hi, int count,
                                       const std::vector<Complex>& avoid, double clearance,
                                       const std::function<bool(Complex)>& accept) {
    const Complex c = 0.5 * (z1 + z2);
    const double radius = std::sqrt(hi + 0.25 * std::norm(z1 - z2));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Complex> out;
    for (int attempt = 0; attempt < 200000 && static_cast<int>(out.size()) < count; ++attempt) {
        const double rho = radius * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        const Complex z = c + std::polar(rho, phi);
        const double level = cassini_level(z1, z2, z);
        if (!(level > lo && level < hi)) continue;
        const bool clear = std::all_of(avoid.begin(), avoid.end(),
                                       [&](Complex p) { return std::abs(z - p) > std::max(clearance, 1e-9); });
        if (!clear || (accept && !accept(z))) continue;
        out.push_back(z);
    }
    if (static_cast<int>(out.size()) < count) throw DomainError("could not sample enough interior points");
    return out;
}

VerificationReport verify_function(const FunctionModel& f, const std::string& label, Complex z1, Complex z2,
                                   const VerifyOptions& options) {
    if (options.terms < 1) throw std::invalid_argument("verification needs at least one term");
    VerificationReport report;
    Recorder rec(report, label);
    std::mt19937_64 rng(options.seed);
    const PoleSpec spec = detect_pole_spec(f, z1, z2);
    if (spec.m1 == 0 && spec.m2 == 0) rec.family("taylor", [&] { taylor_family(rec, f, z1, z2, options, rng); });
    rec.family("laurent", [&] { laurent_family(rec, f, z1, z2, options, rng); });
    if (spec.m2 == 0)
        rec.family("taylor-laurent", [&] { taylor_laurent_family(rec, f, z1, z2, spec.m1, options, rng); });
    else if (spec.m1 == 0)
        rec.family("taylor-laurent", [&] { taylor_laurent_family(rec, f, z2, z1, spec.m2, options, rng); });
    return report;
}

const std::vector<std::string>& verification_corpus() {
    static const std::vector<std::string> corpus{
        "exp(z)", "sin(z)", "z^5-3*z+1", "1/(1+z^2)", "exp(z)/(z+1)", "1/((z^2-1)*(z^2-4))", "1/((z-1)^2*(z+2))",
    };
    return corpus;
}

VerificationReport verify_corpus(const VerifyOptions& options) {
    VerificationReport report;
    for (const auto& text : verification_corpus())
        report.append(verify_function(FunctionModel::parse(text), text, -1.0, 1.0, options));
    return report;
}

}  // namespace twopoint
