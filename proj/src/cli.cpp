#include "twopoint/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "twopoint/contour.hpp"
#include "twopoint/detail/formulas.hpp"
#include "twopoint/jet.hpp"
#include "twopoint/laurent.hpp"
#include "twopoint/region.hpp"
#include "twopoint/taylor.hpp"
#include "twopoint/verify.hpp"

namespace twopoint::cli {

namespace {

using Json = nlohmann::ordered_json;

// ---- number and JSON formatting -------------------------------------------

void write_json(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(key).dump() + ": ";
                write_json(value, out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) out += ",\n";
                out += inner;
                write_json(j[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_number(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

std::string dump(const Json& j) {
    std::string out;
    write_json(j, out, 0);
    out += "\n";
    return out;
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json cjson(Complex z) {
    Json j = Json::object();
    j["re"] = num(z.real());
    j["im"] = num(z.imag());
    return j;
}

// ---- CSV ------------------------------------------------------------------

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (const char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) { row(std::move(header)); }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) text_ += ',';
            text_ += csv_field(fields[i]);
        }
        text_ += "\r\n";
    }

    const std::string& text() const { return text_; }

private:
    std::string text_;
};

std::string csv_number(double x) {
    const std::string s = format_number(x);
    return s == "null" ? "" : s;
}

// ---- model and region selection -------------------------------------------

FunctionModel make_model(const RunConfig& c) {
    if (c.function_text.empty()) throw UsageError("--function is required");
    Expr e = parse(c.function_text);
    if (c.pole_override.empty()) return FunctionModel(std::move(e));
    return FunctionModel(std::move(e), c.pole_override);
}

std::string choose_family(const RunConfig& c, const FunctionModel& f) {
    if (!c.family.empty()) return c.family;
    const bool p1 = f.pole_order_at(c.z1).has_value();
    const bool p2 = f.pole_order_at(c.z2).has_value();
    return (p1 || p2) ? "laurent" : "taylor";
}

PoleSpec laurent_spec(const RunConfig& c, const FunctionModel& f) {
    PoleSpec spec = detect_pole_spec(f, c.z1, c.z2);
    if (c.m1) spec.m1 = *c.m1;
    if (c.m2) spec.m2 = *c.m2;
    if (spec.m1 < 0 || spec.m2 < 0) throw UsageError("pole orders must be nonnegative");
    return spec;
}

int tl_order(const RunConfig& c, const FunctionModel& f) {
    const int m = c.m ? *c.m : f.pole_order_at(c.z1).value_or(0);
    if (m < 0) throw UsageError("--m must be nonnegative");
    return m;
}

Json poles_json(std::span<const Complex> poles) {
    Json a = Json::array();
    for (const Complex p : poles) a.push_back(cjson(p));
    return a;
}

Json region_json(const CassiniOval& o) {
    Json j = Json::object();
    j["family"] = "taylor";
    j["type"] = "cassini-oval";
    j["r"] = num(o.r);
    j["topology"] = to_string(o.topology);
    return j;
}

Json region_json(const CassiniAnnulus& a, const PoleSpec& spec, std::span<const Complex> inner) {
    Json j = Json::object();
    j["family"] = "laurent";
    j["type"] = "cassini-annulus";
    j["r1"] = num(a.r1);
    j["r2"] = num(a.r2);
    j["topology"] = to_string(classify(a.z1, a.z2, a.r1));
    j["pole_orders"] = Json{{"m1", spec.m1}, {"m2", spec.m2}};
    j["inner_poles"] = poles_json(inner);
    return j;
}

Json region_json(const TaylorLaurentRegion& d, int m, std::span<const Complex> inner) {
    Json j = Json::object();
    j["family"] = "taylor-laurent";
    j["type"] = "oval-apollonius";
    j["r1"] = num(d.r1);
    j["r2"] = num(d.r2);
    j["topology"] = to_string(classify(d.z1, d.z2, d.r1));
    Json ap = Json::object();
    ap["side"] = to_string(d.apollonius.side);
    if (d.apollonius.side == Apollonius::Side::interior || d.apollonius.side == Apollonius::Side::exterior) {
        ap["center"] = cjson(d.apollonius.center);
        ap["radius"] = num(d.apollonius.radius);
    }
    j["apollonius"] = ap;
    j["pole_order"] = m;
    j["inner_poles"] = poles_json(inner);
    return j;
}

Json header(const RunConfig& c, bool with_function = true) {
    Json j = Json::object();
    j["command"] = c.subcommand;
    j["function"] = with_function ? Json(c.function_text) : Json(nullptr);
    j["z1"] = cjson(c.z1);
    j["z2"] = cjson(c.z2);
    return j;
}

// Per-coefficient oracle comparison rows for --verify.
class CoefficientAudit {
public:
    explicit CoefficientAudit(double tol) : tol_(tol) {}

    void add(int n, const std::string& name, const detail::Sum& formula, const OracleValue& oracle) {
        const double ratio = agreement_ratio(formula.value, formula.magnitude, oracle, tol_);
        Json row = Json::object();
        row["n"] = n;
        row["coefficient"] = name;
        row["oracle"] = cjson(oracle.value);
        row["relative_error"] = num(relative_error(formula.value, oracle));
        row["agreement"] = num(ratio);
        row["passed"] = ratio <= 1.0;
        (ratio <= 1.0 ? passed_ : failed_) += 1;
        rows_.push_back(row);
    }

    bool ok() const { return failed_ == 0; }

    Json json() const {
        Json j = Json::object();
        j["tolerance"] = num(tol_);
        j["passed"] = passed_;
        j["failed"] = failed_;
        j["coefficients"] = rows_;
        return j;
    }

private:
    double tol_;
    int passed_ = 0;
    int failed_ = 0;
    Json rows_ = Json::array();
};

struct Output {
    std::string text;
    int code = kOk;
};

// ---- subcommands ----------------------------------------------------------

Output cmd_expand(const RunConfig& c) {
    const FunctionModel f = make_model(c);
    const auto e = expand(f, c.z1, c.z2, c.order);
    const auto ab = to_ab(e);
    const auto region = taylor_region(f, c.z1, c.z2);
    if (c.format == "csv") {
        Csv csv({"n", "a_fwd_re", "a_fwd_im", "a_rev_re", "a_rev_im", "A_re", "A_im", "B_re", "B_im"});
        for (int n = 0; n < e.size(); ++n) {
            const auto& p = e.pairs[static_cast<std::size_t>(n)];
            const auto& t = ab.terms[static_cast<std::size_t>(n)];
            csv.row({std::to_string(n), csv_number(p.fwd.real()), csv_number(p.fwd.imag()), csv_number(p.rev.real()),
                     csv_number(p.rev.imag()), csv_number(t.a.real()), csv_number(t.a.imag()),
                     csv_number(t.b.real()), csv_number(t.b.imag())});
        }
        return {csv.text()};
    }
    Json j = header(c);
    Json coeffs = Json::array();
    for (int n = 0; n < e.size(); ++n) {
        const auto& p = e.pairs[static_cast<std::size_t>(n)];
        const auto& t = ab.terms[static_cast<std::size_t>(n)];
        coeffs.push_back(Json{{"n", n}, {"a_fwd", cjson(p.fwd)}, {"a_rev", cjson(p.rev)}, {"A", cjson(t.a)},
                              {"B", cjson(t.b)}});
    }
    j["coefficients"] = coeffs;
    j["region"] = region_json(region);
    Output o;
    if (c.verify) {
        CoefficientAudit audit(c.tol);
        const auto t1 = taylor_coefficients(f.expr(), c.z1, c.order - 1);
        const auto t2 = taylor_coefficients(f.expr(), c.z2, c.order - 1);
        for (int n = 0; n < c.order; ++n) {
            audit.add(n, "a_fwd", detail::a_sum(t1, t2, c.z1, c.z2, n), oracle_a(f, c.z1, c.z2, n));
            audit.add(n, "a_rev", detail::a_sum(t2, t1, c.z2, c.z1, n), oracle_a(f, c.z2, c.z1, n));
        }
        j["verification"] = audit.json();
        if (!audit.ok()) o.code = kVerificationFailed;
    }
    o.text = dump(j);
    return o;
}

Output cmd_laurent(const RunConfig& c) {
    const FunctionModel f = make_model(c);
    const PoleSpec spec = laurent_spec(c, f);
    const auto e = laurent_expand(f, c.z1, c.z2, spec, c.order);
    const auto region = laurent_region(f, c.z1, c.z2, c.inner_poles);
    if (c.format == "csv") {
        Csv csv({"n", "b_fwd_re", "b_fwd_im", "b_rev_re", "b_rev_im", "c_fwd_re", "c_fwd_im", "c_rev_re", "c_rev_im"});
        for (int n = 0; n < e.size(); ++n) {
            const auto& b = e.b[static_cast<std::size_t>(n)];
            const auto& cc = e.c[static_cast<std::size_t>(n)];
            csv.row({std::to_string(n), csv_number(b.fwd.real()), csv_number(b.fwd.imag()), csv_number(b.rev.real()),
                     csv_number(b.rev.imag()), csv_number(cc.fwd.real()), csv_number(cc.fwd.imag()),
                     csv_number(cc.rev.real()), csv_number(cc.rev.imag())});
        }
        return {csv.text()};
    }
    Json j = header(c);
    Json coeffs = Json::array();
    for (int n = 0; n < e.size(); ++n) {
        const auto& b = e.b[static_cast<std::size_t>(n)];
        const auto& cc = e.c[static_cast<std::size_t>(n)];
        coeffs.push_back(Json{{"n", n}, {"b_fwd", cjson(b.fwd)}, {"b_rev", cjson(b.rev)}, {"c_fwd", cjson(cc.fwd)},
                              {"c_rev", cjson(cc.rev)}});
    }
    j["coefficients"] = coeffs;
    j["region"] = region_json(region, spec, c.inner_poles);
    Output o;
    if (c.verify) {
        CoefficientAudit audit(c.tol);
        const OracleOptions oo{{}, c.inner_poles};
        const auto g1 = detail::regular_part(f, c.z1, spec.m1, c.order - 1 + spec.m1);
        const auto g2 = detail::regular_part(f, c.z2, spec.m2, c.order - 1 + spec.m2);
        for (int n = 0; n < c.order; ++n) {
            audit.add(n, "b_fwd", detail::b_sum(g1, g2, c.z1, c.z2, spec.m1, spec.m2, n), oracle_b(f, c.z1, c.z2, n, oo));
            audit.add(n, "b_rev", detail::b_sum(g2, g1, c.z2, c.z1, spec.m2, spec.m1, n), oracle_b(f, c.z2, c.z1, n, oo));
            audit.add(n, "c_fwd", detail::c_sum(g1, g2, c.z1, c.z2, spec.m1, spec.m2, n), oracle_c(f, c.z1, c.z2, n, oo));
            audit.add(n, "c_rev", detail::c_sum(g2, g1, c.z2, c.z1, spec.m2, spec.m1, n), oracle_c(f, c.z2, c.z1, n, oo));
        }
        j["verification"] = audit.json();
        if (!audit.ok()) o.code = kVerificationFailed;
    }
    o.text = dump(j);
    return o;
}

Output cmd_taylor_laurent(const RunConfig& c) {
    const FunctionModel f = make_model(c);
    const int m = tl_order(c, f);
    const auto e = taylor_laurent_expand(f, c.z1, c.z2, m, c.order);
    const auto region = taylor_laurent_region(f, c.z1, c.z2, c.inner_poles);
    if (c.format == "csv") {
        Csv csv({"n", "d_fwd_re", "d_fwd_im", "d_rev_re", "d_rev_im", "e_re", "e_im"});
        for (int n = 0; n < e.size(); ++n) {
            const auto& d = e.d[static_cast<std::size_t>(n)];
            const Complex en = e.e[static_cast<std::size_t>(n)];
            csv.row({std::to_string(n), csv_number(d.fwd.real()), csv_number(d.fwd.imag()), csv_number(d.rev.real()),
                     csv_number(d.rev.imag()), csv_number(en.real()), csv_number(en.imag())});
        }
        return {csv.text()};
    }
    Json j = header(c);
    Json coeffs = Json::array();
    for (int n = 0; n < e.size(); ++n) {
        const auto& d = e.d[static_cast<std::size_t>(n)];
        coeffs.push_back(Json{{"n", n}, {"d_fwd", cjson(d.fwd)}, {"d_rev", cjson(d.rev)},
                              {"e", cjson(e.e[static_cast<std::size_t>(n)])}});
    }
    j["coefficients"] = coeffs;
    j["region"] = region_json(region, m, c.inner_poles);
    Output o;
    if (c.verify) {
        CoefficientAudit audit(c.tol);
        const OracleOptions oo{{}, c.inner_poles};
        const auto g = detail::regular_part(f, c.z1, m, m + c.order - 1);
        const auto t = taylor_coefficients(f.expr(), c.z2, c.order - 1);
        for (int n = 0; n < c.order; ++n) {
            const auto [fwd, rev] = detail::d_sum(g, t, c.z1, c.z2, m, n);
            const auto d = oracle_d(f, c.z1, c.z2, n, oo);
            audit.add(n, "d_fwd", fwd, d.fwd);
            audit.add(n, "d_rev", rev, d.rev);
            audit.add(n, "e", detail::e_sum(g, c.z1, c.z2, m, n), oracle_e(f, c.z1, c.z2, n, oo));
        }
        j["verification"] = audit.json();
        if (!audit.ok()) o.code = kVerificationFailed;
    }
    o.text = dump(j);
    return o;
}

Output cmd_region(const RunConfig& c) {
    const FunctionModel f = make_model(c);
    const std::string family = choose_family(c, f);
    Json region;
    std::vector<BoundaryPoint> samples;
    const bool want_boundary = c.format == "csv" || c.count_given;
    if (family == "taylor") {
        const auto o = taylor_region(f, c.z1, c.z2);
        region = region_json(o);
        if (want_boundary && std::isfinite(o.r)) samples = boundary(o, c.count);
    } else if (family == "laurent") {
        const PoleSpec spec = laurent_spec(c, f);
        const auto a = laurent_region(f, c.z1, c.z2, c.inner_poles);
        region = region_json(a, spec, c.inner_poles);
        if (want_boundary && (std::isfinite(a.r1) || a.r2 > 0.0)) samples = boundary(a, c.count);
    } else {
        const int m = tl_order(c, f);
        const auto d = taylor_laurent_region(f, c.z1, c.z2, c.inner_poles);
        region = region_json(d, m, c.inner_poles);
        if (want_boundary && (std::isfinite(d.r1) || d.apollonius.side != Apollonius::Side::vacuous))
            samples = boundary(d, c.count);
    }
    if (c.format == "csv") {
        Csv csv({"curve_label", "theta", "re", "im"});
        for (const auto& p : samples)
            csv.row({p.curve, csv_number(p.theta), csv_number(p.z.real()), csv_number(p.z.imag())});
        return {csv.text()};
    }
    if (c.count_given) {
        Json b = Json::array();
        for (const auto& p : samples)
            b.push_back(Json{{"curve", p.curve}, {"theta", num(p.theta)}, {"z", cjson(p.z)}});
        region["boundary"] = b;
    }
    Json j = header(c);
    j["region"] = region;
    return {dump(j)};
}

Output cmd_eval(const RunConfig& c) {
    const FunctionModel f = make_model(c);
    if (c.eval_points.empty()) throw UsageError("eval needs at least one --at point");
    const std::string family = choose_family(c, f);
    std::function<Complex(Complex)> partial;
    std::function<bool(Complex)> inside;
    if (family == "taylor") {
        auto e = expand(f, c.z1, c.z2, c.order);
        auto o = taylor_region(f, c.z1, c.z2);
        partial = [e](Complex z) { return evaluate(e, z); };
        inside = [o](Complex z) { return contains(o, z); };
    } else if (family == "laurent") {
        auto e = laurent_expand(f, c.z1, c.z2, laurent_spec(c, f), c.order);
        auto a = laurent_region(f, c.z1, c.z2, c.inner_poles);
        partial = [e](Complex z) { return evaluate_laurent(e, z); };
        inside = [a](Complex z) { return contains(a, z); };
    } else {
        auto e = taylor_laurent_expand(f, c.z1, c.z2, tl_order(c, f), c.order);
        auto d = taylor_laurent_region(f, c.z1, c.z2, c.inner_poles);
        partial = [e](Complex z) { return evaluate_tl(e, z); };
        inside = [d](Complex z) { return contains(d, z); };
    }
    struct Row {
        Complex z, sum, direct;
        double error;
        bool in_region;
    };
    std::vector<Row> rows;
    for (const Complex z : c.eval_points) {
        const Complex s = partial(z);
        const Complex d = f(z);
        rows.push_back({z, s, d, std::abs(s - d), inside(z)});
    }
    if (c.format == "csv") {
        Csv csv({"z_re", "z_im", "partial_sum_re", "partial_sum_im", "direct_re", "direct_im", "abs_error",
                 "in_region"});
        for (const auto& r : rows)
            csv.row({csv_number(r.z.real()), csv_number(r.z.imag()), csv_number(r.sum.real()),
                     csv_number(r.sum.imag()), csv_number(r.direct.real()), csv_number(r.direct.imag()),
                     csv_number(r.error), r.in_region ? "true" : "false"});
        return {csv.text()};
    }
    Json j = header(c);
    Json ev = Json::array();
    for (const auto& r : rows)
        ev.push_back(Json{{"z", cjson(r.z)}, {"partial_sum", cjson(r.sum)}, {"direct_value", cjson(r.direct)},
                          {"abs_error", num(r.error)}, {"in_region", r.in_region}});
    j["family"] = family;
    j["evaluations"] = ev;
    return {dump(j)};
}

Json report_json(const VerificationReport& r) {
    Json j = Json::object();
    j["passed"] = r.passed();
    j["failed"] = r.failed();
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"function", c.function}, {"name", c.name}, {"measured", num(c.measured)},
                              {"threshold", num(c.threshold)}, {"passed", c.passed}});
    j["checks"] = checks;
    return j;
}

Output cmd_verify(const RunConfig& c) {
    VerifyOptions opt;
    opt.terms = c.order;
    opt.points = c.points;
    opt.seed = c.seed;
    opt.coefficient_tol = c.tol;
    opt.inner_poles = c.inner_poles;
    VerificationReport report;
    const bool corpus = c.function_text.empty();
    if (corpus) {
        if (c.z1 != Complex(-1.0) || c.z2 != Complex(1.0))
            throw UsageError("the built-in corpus is expanded about z1 = -1, z2 = 1");
        report = verify_corpus(opt);
    } else {
        report = verify_function(make_model(c), c.function_text, c.z1, c.z2, opt);
    }
    if (c.format == "csv") {
        Csv csv({"function", "check", "measured", "threshold", "passed"});
        for (const auto& k : report.checks)
            csv.row({k.function, k.name, csv_number(k.measured), csv_number(k.threshold), k.passed ? "true" : "false"});
        return {csv.text(), report.ok() ? kOk : kVerificationFailed};
    }
    Json j = header(c, !corpus);
    j["verification"] = report_json(report);
    return {dump(j), report.ok() ? kOk : kVerificationFailed};
}

Output cmd_confluence(const RunConfig& c) {
    const FunctionModel f = make_model(c);
    const auto ab = ab_confluent(f, c.z0, c.order);
    if (c.format == "csv") {
        Csv csv({"n", "A_re", "A_im", "B_re", "B_im"});
        for (int n = 0; n < ab.size(); ++n) {
            const auto& t = ab.terms[static_cast<std::size_t>(n)];
            csv.row({std::to_string(n), csv_number(t.a.real()), csv_number(t.a.imag()), csv_number(t.b.real()),
                     csv_number(t.b.imag())});
        }
        return {csv.text()};
    }
    Json j = Json::object();
    j["command"] = c.subcommand;
    j["function"] = c.function_text;
    j["z1"] = cjson(c.z0);
    j["z2"] = cjson(c.z0);
    Json coeffs = Json::array();
    for (int n = 0; n < ab.size(); ++n) {
        const auto& t = ab.terms[static_cast<std::size_t>(n)];
        coeffs.push_back(Json{{"n", n}, {"A", cjson(t.a)}, {"B", cjson(t.b)}});
    }
    j["coefficients"] = coeffs;
    Output o;
    if (c.verify) {
        // The jet route (even/odd Taylor coefficients) against the contour route.
        CoefficientAudit audit(c.tol);
        const auto t = taylor_coefficients(f.expr(), c.z0, 2 * c.order - 1);
        for (int n = 0; n < c.order; ++n) {
            const auto oracle = oracle_ab(f, c.z0, c.z0, n);
            const auto& term = ab.terms[static_cast<std::size_t>(n)];
            const auto i = static_cast<std::size_t>(2 * n);
            audit.add(n, "A", {term.a, std::abs(t[i]) + std::abs(c.z0 * t[i + 1])}, oracle.a);
            audit.add(n, "B", {term.b, std::abs(t[i + 1])}, oracle.b);
        }
        j["verification"] = audit.json();
        if (!audit.ok()) o.code = kVerificationFailed;
    }
    o.text = dump(j);
    return o;
}

}  // namespace

// ---- parsing ----------------------------------------------------------------

std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

namespace {

bool parse_real(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Complex parse_complex(std::string_view text) {
    const std::string original(text);
    auto fail = [&] { return UsageError("invalid complex number '" + original + "' (expected a, bi, a+bi or a-bi)"); };
    if (text.empty()) throw fail();
    if (text.back() != 'i') {
        double re;
        if (!parse_real(text, re)) throw fail();
        return {re, 0.0};
    }
    text.remove_suffix(1);
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string_view re_part = split == std::string_view::npos ? std::string_view{} : text.substr(0, split);
    std::string_view im_part = split == std::string_view::npos ? text : text.substr(split);
    double re = 0.0, im;
    if (!re_part.empty() && !parse_real(re_part, re)) throw fail();
    if (im_part.empty() || im_part == "+")
        im = 1.0;
    else if (im_part == "-")
        im = -1.0;
    else if (!parse_real(im_part, im))
        throw fail();
    return {re, im};
}

Pole parse_pole(std::string_view text) {
    const auto colon = text.rfind(':');
    Pole p;
    p.location = parse_complex(text.substr(0, colon));
    if (colon != std::string_view::npos) {
        const auto digits = text.substr(colon + 1);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p.order);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || p.order < 1)
            throw UsageError("invalid pole order in '" + std::string(text) + "'");
    }
    return p;
}

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
    CLI::App app{"Two-point Taylor, Laurent and Taylor-Laurent expansions with contour-integral verification",
                 "twopoint"};
    app.require_subcommand(1);

    struct Raw {
        std::string function, z1, z2, z0, format = "json", out, family;
        int order = 8, count = 256, points = 20;
        std::vector<std::string> at, inner, poles;
        int m1 = -1, m2 = -1, m = -1;
        double tol = 1e-10;
        std::uint64_t seed = 0;
        bool verify = false;
    } raw;
    std::map<std::string, CLI::Option*> order_opts, count_opts;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"expand", "two-point Taylor coefficients a_n"},
        {"laurent", "two-point Laurent coefficients b_n, c_n"},
        {"taylor-laurent", "Taylor-Laurent coefficients d_n, e_n"},
        {"region", "convergence region and boundary samples"},
        {"eval", "partial sums against direct evaluation"},
        {"verify", "formula/oracle verification suite"},
        {"confluence", "A_n, B_n at coincident points"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* s = app.add_subcommand(name, description);
        s->add_option("--function", raw.function, "expression in z");
        s->add_option("--z1", raw.z1, "first expansion point");
        s->add_option("--z2", raw.z2, "second expansion point");
        s->add_option("--z0", raw.z0, "coincident point (confluence)");
        order_opts[name] = s->add_option("--order", raw.order, "number of terms N");
        s->add_option("--at", raw.at, "evaluation point (repeatable)");
        s->add_option("--pole", raw.poles, "pole location[:order]; replaces detection (repeatable)");
        s->add_option("--inner-pole", raw.inner, "extra inner pole (repeatable)");
        s->add_option("--m1", raw.m1, "pole order bound at z1");
        s->add_option("--m2", raw.m2, "pole order bound at z2");
        s->add_option("--m", raw.m, "pole order bound at z1 (taylor-laurent)");
        s->add_option("--tol", raw.tol, "relative tolerance for oracle agreement");
        s->add_option("--format", raw.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--seed", raw.seed, "seed for random test points");
        s->add_flag("--verify", raw.verify, "compare coefficients with contour oracles");
        s->add_option("--out", raw.out, "write output to this path");
        count_opts[name] = s->add_option("--count", raw.count, "boundary samples");
        s->add_option("--points", raw.points, "random points per family (verify)");
        s->add_option("--family", raw.family, "taylor, laurent or taylor-laurent")
            ->check(CLI::IsMember({"taylor", "laurent", "taylor-laurent"}));
    }

    std::vector<const char*> argv{"twopoint"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig c;
    c.subcommand = app.get_subcommands().front()->get_name();
    c.function_text = raw.function;
    const bool needs_points = c.subcommand != "verify" && c.subcommand != "confluence";
    if (needs_points && (raw.z1.empty() || raw.z2.empty())) throw UsageError("--z1 and --z2 are required");
    if (!raw.z1.empty()) c.z1 = parse_complex(raw.z1);
    if (!raw.z2.empty()) c.z2 = parse_complex(raw.z2);
    if (c.subcommand == "confluence") {
        if (raw.z0.empty()) throw UsageError("--z0 is required");
        c.z0 = parse_complex(raw.z0);
    }
    if (c.subcommand != "verify" && c.function_text.empty()) throw UsageError("--function is required");
    c.order = raw.order;
    if (c.subcommand == "verify" && order_opts[c.subcommand]->count() == 0) c.order = 9;
    if (c.order < 1) throw UsageError("--order must be at least 1");
    for (const auto& a : raw.at) c.eval_points.push_back(parse_complex(a));
    for (const auto& p : raw.inner) c.inner_poles.push_back(parse_complex(p));
    for (const auto& p : raw.poles) c.pole_override.push_back(parse_pole(p));
    if (raw.m1 >= 0) c.m1 = raw.m1;
    if (raw.m2 >= 0) c.m2 = raw.m2;
    if (raw.m >= 0) c.m = raw.m;
    if (!(raw.tol > 0.0)) throw UsageError("--tol must be positive");
    c.tol = raw.tol;
    c.format = raw.format;
    c.seed = raw.seed;
    c.verify = raw.verify;
    c.out_path = raw.out;
    c.count = raw.count;
    c.count_given = count_opts[c.subcommand]->count() > 0;
    if (c.count < 8) throw UsageError("--count must be at least 8");
    c.points = raw.points;
    if (c.points < 1) throw UsageError("--points must be at least 1");
    c.family = raw.family;
    return c;
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    Output o;
    if (c.subcommand == "expand")
        o = cmd_expand(c);
    else if (c.subcommand == "laurent")
        o = cmd_laurent(c);
    else if (c.subcommand == "taylor-laurent")
        o = cmd_taylor_laurent(c);
    else if (c.subcommand == "region")
        o = cmd_region(c);
    else if (c.subcommand == "eval")
        o = cmd_eval(c);
    else if (c.subcommand == "verify")
        o = cmd_verify(c);
    else if (c.subcommand == "confluence")
        o = cmd_confluence(c);
    else
        throw UsageError("unknown subcommand '" + c.subcommand + "'");

    if (c.out_path.empty()) {
        out << o.text;
    } else {
        std::ofstream file(c.out_path, std::ios::binary);
        if (!file) throw UsageError("cannot open '" + c.out_path + "' for writing");
        file << o.text;
    }
    if (o.code == kVerificationFailed) err << "verification failed\n";
    return o.code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const auto config = parse_args(args, out);
        if (!config) return kOk;
        return execute(*config, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomain;
    }
}

}  // namespace twopoint::cli
