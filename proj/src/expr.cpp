#include "twopoint/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "twopoint/polynomial.hpp"

namespace twopoint {

struct Expr::Node {
    Op op = Op::constant;
    Complex value{};
    int exponent = 0;
    std::vector<Expr> args;
};

Expr Expr::make(Op op, std::vector<Expr> args, Complex value, int exponent) {
    auto node = std::make_shared<Node>();
    node->op = op;
    node->value = value;
    node->exponent = exponent;
    node->args = std::move(args);
    return Expr(std::move(node));
}

Expr::Expr() : Expr(make(Op::constant, {}, Complex{})) {}

Expr Expr::constant(Complex value) { return make(Op::constant, {}, value); }
Expr Expr::variable() { return make(Op::variable, {}); }

Op Expr::op() const noexcept { return node_->op; }
Complex Expr::value() const noexcept { return node_->value; }
int Expr::exponent() const noexcept { return node_->exponent; }
std::span<const Expr> Expr::args() const noexcept { return node_->args; }

Expr operator-(const Expr& a) { return Expr::make(Op::negate, {a}); }
Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Op::add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Op::subtract, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Op::multiply, {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Op::divide, {a, b}); }
Expr pow(const Expr& base, int exponent) { return Expr::make(Op::power, {base}, {}, exponent); }
Expr exp(const Expr& a) { return Expr::make(Op::exp, {a}); }
Expr sin(const Expr& a) { return Expr::make(Op::sin, {a}); }
Expr cos(const Expr& a) { return Expr::make(Op::cos, {a}); }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.op() != b.op() || a.value() != b.value() || a.exponent() != b.exponent()) return false;
    const auto x = a.args(), y = b.args();
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (!(x[k] == y[k])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        Expr e = expression();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expression() {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = lhs + term();
            else if (accept('-'))
                lhs = lhs - term();
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = lhs * unary();
            else if (accept('/'))
                lhs = lhs / unary();
            else
                return lhs;
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        skip_space();
        const std::size_t at = pos_;
        const Expr exponent = unary();
        Complex value;
        try {
            value = eval(exponent, Complex{});
        } catch (const PoleError&) {
            throw ParseError("non-integer exponent", at);
        }
        if (depends_on_variable(exponent) || value.imag() != 0.0 || value.real() != std::round(value.real()) ||
            std::abs(value.real()) > 1e6)
            throw ParseError("non-integer exponent", at);
        return pow(base, static_cast<int>(value.real()));
    }

    static bool depends_on_variable(const Expr& e) {
        if (e.op() == Op::variable) return true;
        for (const auto& a : e.args())
            if (depends_on_variable(a)) return true;
        return false;
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expression();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "z") return Expr::variable();
            if (name == "i") return Expr::constant({0.0, 1.0});
            Expr (*fn)(const Expr&) = nullptr;
            if (name == "exp")
                fn = &exp;
            else if (name == "sin")
                fn = &sin;
            else if (name == "cos")
                fn = &cos;
            if (fn == nullptr) {
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'");
            }
            expect('(');
            Expr arg = expression();
            expect(')');
            return fn(arg);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    Expr number() {
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{}) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        // An 'i' glued to the number makes it imaginary, unless it starts a longer identifier.
        if (pos_ < text_.size() && text_[pos_] == 'i' &&
            (pos_ + 1 == text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_ + 1])))) {
            ++pos_;
            return Expr::constant({0.0, value});
        }
        return Expr::constant(value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(Op op) {
    switch (op) {
        case Op::add:
        case Op::subtract:
            return 1;
        case Op::multiply:
        case Op::divide:
            return 2;
        case Op::negate:
            return 3;
        case Op::power:
            return 4;
        default:
            return 5;
    }
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void print(const Expr& e, std::string& out, int min_precedence);

void print_constant(Complex c, std::string& out) {
    if (c.imag() == 0.0 && !std::signbit(c.real())) {
        out += format_double(c.real());
    } else if (c.real() == 0.0 && !std::signbit(c.imag())) {
        out += format_double(c.imag()) + "i";
    } else if (c.imag() == 0.0) {
        // Constants built in code only; these parse back as arithmetic.
        out += "(" + format_double(c.real()) + ")";
    } else {
        out += "(" + format_double(c.real()) + (std::signbit(c.imag()) ? "-" : "+") +
               format_double(std::abs(c.imag())) + "i)";
    }
}

void print(const Expr& e, std::string& out, int min_precedence) {
    const int p = precedence(e.op());
    const bool paren = p < min_precedence;
    if (paren) out += '(';
    const auto a = e.args();
    switch (e.op()) {
        case Op::constant:
            print_constant(e.value(), out);
            break;
        case Op::variable:
            out += 'z';
            break;
        case Op::negate:
            out += '-';
            print(a[0], out, 3);
            break;
        case Op::add:
        case Op::subtract:
            print(a[0], out, 1);
            out += e.op() == Op::add ? '+' : '-';
            print(a[1], out, 2);
            break;
        case Op::multiply:
        case Op::divide:
            print(a[0], out, 2);
            out += e.op() == Op::multiply ? '*' : '/';
            print(a[1], out, 3);
            break;
        case Op::power:
            print(a[0], out, 5);
            out += '^';
            out += std::to_string(e.exponent());
            break;
        case Op::exp:
        case Op::sin:
        case Op::cos:
            out += e.op() == Op::exp ? "exp(" : e.op() == Op::sin ? "sin(" : "cos(";
            print(a[0], out, 0);
            out += ')';
            break;
    }
    if (paren) out += ')';
}

}  // namespace

std::string to_string(const Expr& expr) {
    std::string out;
    print(expr, out, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Complex checked_reciprocal(Complex d, const EvalOptions& options) {
    if (std::abs(d) <= options.pole_epsilon) throw PoleError("evaluation at a pole (zero denominator)");
    return 1.0 / d;
}

Complex integer_power(Complex base, int n, const EvalOptions& options) {
    const bool invert = n < 0;
    unsigned m = invert ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
    Complex result = 1.0;
    for (; m > 0; m >>= 1) {
        if (m & 1u) result *= base;
        if (m > 1) base *= base;
    }
    return invert ? checked_reciprocal(result, options) : result;
}

}  // namespace

Complex eval(const Expr& e, Complex z, const EvalOptions& options) {
    const auto a = e.args();
    switch (e.op()) {
        case Op::constant:
            return e.value();
        case Op::variable:
            return z;
        case Op::negate:
            return -eval(a[0], z, options);
        case Op::add:
            return eval(a[0], z, options) + eval(a[1], z, options);
        case Op::subtract:
            return eval(a[0], z, options) - eval(a[1], z, options);
        case Op::multiply:
            return eval(a[0], z, options) * eval(a[1], z, options);
        case Op::divide: {
            const Complex num = eval(a[0], z, options);
            return num * checked_reciprocal(eval(a[1], z, options), options);
        }
        case Op::power:
            return integer_power(eval(a[0], z, options), e.exponent(), options);
        case Op::exp:
            return std::exp(eval(a[0], z, options));
        case Op::sin:
            return std::sin(eval(a[0], z, options));
        case Op::cos:
            return std::cos(eval(a[0], z, options));
    }
    return {};
}

Expr multiply_by_power(const Expr& expr, Complex z0, int m) {
    if (m < 1) throw std::invalid_argument("multiply_by_power requires m >= 1");
    return pow(Expr::variable() - Expr::constant(z0), m) * expr;
}

// ---------------------------------------------------------------------------
// Singularities

namespace {

bool depends_on_z(const Expr& e) {
    if (e.op() == Op::variable) return true;
    for (const auto& a : e.args())
        if (depends_on_z(a)) return true;
    return false;
}

Polynomial as_polynomial(const Expr& e) {
    if (!depends_on_z(e)) return Polynomial::constant(eval(e, Complex{}));
    const auto a = e.args();
    switch (e.op()) {
        case Op::variable:
            return Polynomial({0.0, 1.0});
        case Op::negate:
            return -as_polynomial(a[0]);
        case Op::add:
            return as_polynomial(a[0]) + as_polynomial(a[1]);
        case Op::subtract:
            return as_polynomial(a[0]) - as_polynomial(a[1]);
        case Op::multiply:
            return as_polynomial(a[0]) * as_polynomial(a[1]);
        case Op::divide: {
            const Polynomial den = as_polynomial(a[1]);
            if (den.degree() != 0) throw DomainError("non-polynomial denominator: nested quotient by a function of z");
            return (1.0 / den[0]) * as_polynomial(a[0]);
        }
        case Op::power:
            if (e.exponent() < 0) throw DomainError("non-polynomial denominator: negative power inside a denominator");
            return pow(as_polynomial(a[0]), e.exponent());
        case Op::exp:
        case Op::sin:
        case Op::cos:
            throw DomainError("non-polynomial denominator: transcendental function of z in a denominator");
        case Op::constant:
            break;
    }
    return Polynomial::constant(e.value());
}

struct Factor {
    Polynomial poly;
    int multiplicity;
};

// Splits a denominator along its product and power structure so that
// repeated factors keep exact multiplicities.
void denominator_factors(const Expr& e, int multiplicity, std::vector<Factor>& out) {
    const auto a = e.args();
    switch (e.op()) {
        case Op::multiply:
            denominator_factors(a[0], multiplicity, out);
            denominator_factors(a[1], multiplicity, out);
            return;
        case Op::negate:
            denominator_factors(a[0], multiplicity, out);
            return;
        case Op::power:
            if (e.exponent() > 0) {
                denominator_factors(a[0], multiplicity * e.exponent(), out);
                return;
            }
            if (e.exponent() == 0) return;
            break;
        default:
            break;
    }
    out.push_back({as_polynomial(e), multiplicity});
}

class PoleCollector {
public:
    explicit PoleCollector(const SingularityOptions& options) : options_(options) {}

    std::vector<Pole> collect(const Expr& e) {
        const auto a = e.args();
        switch (e.op()) {
            case Op::constant:
            case Op::variable:
                return {};
            case Op::negate:
                return collect(a[0]);
            case Op::add:
            case Op::subtract:
                return merge(collect(a[0]), collect(a[1]), false);
            case Op::multiply:
                return merge(collect(a[0]), collect(a[1]), true);
            case Op::divide:
                return merge(collect(a[0]), zeros_of(a[1], 1), true);
            case Op::power: {
                if (e.exponent() < 0) return zeros_of(a[0], -e.exponent());
                auto poles = collect(a[0]);
                for (auto& p : poles) p.order *= e.exponent();
                if (e.exponent() == 0) poles.clear();
                return poles;
            }
            case Op::exp:
            case Op::sin:
            case Op::cos:
                if (!collect(a[0]).empty())
                    throw DomainError("essential singularity: transcendental function of an argument with poles");
                return {};
        }
        return {};
    }

    std::vector<Pole> merge(std::vector<Pole> into, const std::vector<Pole>& from, bool add_orders) const {
        for (const auto& p : from) {
            bool found = false;
            for (auto& q : into) {
                if (near(p.location, q.location, options_.cluster_tolerance)) {
                    q.order = add_orders ? q.order + p.order : std::max(q.order, p.order);
                    found = true;
                    break;
                }
            }
            if (!found) into.push_back(p);
        }
        return into;
    }

private:
    std::vector<Pole> zeros_of(const Expr& denominator, int multiplicity) const {
        std::vector<Factor> factors;
        denominator_factors(denominator, multiplicity, factors);
        int degree = 0;
        for (const auto& f : factors) {
            if (f.poly.is_zero()) throw DomainError("division by an identically zero expression");
            degree += f.poly.degree() * f.multiplicity;
        }
        if (degree > options_.max_degree)
            throw DomainError("denominator degree " + std::to_string(degree) + " exceeds the supported maximum " +
                              std::to_string(options_.max_degree));
        std::vector<Pole> poles;
        for (const auto& f : factors) {
            if (f.poly.degree() <= 0) continue;
            std::vector<Pole> these;
            for (const auto& r : polynomial_roots(f.poly)) these.push_back({r.location, r.multiplicity * f.multiplicity});
            poles = merge(std::move(poles), these, true);
        }
        return poles;
    }

    SingularityOptions options_;
};

}  // namespace

std::vector<Pole> find_singularities(const Expr& expr, const SingularityOptions& options) {
    PoleCollector collector(options);
    // A final merge pass catches clusters formed across separate subtrees.
    return collector.merge({}, collector.collect(expr), true);
}

FunctionModel::FunctionModel(Expr expr, const SingularityOptions& options)
    : expr_(std::move(expr)), poles_(find_singularities(expr_, options)) {}

FunctionModel::FunctionModel(Expr expr, std::vector<Pole> poles) : expr_(std::move(expr)), poles_(std::move(poles)) {
    for (std::size_t i = 0; i < poles_.size(); ++i) {
        if (poles_[i].order < 1) throw DomainError("pole orders must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (poles_[i].location == poles_[j].location) throw DomainError("pole locations must be distinct");
    }
}

std::optional<int> FunctionModel::pole_order_at(Complex z, double tol) const {
    const double scaled = tol * std::max(1.0, std::abs(z));
    for (const auto& p : poles_)
        if (near(p.location, z, scaled)) return p.order;
    return std::nullopt;
}

}  // namespace twopoint
