#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twopoint/common.hpp"

namespace twopoint {

enum class Op { constant, variable, negate, add, subtract, multiply, divide, power, exp, sin, cos };

/// Immutable expression tree over the single complex variable z.
///
/// Nodes are shared between copies, so passing an Expr by value is cheap and
/// subtrees can be reused freely when building new expressions.
class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr constant(Complex value);
    static Expr variable();

    Op op() const noexcept;
    /// Value of a constant node; zero for every other kind.
    Complex value() const noexcept;
    /// Exponent of a power node; zero for every other kind.
    int exponent() const noexcept;
    std::span<const Expr> args() const noexcept;

    bool is_constant() const noexcept { return op() == Op::constant; }

    friend Expr operator-(const Expr& a);
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr pow(const Expr& base, int exponent);
    friend Expr exp(const Expr& a);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);

    /// Structural equality: same node kinds, constants and exponents.
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expr make(Op op, std::vector<Expr> args, Complex value = {}, int exponent = 0);

    std::shared_ptr<const Node> node_;
};

/// Parses an arithmetic expression in z.
///
/// Grammar, loosest binding first: `+ -` (left assoc.), `* /` (left assoc.),
/// unary `-`, `^` (right assoc., exponent must be a constant integer).
/// Primaries are numbers (`2`, `1.5e-3`), imaginary literals (`i`, `2i`),
/// the variable `z`, parenthesized expressions and `exp( )`, `sin( )`, `cos( )`.
Expr parse(std::string_view text);

/// Renders an expression that parse() maps back to the same tree.
std::string to_string(const Expr& expr);

struct EvalOptions {
    /// Denominators with magnitude at or below this value raise PoleError.
    double pole_epsilon = 1e-300;
};

Complex eval(const Expr& expr, Complex z, const EvalOptions& options = {});

/// Returns (z - z0)^m * expr. Evaluate the result at z0 through jets, never
/// pointwise, since the pointwise value is 0 * infinity there.
Expr multiply_by_power(const Expr& expr, Complex z0, int m);

struct Pole {
    Complex location;
    int order = 1;
};

struct SingularityOptions {
    /// Largest supported degree of any quotient denominator.
    int max_degree = 16;
    /// Roots closer than this (absolute) are one pole with summed order.
    double cluster_tolerance = 1e-9;
};

/// Locates the poles of expr from its quotient denominators.
///
/// Each denominator must normalize to a polynomial in z. Orders add across
/// products and nested quotients, take the maximum across sums and scale
/// with integer powers. Cancellations against numerator zeros are not
/// detected, so a removable singularity is reported as a pole.
std::vector<Pole> find_singularities(const Expr& expr, const SingularityOptions& options = {});

/// Expression plus its finite pole set. The analyticity domain is the plane
/// minus the pole locations.
class FunctionModel {
public:
    /// Detects the poles with find_singularities().
    explicit FunctionModel(Expr expr, const SingularityOptions& options = {});
    /// Uses the given pole list verbatim instead of detection.
    FunctionModel(Expr expr, std::vector<Pole> poles);

    static FunctionModel parse(std::string_view text) { return FunctionModel(twopoint::parse(text)); }

    const Expr& expr() const noexcept { return expr_; }
    std::span<const Pole> poles() const noexcept { return poles_; }
    bool entire() const noexcept { return poles_.empty(); }

    Complex operator()(Complex z) const { return eval(expr_, z); }

    /// Order of the pole within `tol` of z (scaled by max(1, |z|)), if any.
    std::optional<int> pole_order_at(Complex z, double tol = 1e-9) const;

private:
    Expr expr_;
    std::vector<Pole> poles_;
};

}  // namespace twopoint
