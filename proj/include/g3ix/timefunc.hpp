#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "g3ix/errors.hpp"

namespace g3ix {

/// Value together with its derivative with respect to the time variable t.
/// Arithmetic follows the dual-number chain rule, so derivatives are exact
/// to round-off.
struct DualValue {
    double value = 0.0;
    double deriv = 0.0;
};

using ParamMap = std::map<std::string, double, std::less<>>;

/// Immutable expression in one time variable `t` plus named parameters.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' int)?
///   base   := number | 't' | ident | func '(' expr ')' | '(' expr ')' | '-' base
///   func   := sin | cos | exp | sqrt
/// Numbers are decimals with optional exponent; whitespace is insignificant.
/// The power operator takes a literal (optionally negated) integer exponent.
class Expr {
public:
    Expr() = default;

    /// Throws SyntaxError (with byte offset and expected-token set).
    static Expr parse(std::string_view source);

    // Programmatic constructors, used to assemble derived curves.
    static Expr constant(double v);
    static Expr variable();                 // t
    static Expr parameter(std::string name);
    static Expr sin(Expr x);
    static Expr cos(Expr x);
    static Expr times(Expr a, Expr b);

    bool empty() const { return root_ == nullptr; }

    /// Evaluate value and d/dt at time t. Throws UnboundParameterError and
    /// DomainError (sqrt of a negative, division by zero, 0 to a negative
    /// integer power).
    DualValue eval_dual(double t, const ParamMap& params = {}) const;
    double value(double t, const ParamMap& params = {}) const;

    /// Fully parenthesized form; parses back to a structurally equal tree.
    std::string to_string() const;

    /// Structural equality of the syntax trees.
    bool same_tree(const Expr& other) const;

    struct Node;  // defined in the implementation file

private:
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace g3ix
