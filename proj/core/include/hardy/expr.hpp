#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hardy {

/// Raised when the expression text does not conform to the grammar.
/// `offset` is the byte position of the offending token.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " (offset " + std::to_string(off) + ")"), offset(off) {}
    std::size_t offset;
};

/// Raised by checked evaluation when the value is not defined at the
/// requested point (ln of a non-positive number, division by zero,
/// fractional power of a negative base, derivative at a kink).
struct EvalDomainError : std::runtime_error {
    EvalDomainError(const std::string& op, double at)
        : std::runtime_error(op + " undefined at r=" + std::to_string(at)), r(at) {}
    double r;
};

enum class NodeKind {
    constant,
    variable,
    add,
    sub,
    mul,
    div,
    pow,  // constant exponent, stored in `value`
    neg,
    exp_fn,
    ln_fn,
    ln1p_fn,  // ln(1+x) evaluated via log1p; parsed from the literal form
    abs_fn,
    min_fn,
    max_fn,
};

struct ExprNode;
using NodeRef = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    double value = 0.0;  // constant value, or exponent for pow
    NodeRef a, b;
};

/// A closed-form function of one positive variable `r`.
///
/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := base ("^" exponent)?      exponent must fold to a constant
///   base   := number | "r" | "e" | func "(" expr ")" | "(" expr ")" | "-" factor
///   func   := "exp" | "ln" | "abs" | "min" | "max"   (min/max take two args)
///
/// Expressions are immutable after parsing; evaluation is pure and safe to
/// call concurrently. Fast evaluation signals domain errors as NaN; the
/// checked variant throws EvalDomainError instead.
class Expression {
  public:
    static Expression parse(std::string_view text);

    /// Build from an already-assembled tree (used by differentiate and
    /// the N-function constructors).
    static Expression from_tree(NodeRef root);

    static Expression constant(double c);
    static Expression variable();

    /// Evaluate at r. Domain errors come back as quiet NaN; overflow as
    /// +/-infinity. Never throws.
    double operator()(double r) const noexcept;

    /// Evaluate at r, throwing EvalDomainError on domain violations.
    double eval_checked(double r) const;

    /// Exact symbolic derivative on the grammar. abs/min/max are
    /// differentiated away from their kinks; evaluating the derivative at
    /// a kink yields a domain error (NaN / EvalDomainError).
    Expression derivative() const;

    /// Canonical text form; parse(str()) reproduces the tree exactly.
    std::string str() const;

    bool structurally_equal(const Expression& other) const;

    /// True when the tree contains no variable; the folded value is
    /// written to *out when given.
    bool is_constant(double* out = nullptr) const;

    const NodeRef& root() const { return root_; }

  private:
    explicit Expression(NodeRef root) : root_(std::move(root)) {}
    NodeRef root_;
};

// Tree-building helpers with light peephole folding (constant folding,
// 0/1 identities). They keep derivative trees from ballooning; this is
// not a simplifier.
namespace ast {
NodeRef constant(double c);
NodeRef variable();
NodeRef add(NodeRef a, NodeRef b);
NodeRef sub(NodeRef a, NodeRef b);
NodeRef mul(NodeRef a, NodeRef b);
NodeRef div(NodeRef a, NodeRef b);
NodeRef pow(NodeRef base, double exponent);
NodeRef neg(NodeRef a);
NodeRef exp(NodeRef a);
NodeRef ln(NodeRef a);
NodeRef abs(NodeRef a);
NodeRef min(NodeRef a, NodeRef b);
NodeRef max(NodeRef a, NodeRef b);
}  // namespace ast

}  // namespace hardy
