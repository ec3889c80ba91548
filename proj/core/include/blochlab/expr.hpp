#ifndef BLOCHLAB_EXPR_HPP
#define BLOCHLAB_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "blochlab/types.hpp"

namespace blochlab {

/// Immutable AST of a holomorphic expression in z1..zn.
///
/// Node set: complex constant, variable, negation, sum, difference, product,
/// quotient, integer power (exponent >= 0), real power (principal branch)
/// and natural logarithm (principal branch). Trees are shared via
/// shared_ptr, so copies are cheap and evaluation is safe from any thread.
class SymbolExpr {
public:
    enum class Kind {
        constant,
        variable,
        negate,
        add,
        sub,
        mul,
        div,
        int_pow,
        real_pow,
        log,
    };

    struct Node {
        Kind kind;
        Complex constant{};            // Kind::constant
        int var_index = 0;             // Kind::variable, 1-based
        int int_exponent = 0;          // Kind::int_pow, >= 0
        double real_exponent = 0.0;    // Kind::real_pow
        std::shared_ptr<const Node> lhs, rhs;
    };

    SymbolExpr() = default;
    explicit SymbolExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    const std::shared_ptr<const Node>& root() const { return root_; }
    bool empty() const { return root_ == nullptr; }

    /// Largest variable index appearing in the tree (0 for constant trees).
    int max_variable() const;
    size_t node_count() const;

    bool structurally_equal(const SymbolExpr& other) const;

    // Builders.
    static SymbolExpr constant(Complex c);
    static SymbolExpr constant(double re) { return constant(Complex(re, 0.0)); }
    static SymbolExpr variable(int k);
    static SymbolExpr negate(SymbolExpr e);
    static SymbolExpr add(SymbolExpr a, SymbolExpr b);
    static SymbolExpr sub(SymbolExpr a, SymbolExpr b);
    static SymbolExpr mul(SymbolExpr a, SymbolExpr b);
    static SymbolExpr div(SymbolExpr a, SymbolExpr b);
    static SymbolExpr int_pow(SymbolExpr base, int exponent);
    static SymbolExpr real_pow(SymbolExpr base, double exponent);
    static SymbolExpr log(SymbolExpr e);

private:
    std::shared_ptr<const Node> root_;
};

/// Serializes the tree back to the expression grammar. Parsing the result of
/// unparse(parse(text)) reproduces the same tree. Constants that are not a
/// plain nonnegative real or imaginary literal print as a parenthesized
/// "(a+bi)" composite, which reparses to an equivalent sum/difference tree.
std::string unparse(const SymbolExpr& e);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    size_t position() const { return position_; }

private:
    size_t position_;
};

/// Parses an expression in z1..zn.
///
/// Grammar:  expr   := term (('+'|'-') term)*
///           term   := factor (('*'|'/') factor)*
///           factor := base ('^' ['-'] number)?
///           base   := number | number'i' | 'i' | var | '(' expr ')'
///                   | 'ln' '(' expr ')' | '-' base
///           var    := 'z' digits
/// Whitespace is insignificant; numbers are decimals with an optional
/// exponent part. A nonnegative integer power exponent becomes an integer
/// power node, anything else a principal-branch real power.
SymbolExpr parse_expression(const std::string& text, int n);

}  // namespace blochlab

#endif
