#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace genconvex {

enum class NodeKind {
    Constant,
    Variable,
    Neg,
    Sqrt,
    Exp,
    Ln,
    Abs,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
};

bool is_unary(NodeKind kind) noexcept;
bool is_binary(NodeKind kind) noexcept;

/// Immutable expression tree in one real variable.
///
/// Nodes are shared, so copying an Expr is cheap. Every binary node has two
/// children and every unary node has one; the constructors enforce it.
class Expr {
public:
    struct Node;

    static Expr constant(double value);
    static Expr variable(std::string name);
    static Expr unary(NodeKind kind, Expr operand);
    static Expr binary(NodeKind kind, Expr lhs, Expr rhs);

    NodeKind kind() const noexcept;
    double value() const;                // Constant only
    const std::string& name() const;     // Variable only
    Expr child(std::size_t i) const;     // 0 for unary, 0/1 for binary

    /// Structural equality. Constants compare by bit pattern.
    friend bool operator==(const Expr& a, const Expr& b);

    /// Evaluate at `u`. Returns nullopt wherever the value is undefined
    /// or non-finite.
    std::optional<double> try_eval(double u) const noexcept;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parse `text` into an expression in `variable`.
///
/// Grammar (precedence low to high):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?          (right associative)
///   atom   := number | symbol | '(' expr ')' | func '(' expr ')'
///   func   := sqrt | exp | ln | abs
///
/// Throws ParseError carrying the byte offset of the first problem.
Expr parse(std::string_view text, std::string_view variable);

/// Identifiers appearing in `text` that are not function names, in order of
/// first appearance. Used to infer the variable of a one-symbol expression.
std::vector<std::string> free_symbols(std::string_view text);

/// Fully parenthesised text that parses back to the same tree.
std::string print(const Expr& e);

/// Flat postfix form of an Expr for fast repeated evaluation.
class Program {
public:
    explicit Program(const Expr& e);
    std::optional<double> eval(double u) const noexcept;

private:
    struct Op {
        NodeKind kind;
        double value;
    };
    std::vector<Op> ops_;
    std::size_t max_depth_ = 0;
};

}  // namespace genconvex
