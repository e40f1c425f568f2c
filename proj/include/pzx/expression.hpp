#pragma once

// Transfer-function expression language.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | symbol | symbol '(' expr (',' expr)* ')' | '(' expr ')'
//
// `s` is the Laplace variable. `exp(x)` and `e^(x)` denote the delay factor.
// Multiplication must be explicit. Offsets are 0-based code point offsets.

#include "pzx/transfer_function.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pzx {

enum class TokenKind { number, symbol, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    TokenKind kind;
    std::string text; ///< lexeme; canonical ASCII name for symbols
    double value = 0.0; ///< numbers only
    std::size_t offset = 0;

    friend bool operator==(const Token&, const Token&) = default;
};

/// Throws ExpressionError (kind syntax) on an illegal character or empty input.
/// The returned sequence always ends with a TokenKind::end token.
std::vector<Token> tokenize(std::string_view text);

/// Maps Greek spellings to their ASCII aliases (ω -> omega, ζ -> zeta, ...).
std::string canonical_symbol(std::string_view name);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class BinaryOp { add, sub, mul, div, pow };

struct NumberNode {
    double value;
};
struct SymbolNode {
    std::string name;
};
struct VariableNode {};
struct NegateNode {
    ExprPtr operand;
};
struct BinaryNode {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct CallNode {
    std::string function;
    std::vector<ExprPtr> args;
};

struct Expr {
    std::variant<NumberNode, SymbolNode, VariableNode, NegateNode, BinaryNode, CallNode> node;
    std::size_t offset = 0;
};

ExprPtr parse(const std::vector<Token>& tokens);
ExprPtr parse(std::string_view text);

/// Structural rendering, e.g. "Add(1, Mul(2, s))".
std::string to_debug_string(const Expr& e);

/// Symbol bindings used during normalization, keyed by canonical name.
using ParameterEnv = std::map<std::string, double>;

/// Symbols other than `s` and the exponential base `e`.
std::set<std::string> free_symbols(const Expr& e);

TransferFunction normalize(const Expr& e, const ParameterEnv& env);
TransferFunction parse_transfer_function(std::string_view text, const ParameterEnv& env = {});

/// Renders a transfer function as an expression that re-normalizes to the
/// same coefficients. Numbers use the shortest round-trip decimal form.
std::string to_expression(const TransferFunction& tf);

/// Shortest decimal representation that parses back to exactly `v`.
std::string format_number(double v);

} // namespace pzx
