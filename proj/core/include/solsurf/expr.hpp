#pragma once

// A small arithmetic language for user-supplied profile functions such as
// zeta(v), xi(v), alpha(s):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'pi' | variable | func '(' expr ')' | '(' expr ')'
//
// func is one of sin cos tan arctan/atan arccos/acos exp log sinh cosh tanh
// sqrt. Every expression has at most one free variable.

#include <memory>
#include <string>
#include <string_view>

#include "solsurf/error.hpp"

namespace solsurf::expr {

enum class Op {
  kConst,
  kVar,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kSin,
  kCos,
  kTan,
  kAtan,
  kAcos,
  kExp,
  kLog,
  kSinh,
  kCosh,
  kTanh,
  kSqrt,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::kConst;
  double value = 0.0;  // kConst only
  NodePtr lhs;         // unary operand or left operand
  NodePtr rhs;
};

class ParseError : public Error {
 public:
  enum class Kind { kSyntax, kUnknownIdentifier, kArity };

  ParseError(Kind kind, std::size_t offset, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  /// Byte offset into the source where the problem was detected.
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Immutable expression tree plus the name of its free variable (empty for
/// constant expressions).
class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, std::string variable)
      : root_(std::move(root)), variable_(std::move(variable)) {}

  const NodePtr& root() const { return root_; }
  const std::string& variable() const { return variable_; }
  bool empty() const { return root_ == nullptr; }

 private:
  NodePtr root_;
  std::string variable_;
};

Expr parse(std::string_view src);

/// Throws DomainError for arguments outside a function's domain
/// (arccos outside [-1, 1], log or sqrt of negatives, division by zero).
double eval(const Expr& e, double x);

/// Symbolic derivative with respect to the free variable, with constant
/// folding.
Expr diff(const Expr& e);

/// Minimal-parenthesis printer; parse(to_string(e)) is structurally equal to e.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace solsurf::expr
