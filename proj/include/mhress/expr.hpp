#pragma once

// A small arithmetic expression language used to declare target densities
// and proposal shapes in config files.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | var | func '(' args ')' | '(' expr ')'
//
// `-x^2` parses as `-(x^2)` and `2^-1` is accepted. Functions: exp, log,
// abs, sqrt (one argument) and min, max (two arguments).

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mhress/errors.hpp"

namespace mhress::expr {

enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };
enum class Function { kExp, kLog, kAbs, kSqrt, kMin, kMax };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { kNumber, kVariable, kNegate, kBinary, kCall };

  Kind kind = Kind::kNumber;
  double value = 0.0;
  BinaryOp op = BinaryOp::kAdd;
  Function function = Function::kExp;
  std::vector<NodePtr> children;

  static NodePtr number(double v);
  static NodePtr variable();
  static NodePtr negate(NodePtr operand);
  static NodePtr binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
  static NodePtr call(Function f, std::vector<NodePtr> args);
};

/// Immutable parsed expression in one variable.
class Expr {
 public:
  Expr(NodePtr root, std::string variable);

  /// IEEE evaluation; throws DomainError instead of producing NaN.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  /// log(eval(x)) with log(exp(e)) = e, log(a*b) = log a + log b, log(a/b)
  /// and log(a^b) = b log a expanded symbolically so that densities written
  /// as exp(...) stay finite far in the tails.
  double eval_log(double x) const;

  /// Fully parenthesized source form; parse(to_string()) reproduces the tree.
  std::string to_string() const;

  const std::string& variable() const { return variable_; }
  const Node& root() const { return *root_; }

 private:
  NodePtr root_;
  std::string variable_;
};

Expr parse(std::string_view source, std::string_view var_name);

bool structurally_equal(const Node& a, const Node& b);

const char* function_name(Function f);

}  // namespace mhress::expr
