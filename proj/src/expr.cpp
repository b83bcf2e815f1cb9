#include "mhress/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace mhress::expr {

NodePtr Node::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNumber;
  n->value = v;
  return n;
}

NodePtr Node::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVariable;
  return n;
}

NodePtr Node::negate(NodePtr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNegate;
  n->children.push_back(std::move(operand));
  return n;
}

NodePtr Node::binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kBinary;
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return n;
}

NodePtr Node::call(Function f, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCall;
  n->function = f;
  n->children = std::move(args);
  return n;
}

const char* function_name(Function f) {
  switch (f) {
    case Function::kExp: return "exp";
    case Function::kLog: return "log";
    case Function::kAbs: return "abs";
    case Function::kSqrt: return "sqrt";
    case Function::kMin: return "min";
    case Function::kMax: return "max";
  }
  return "?";
}

namespace {

struct FunctionInfo {
  std::string_view name;
  Function function;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"exp", Function::kExp, 1},  {"log", Function::kLog, 1},
    {"abs", Function::kAbs, 1},  {"sqrt", Function::kSqrt, 1},
    {"min", Function::kMin, 2},  {"max", Function::kMax, 2},
};

class Parser {
 public:
  Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("expected operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(pos_, what); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Node::binary(BinaryOp::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Node::binary(BinaryOp::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Node::binary(BinaryOp::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Node::binary(BinaryOp::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return Node::negate(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return Node::binary(BinaryOp::kPow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input, expected a number, variable or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    // Reject "2x": implicit multiplication is not part of the language.
    if (pos_ < src_.size() &&
        (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
         src_[pos_] == '(')) {
      fail("expected operator after number");
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("number out of range");
    }
    return Node::number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    const bool is_call = pos_ < src_.size() && src_[pos_] == '(';
    if (!is_call) {
      if (name == var_) return Node::variable();
      throw UnknownIdentifier(std::string(name));
    }
    const FunctionInfo* info = nullptr;
    for (const auto& f : kFunctions) {
      if (f.name == name) info = &f;
    }
    if (info == nullptr) throw UnknownIdentifier(std::string(name));
    ++pos_;  // '('
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    expect(')');
    if (args.size() != info->arity) {
      fail(std::string(info->name) + " takes " + std::to_string(info->arity) + " argument(s)");
    }
    return Node::call(info->function, std::move(args));
  }

  std::string_view src_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double x) {
  switch (n.kind) {
    case Node::Kind::kNumber:
      return n.value;
    case Node::Kind::kVariable:
      return x;
    case Node::Kind::kNegate:
      return -eval_node(*n.children[0], x);
    case Node::Kind::kBinary: {
      const double a = eval_node(*n.children[0], x);
      const double b = eval_node(*n.children[1], x);
      switch (n.op) {
        case BinaryOp::kAdd: return a + b;
        case BinaryOp::kSub: return a - b;
        case BinaryOp::kMul: return a * b;
        case BinaryOp::kDiv:
          if (b == 0.0) throw DomainError("/", b);
          return a / b;
        case BinaryOp::kPow: {
          const double p = std::pow(a, b);
          if (std::isnan(p)) throw DomainError("^", a);
          return p;
        }
      }
      break;
    }
    case Node::Kind::kCall: {
      const double a = eval_node(*n.children[0], x);
      switch (n.function) {
        case Function::kExp: return std::exp(a);
        case Function::kLog:
          if (!(a > 0.0)) throw DomainError("log", a);
          return std::log(a);
        case Function::kAbs: return std::abs(a);
        case Function::kSqrt:
          if (a < 0.0) throw DomainError("sqrt", a);
          return std::sqrt(a);
        case Function::kMin: return std::min(a, eval_node(*n.children[1], x));
        case Function::kMax: return std::max(a, eval_node(*n.children[1], x));
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

double eval_log_node(const Node& n, double x) {
  if (n.kind == Node::Kind::kCall && n.function == Function::kExp) {
    return eval_node(*n.children[0], x);
  }
  if (n.kind == Node::Kind::kBinary) {
    switch (n.op) {
      case BinaryOp::kMul:
        return eval_log_node(*n.children[0], x) + eval_log_node(*n.children[1], x);
      case BinaryOp::kDiv:
        return eval_log_node(*n.children[0], x) - eval_log_node(*n.children[1], x);
      case BinaryOp::kPow:
        return eval_node(*n.children[1], x) * eval_log_node(*n.children[0], x);
      default:
        break;
    }
  }
  const double v = eval_node(n, x);
  if (!(v > 0.0)) throw DomainError("log", v);
  return std::log(v);
}

void print_node(const Node& n, const std::string& var, std::string& out) {
  switch (n.kind) {
    case Node::Kind::kNumber: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Node::Kind::kVariable:
      out += var;
      return;
    case Node::Kind::kNegate:
      out += "(-";
      print_node(*n.children[0], var, out);
      out += ')';
      return;
    case Node::Kind::kBinary: {
      static constexpr const char* kOps[] = {" + ", " - ", " * ", " / ", " ^ "};
      out += '(';
      print_node(*n.children[0], var, out);
      out += kOps[static_cast<int>(n.op)];
      print_node(*n.children[1], var, out);
      out += ')';
      return;
    }
    case Node::Kind::kCall:
      out += function_name(n.function);
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) out += ", ";
        print_node(*n.children[i], var, out);
      }
      out += ')';
      return;
  }
}

}  // namespace

Expr::Expr(NodePtr root, std::string variable)
    : root_(std::move(root)), variable_(std::move(variable)) {}

double Expr::eval(double x) const { return eval_node(*root_, x); }

double Expr::eval_log(double x) const { return eval_log_node(*root_, x); }

std::string Expr::to_string() const {
  std::string out;
  print_node(*root_, variable_, out);
  return out;
}

Expr parse(std::string_view source, std::string_view var_name) {
  bool blank = true;
  for (char c : source) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw SyntaxError(0, "empty expression");
  Parser p(source, var_name);
  return Expr(p.parse_all(), std::string(var_name));
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case Node::Kind::kNumber:
      if (a.value != b.value) return false;
      break;
    case Node::Kind::kBinary:
      if (a.op != b.op) return false;
      break;
    case Node::Kind::kCall:
      if (a.function != b.function) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

}  // namespace mhress::expr
