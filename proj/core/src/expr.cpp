#include "solsurf/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace solsurf::expr {
namespace {

struct FuncName {
  std::string_view name;
  Op op;
};

constexpr std::array<FuncName, 14> kFunctions{{
    {"sin", Op::kSin},
    {"cos", Op::kCos},
    {"tan", Op::kTan},
    {"arctan", Op::kAtan},
    {"atan", Op::kAtan},
    {"arccos", Op::kAcos},
    {"acos", Op::kAcos},
    {"exp", Op::kExp},
    {"log", Op::kLog},
    {"ln", Op::kLog},
    {"sinh", Op::kSinh},
    {"cosh", Op::kCosh},
    {"tanh", Op::kTanh},
    {"sqrt", Op::kSqrt},
}};

std::string_view canonical_name(Op op) {
  switch (op) {
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kTan: return "tan";
    case Op::kAtan: return "arctan";
    case Op::kAcos: return "arccos";
    case Op::kExp: return "exp";
    case Op::kLog: return "log";
    case Op::kSinh: return "sinh";
    case Op::kCosh: return "cosh";
    case Op::kTanh: return "tanh";
    case Op::kSqrt: return "sqrt";
    default: return "";
  }
}

// ---------------------------------------------------------------------------
// Node construction with constant folding.

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = v;
  return n;
}

NodePtr make_var() {
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::kConst; }
bool is_const(const NodePtr& n, double v) { return is_const(n) && n->value == v; }

NodePtr neg(NodePtr a) {
  if (is_const(a)) return make_const(-a->value);
  if (a->op == Op::kNeg) return a->lhs;
  return make_node(Op::kNeg, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make_node(Op::kAdd, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return neg(std::move(b));
  return make_node(Op::kSub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a, -1.0)) return neg(std::move(b));
  if (is_const(b, -1.0)) return neg(std::move(a));
  return make_node(Op::kMul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b) && b->value != 0.0) return make_const(a->value / b->value);
  if (is_const(a, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  return make_node(Op::kDiv, std::move(a), std::move(b));
}

NodePtr pow(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return make_const(1.0);
  if (is_const(b, 1.0)) return a;
  if (is_const(a) && is_const(b)) {
    const double v = std::pow(a->value, b->value);
    if (std::isfinite(v)) return make_const(v);
  }
  return make_node(Op::kPow, std::move(a), std::move(b));
}

NodePtr call(Op op, NodePtr a) { return make_node(op, std::move(a)); }

// ---------------------------------------------------------------------------
// Parser.

constexpr int kMaxDepth = 200;

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    NodePtr root = expression(0);
    skip_ws();
    if (pos_ != src_.size()) fail(ParseError::Kind::kSyntax, pos_, "unexpected input");
    return Expr(std::move(root), variable_);
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t at, const std::string& msg) {
    throw ParseError(kind, at, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\n' || src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void guard(int depth) {
    if (depth > kMaxDepth) fail(ParseError::Kind::kSyntax, pos_, "expression nested too deeply");
  }

  NodePtr expression(int depth) {
    guard(depth);
    NodePtr lhs = term(depth + 1);
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Op::kAdd, lhs, term(depth + 1));
      } else if (accept('-')) {
        lhs = make_node(Op::kSub, lhs, term(depth + 1));
      } else {
        return lhs;
      }
    }
  }

  NodePtr term(int depth) {
    guard(depth);
    NodePtr lhs = unary(depth + 1);
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Op::kMul, lhs, unary(depth + 1));
      } else if (accept('/')) {
        lhs = make_node(Op::kDiv, lhs, unary(depth + 1));
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary(int depth) {
    guard(depth);
    if (accept('-')) {
      NodePtr operand = unary(depth + 1);
      if (is_const(operand)) return make_const(-operand->value);
      return make_node(Op::kNeg, std::move(operand));
    }
    if (accept('+')) return unary(depth + 1);
    return power(depth + 1);
  }

  NodePtr power(int depth) {
    guard(depth);
    NodePtr base = primary(depth + 1);
    if (accept('^')) return make_node(Op::kPow, std::move(base), unary(depth + 1));
    return base;
  }

  NodePtr primary(int depth) {
    guard(depth);
    skip_ws();
    if (pos_ >= src_.size()) fail(ParseError::Kind::kSyntax, pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression(depth + 1);
      if (!accept(')')) fail(ParseError::Kind::kSyntax, pos_, "expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier(depth);
    fail(ParseError::Kind::kSyntax, pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail(ParseError::Kind::kSyntax, start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v)) {
      fail(ParseError::Kind::kSyntax, start, "number out of range");
    }
    return make_const(v);
  }

  NodePtr identifier(int depth) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);

    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      if (!accept('(')) {
        fail(ParseError::Kind::kSyntax, pos_, "expected '(' after " + std::string(name));
      }
      std::vector<NodePtr> args;
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ')') {
        ++pos_;
      } else {
        args.push_back(expression(depth + 1));
        while (accept(',')) args.push_back(expression(depth + 1));
        if (!accept(')')) fail(ParseError::Kind::kSyntax, pos_, "expected ')'");
      }
      if (args.size() != 1) {
        fail(ParseError::Kind::kArity, start,
             std::string(name) + " takes 1 argument, got " + std::to_string(args.size()));
      }
      return call(f.op, std::move(args.front()));
    }

    if (name == "pi") return make_const(std::numbers::pi);

    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      fail(ParseError::Kind::kUnknownIdentifier, start,
           "unknown function '" + std::string(name) + "'");
    }
    if (variable_.empty()) {
      variable_ = std::string(name);
    } else if (variable_ != name) {
      fail(ParseError::Kind::kUnknownIdentifier, start,
           "unknown identifier '" + std::string(name) + "' (free variable is '" + variable_ +
               "')");
    }
    return make_var();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::string variable_;
};

// ---------------------------------------------------------------------------
// Evaluation.

[[noreturn]] void domain_fail(std::string_view what, double x) {
  std::ostringstream os;
  os << what << " at argument " << x;
  throw DomainError(os.str());
}

double eval_node(const Node& n, double x) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar: return x;
    case Op::kNeg: return -eval_node(*n.lhs, x);
    case Op::kAdd: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Op::kSub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Op::kMul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Op::kDiv: {
      const double d = eval_node(*n.rhs, x);
      if (d == 0.0) domain_fail("division by zero", x);
      return eval_node(*n.lhs, x) / d;
    }
    case Op::kPow: {
      const double b = eval_node(*n.lhs, x);
      const double e = eval_node(*n.rhs, x);
      if (b < 0.0 && e != std::floor(e)) domain_fail("negative base with fractional exponent", x);
      if (b == 0.0 && e < 0.0) domain_fail("zero base with negative exponent", x);
      return std::pow(b, e);
    }
    case Op::kSin: return std::sin(eval_node(*n.lhs, x));
    case Op::kCos: return std::cos(eval_node(*n.lhs, x));
    case Op::kTan: return std::tan(eval_node(*n.lhs, x));
    case Op::kAtan: return std::atan(eval_node(*n.lhs, x));
    case Op::kAcos: {
      const double a = eval_node(*n.lhs, x);
      if (a < -1.0 || a > 1.0) domain_fail("arccos outside [-1, 1]", x);
      return std::acos(a);
    }
    case Op::kExp: return std::exp(eval_node(*n.lhs, x));
    case Op::kLog: {
      const double a = eval_node(*n.lhs, x);
      if (!(a > 0.0)) domain_fail("log of a non-positive value", x);
      return std::log(a);
    }
    case Op::kSinh: return std::sinh(eval_node(*n.lhs, x));
    case Op::kCosh: return std::cosh(eval_node(*n.lhs, x));
    case Op::kTanh: return std::tanh(eval_node(*n.lhs, x));
    case Op::kSqrt: {
      const double a = eval_node(*n.lhs, x);
      if (a < 0.0) domain_fail("sqrt of a negative value", x);
      return std::sqrt(a);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Differentiation.

NodePtr d(const NodePtr& n) {
  const NodePtr& f = n->lhs;
  const NodePtr& g = n->rhs;
  switch (n->op) {
    case Op::kConst: return make_const(0.0);
    case Op::kVar: return make_const(1.0);
    case Op::kNeg: return neg(d(f));
    case Op::kAdd: return add(d(f), d(g));
    case Op::kSub: return sub(d(f), d(g));
    case Op::kMul: return add(mul(d(f), g), mul(f, d(g)));
    case Op::kDiv: return div(sub(mul(d(f), g), mul(f, d(g))), pow(g, make_const(2.0)));
    case Op::kPow: {
      if (is_const(g)) {
        return mul(mul(g, pow(f, make_const(g->value - 1.0))), d(f));
      }
      // f^g (g' log f + g f' / f)
      return mul(n, add(mul(d(g), call(Op::kLog, f)), div(mul(g, d(f)), f)));
    }
    case Op::kSin: return mul(call(Op::kCos, f), d(f));
    case Op::kCos: return neg(mul(call(Op::kSin, f), d(f)));
    case Op::kTan: return div(d(f), pow(call(Op::kCos, f), make_const(2.0)));
    case Op::kAtan: return div(d(f), add(make_const(1.0), pow(f, make_const(2.0))));
    case Op::kAcos:
      return neg(div(d(f), call(Op::kSqrt, sub(make_const(1.0), pow(f, make_const(2.0))))));
    case Op::kExp: return mul(n, d(f));
    case Op::kLog: return div(d(f), f);
    case Op::kSinh: return mul(call(Op::kCosh, f), d(f));
    case Op::kCosh: return mul(call(Op::kSinh, f), d(f));
    case Op::kTanh: return div(d(f), pow(call(Op::kCosh, f), make_const(2.0)));
    case Op::kSqrt: return div(d(f), mul(make_const(2.0), n));
  }
  return make_const(0.0);
}

// ---------------------------------------------------------------------------
// Printing. Levels: 1 additive, 2 multiplicative, 3 unary, 4 power, 5 atom.

int level(const Node& n) {
  switch (n.op) {
    case Op::kAdd:
    case Op::kSub: return 1;
    case Op::kMul:
    case Op::kDiv: return 2;
    case Op::kNeg: return 3;
    case Op::kPow: return 4;
    case Op::kConst: return (n.value < 0.0 || std::signbit(n.value)) ? 3 : 5;
    default: return 5;
  }
}

void print(const Node& n, const std::string& var, int min_level, std::string& out);

void print_child(const Node& n, const std::string& var, int min_level, std::string& out) {
  if (level(n) < min_level) {
    out += '(';
    print(n, var, 0, out);
    out += ')';
  } else {
    print(n, var, min_level, out);
  }
}

void print(const Node& n, const std::string& var, int /*min_level*/, std::string& out) {
  switch (n.op) {
    case Op::kConst: {
      std::array<char, 64> buf{};
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
      out.append(buf.data(), ec == std::errc() ? ptr : buf.data());
      return;
    }
    case Op::kVar: out += var.empty() ? "x" : var; return;
    case Op::kNeg:
      out += '-';
      print_child(*n.lhs, var, 3, out);
      return;
    case Op::kAdd:
    case Op::kSub:
      print_child(*n.lhs, var, 1, out);
      out += n.op == Op::kAdd ? " + " : " - ";
      print_child(*n.rhs, var, 2, out);
      return;
    case Op::kMul:
    case Op::kDiv:
      print_child(*n.lhs, var, 2, out);
      out += n.op == Op::kMul ? "*" : "/";
      print_child(*n.rhs, var, 3, out);
      return;
    case Op::kPow:
      print_child(*n.lhs, var, 5, out);
      out += '^';
      print_child(*n.rhs, var, 3, out);
      return;
    default:
      out += canonical_name(n.op);
      out += '(';
      print(*n.lhs, var, 0, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const Node* a, const Node* b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::kConst) return a->value == b->value;
  return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& message)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message),
      kind_(kind),
      offset_(offset) {}

Expr parse(std::string_view src) { return Parser(src).run(); }

double eval(const Expr& e, double x) {
  if (e.empty()) throw DomainError("eval: empty expression");
  const double v = eval_node(*e.root(), x);
  if (!std::isfinite(v)) domain_fail("non-finite result", x);
  return v;
}

Expr diff(const Expr& e) {
  if (e.empty()) throw DomainError("diff: empty expression");
  return Expr(d(e.root()), e.variable());
}

std::string to_string(const Expr& e) {
  std::string out;
  if (!e.empty()) print(*e.root(), e.variable(), 0, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return equal_nodes(a.root().get(), b.root().get());
}

}  // namespace solsurf::expr
