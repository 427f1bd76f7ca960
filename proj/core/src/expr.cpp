#include "ncspace/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ncspace/error.hpp"

namespace ncspace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  int slot = -1;
  NodePtr lhs;
  NodePtr rhs;
};

// ---------------------------------------------------------------------------
// SymbolTable

SymbolTable SymbolTable::coordinates(std::size_t n) {
  SymbolTable t;
  for (std::size_t i = 1; i <= n; ++i) t.add("x" + std::to_string(i));
  return t;
}

SymbolTable SymbolTable::coordinate_pairs(std::size_t n) {
  SymbolTable t = coordinates(n);
  for (std::size_t i = 1; i <= n; ++i) t.add("y" + std::to_string(i));
  return t;
}

void SymbolTable::add(std::string name) {
  if (lookup(name) >= 0) throw ValidationError("duplicate symbol '" + name + "'");
  names_.push_back(std::move(name));
}

int SymbolTable::lookup(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

// ---------------------------------------------------------------------------
// Construction with light folding of constants, zeros and ones.

namespace {

bool is_const(const NodePtr& n, double v) { return n->op == Expr::Op::Const && n->value == v; }

}  // namespace

Expr::Expr() : node_(std::make_shared<Node>()) {}

Expr Expr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable(int slot) {
  if (slot < 0) throw ValidationError("negative variable slot");
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->slot = slot;
  return Expr(std::move(n));
}

Expr Expr::make(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs.node_);
  if (op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow)
    n->rhs = std::move(rhs.node_);
  return Expr(std::move(n));
}

Expr::Op Expr::op() const { return node_->op; }
bool Expr::is_zero() const { return is_const(node_, 0.0); }
double Expr::constant_value() const {
  if (node_->op != Op::Const) throw ValidationError("expression is not a constant");
  return node_->value;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.node_->value + b.node_->value);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::make(Expr::Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.node_->value - b.node_->value);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::make(Expr::Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.node_->value * b.node_->value);
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (is_const(a.node_, 1.0)) return b;
  if (is_const(b.node_, 1.0)) return a;
  return Expr::make(Expr::Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.node_->value != 0.0)
    return Expr::constant(a.node_->value / b.node_->value);
  if (a.is_zero() && !(b.is_constant() && b.node_->value == 0.0)) return Expr::constant(0.0);
  if (is_const(b.node_, 1.0)) return a;
  return Expr::make(Expr::Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.node_->value);
  if (a.op() == Expr::Op::Neg) return Expr(a.node_->lhs);
  return Expr::make(Expr::Op::Neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return Expr::constant(1.0);
  if (is_const(exponent.node_, 1.0)) return base;
  if (base.is_constant() && exponent.is_constant())
    return Expr::constant(std::pow(base.node_->value, exponent.node_->value));
  return Expr::make(Expr::Op::Pow, base, exponent);
}

Expr sin(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::sin(a.node_->value));
  return Expr::make(Expr::Op::Sin, a);
}

Expr cos(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::cos(a.node_->value));
  return Expr::make(Expr::Op::Cos, a);
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::exp(a.node_->value));
  return Expr::make(Expr::Op::Exp, a);
}

Expr log(const Expr& a) {
  if (a.is_constant() && a.node_->value > 0.0) return Expr::constant(std::log(a.node_->value));
  return Expr::make(Expr::Op::Log, a);
}

// ---------------------------------------------------------------------------
// Evaluation, differentiation, substitution

namespace {

double eval_node(const Expr::Node& n, std::span<const double> vars) {
  using Op = Expr::Op;
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      if (static_cast<std::size_t>(n.slot) >= vars.size())
        throw ValidationError("expression references variable slot " + std::to_string(n.slot) +
                              " but only " + std::to_string(vars.size()) + " values were given");
      return vars[static_cast<std::size_t>(n.slot)];
    case Op::Neg:
      return -eval_node(*n.lhs, vars);
    case Op::Add:
      return eval_node(*n.lhs, vars) + eval_node(*n.rhs, vars);
    case Op::Sub:
      return eval_node(*n.lhs, vars) - eval_node(*n.rhs, vars);
    case Op::Mul:
      return eval_node(*n.lhs, vars) * eval_node(*n.rhs, vars);
    case Op::Div:
      return eval_node(*n.lhs, vars) / eval_node(*n.rhs, vars);
    case Op::Pow:
      return std::pow(eval_node(*n.lhs, vars), eval_node(*n.rhs, vars));
    case Op::Sin:
      return std::sin(eval_node(*n.lhs, vars));
    case Op::Cos:
      return std::cos(eval_node(*n.lhs, vars));
    case Op::Exp:
      return std::exp(eval_node(*n.lhs, vars));
    case Op::Log:
      return std::log(eval_node(*n.lhs, vars));
  }
  return 0.0;
}

int max_slot_node(const Expr::Node& n) {
  int m = n.op == Expr::Op::Var ? n.slot : -1;
  if (n.lhs) m = std::max(m, max_slot_node(*n.lhs));
  if (n.rhs) m = std::max(m, max_slot_node(*n.rhs));
  return m;
}

}  // namespace

double Expr::eval(std::span<const double> vars) const { return eval_node(*node_, vars); }

int Expr::max_slot() const { return max_slot_node(*node_); }

Expr Expr::derivative(int slot) const {
  const Node& n = *node_;
  Expr u = n.lhs ? Expr(n.lhs) : Expr();
  Expr v = n.rhs ? Expr(n.rhs) : Expr();
  switch (n.op) {
    case Op::Const:
      return constant(0.0);
    case Op::Var:
      return constant(n.slot == slot ? 1.0 : 0.0);
    case Op::Neg:
      return -u.derivative(slot);
    case Op::Add:
      return u.derivative(slot) + v.derivative(slot);
    case Op::Sub:
      return u.derivative(slot) - v.derivative(slot);
    case Op::Mul:
      return u.derivative(slot) * v + u * v.derivative(slot);
    case Op::Div:
      return (u.derivative(slot) * v - u * v.derivative(slot)) / (v * v);
    case Op::Pow: {
      Expr du = u.derivative(slot);
      Expr dv = v.derivative(slot);
      if (dv.is_zero()) return v * pow(u, v - constant(1.0)) * du;
      if (du.is_zero()) return *this * log(u) * dv;
      return *this * (dv * log(u) + v * du / u);
    }
    case Op::Sin:
      return cos(u) * u.derivative(slot);
    case Op::Cos:
      return -(sin(u) * u.derivative(slot));
    case Op::Exp:
      return *this * u.derivative(slot);
    case Op::Log:
      return u.derivative(slot) / u;
  }
  return constant(0.0);
}

Expr Expr::substitute(std::span<const Expr> replacement) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const:
      return *this;
    case Op::Var:
      if (static_cast<std::size_t>(n.slot) >= replacement.size())
        throw ValidationError("substitution does not cover slot " + std::to_string(n.slot));
      return replacement[static_cast<std::size_t>(n.slot)];
    default:
      break;
  }
  Expr u = Expr(n.lhs).substitute(replacement);
  Expr v = n.rhs ? Expr(n.rhs).substitute(replacement) : Expr();
  switch (n.op) {
    case Op::Neg: return -u;
    case Op::Add: return u + v;
    case Op::Sub: return u - v;
    case Op::Mul: return u * v;
    case Op::Div: return u / v;
    case Op::Pow: return pow(u, v);
    case Op::Sin: return sin(u);
    case Op::Cos: return cos(u);
    case Op::Exp: return exp(u);
    case Op::Log: return log(u);
    default: return *this;
  }
}

Expr Expr::remap(std::span<const int> slot_map) const {
  std::vector<Expr> repl;
  repl.reserve(slot_map.size());
  for (int s : slot_map) repl.push_back(variable(s));
  return substitute(repl);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void print_node(const Expr::Node& n, const SymbolTable& symbols, std::ostream& os) {
  using Op = Expr::Op;
  auto binary = [&](const char* sym) {
    os << '(';
    print_node(*n.lhs, symbols, os);
    os << sym;
    print_node(*n.rhs, symbols, os);
    os << ')';
  };
  auto call = [&](const char* fn) {
    os << fn << '(';
    print_node(*n.lhs, symbols, os);
    os << ')';
  };
  switch (n.op) {
    case Op::Const:
      if (n.value < 0) os << '(' << format_number(n.value) << ')';
      else os << format_number(n.value);
      break;
    case Op::Var:
      if (static_cast<std::size_t>(n.slot) < symbols.size()) os << symbols.name(static_cast<std::size_t>(n.slot));
      else os << "$" << n.slot;
      break;
    case Op::Neg:
      os << "(-";
      print_node(*n.lhs, symbols, os);
      os << ')';
      break;
    case Op::Add: binary(" + "); break;
    case Op::Sub: binary(" - "); break;
    case Op::Mul: binary("*"); break;
    case Op::Div: binary("/"); break;
    case Op::Pow: binary("^"); break;
    case Op::Sin: call("sin"); break;
    case Op::Cos: call("cos"); break;
    case Op::Exp: call("exp"); break;
    case Op::Log: call("log"); break;
  }
}

}  // namespace

std::string Expr::to_string(const SymbolTable& symbols) const {
  std::ostringstream os;
  print_node(*node_, symbols, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Recursive-descent parser
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' unary)?
//   primary := number | symbol | func '(' expr ')' | '(' expr ')'

namespace {

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + std::string(text_) + "\": " + what + " at offset " +
                     std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = lhs + parse_term();
      else if (accept('-')) lhs = lhs - parse_term();
      else return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = lhs * parse_unary();
      else if (accept('/')) lhs = lhs / parse_unary();
      else return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        Expr (*fn)(const Expr&) = nullptr;
        if (name == "sin") fn = &sin;
        else if (name == "cos") fn = &cos;
        else if (name == "exp") fn = &exp;
        else if (name == "log") fn = &log;
        else fail("unknown function '" + std::string(name) + "'");
        ++pos_;
        Expr arg = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return fn(arg);
      }
      int slot = symbols_.lookup(name);
      if (slot < 0) {
        pos_ = start;
        fail("unknown symbol '" + std::string(name) + "'");
      }
      return Expr::variable(slot);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expr::constant(v);
  }

  std::string_view text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(std::string_view text, const SymbolTable& symbols) {
  return Parser(text, symbols).parse();
}

}  // namespace ncspace
