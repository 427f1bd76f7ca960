#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ncspace {

/// Maps symbol names to variable slots. Slots are dense, starting at 0.
class SymbolTable {
 public:
  SymbolTable() = default;

  /// x1..xn mapped to slots 0..n-1.
  static SymbolTable coordinates(std::size_t n);
  /// x1..xn then y1..yn, mapped to slots 0..2n-1.
  static SymbolTable coordinate_pairs(std::size_t n);

  void add(std::string name);
  /// Returns -1 for an unknown symbol.
  int lookup(std::string_view name) const;
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t slot) const { return names_.at(slot); }

 private:
  std::vector<std::string> names_;
};

/// Immutable real-valued expression tree with exact symbolic differentiation.
///
/// Nodes are shared, so copies are cheap. Evaluation visits the tree in a
/// fixed order and therefore is bit-for-bit reproducible for equal inputs.
class Expr {
 public:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log };

  Expr();  // the constant 0

  static Expr constant(double v);
  static Expr variable(int slot);

  static Expr parse(std::string_view text, const SymbolTable& symbols);

  double eval(std::span<const double> vars) const;
  Expr derivative(int slot) const;

  /// Replaces each variable slot `s` with `replacement[s]`.
  Expr substitute(std::span<const Expr> replacement) const;
  /// Renames variable slot `s` to `slot_map[s]`.
  Expr remap(std::span<const int> slot_map) const;

  Op op() const;
  bool is_constant() const { return op() == Op::Const; }
  bool is_zero() const;
  double constant_value() const;
  /// Highest variable slot referenced, or -1 when the expression is closed.
  int max_slot() const;

  std::string to_string(const SymbolTable& symbols) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, Expr lhs, Expr rhs = Expr());

  std::shared_ptr<const Node> node_;
};

}  // namespace ncspace
