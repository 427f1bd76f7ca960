#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncspace/expr.hpp"
#include "ncspace/groupoid.hpp"

namespace ncspace {

using Complex = std::complex<double>;

/// Max-norm discrepancy between two sides of an identity, with the size of
/// the terms involved so callers can judge it relatively.
struct Defect {
  double absolute = 0.0;
  double scale = 0.0;

  double relative() const { return scale > 0.0 ? absolute / scale : absolute; }
};

/// re + i*im, both real expressions over a common symbol table.
struct ComplexExpr {
  Expr re;
  Expr im;

  static ComplexExpr real(Expr e) { return {std::move(e), Expr::constant(0.0)}; }

  Complex eval(std::span<const double> vars) const { return {re.eval(vars), im.eval(vars)}; }
  ComplexExpr derivative(int slot) const { return {re.derivative(slot), im.derivative(slot)}; }
  ComplexExpr conj() const { return {re, -im}; }
  ComplexExpr remap(std::span<const int> slot_map) const { return {re.remap(slot_map), im.remap(slot_map)}; }

  friend ComplexExpr operator+(const ComplexExpr& a, const ComplexExpr& b) { return {a.re + b.re, a.im + b.im}; }
  friend ComplexExpr operator-(const ComplexExpr& a, const ComplexExpr& b) { return {a.re - b.re, a.im - b.im}; }
  friend ComplexExpr operator*(const ComplexExpr& a, const ComplexExpr& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

/// a(x,y) with its first-order partials in source and target coordinates.
struct Jet {
  Complex value;
  std::vector<Complex> d_src;
  std::vector<Complex> d_dst;
};

/// Element of the convolution algebra: a complex function on the arrows of
/// a groupoid, optionally with first-order jets on every arrow.
///
/// Storage is dense per orbit: an orbit of size m holds an m x m row-major
/// value block and, when jets are present, n such blocks for each of d_src
/// and d_dst. Elements tabulated from expressions also keep the expression,
/// which lets derived elements recover exact jets later.
class AlgebraElement {
 public:
  struct Block {
    std::vector<Complex> value;  // m*m, row-major
    std::vector<Complex> d_src;  // n*m*m, component-major
    std::vector<Complex> d_dst;
  };

  /// The zero element, with zero jets when `with_jets`.
  explicit AlgebraElement(GroupoidPtr groupoid, bool with_jets = true);

  const Groupoid& groupoid() const { return *groupoid_; }
  const GroupoidPtr& groupoid_ptr() const { return groupoid_; }
  std::size_t dimension() const { return groupoid_->dimension(); }

  bool has_jets() const { return has_jets_; }
  /// Discards jet storage and the symbolic source.
  void drop_jets();

  Complex value(const Arrow& a) const;
  Jet jet(const Arrow& a) const;
  void set_value(const Arrow& a, Complex v);
  void set_jet(const Arrow& a, const Jet& j);

  const Block& block(std::size_t b) const { return blocks_.at(b); }
  Block& block(std::size_t b) { return blocks_.at(b); }

  const std::optional<ComplexExpr>& symbolic() const { return symbolic_; }
  void set_symbolic(std::optional<ComplexExpr> e) { symbolic_ = std::move(e); }

  /// Largest |value| over all arrows.
  double max_abs() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }

 private:
  void require_same(const AlgebraElement& other) const;

  GroupoidPtr groupoid_;
  bool has_jets_;
  std::vector<Block> blocks_;
  std::optional<ComplexExpr> symbolic_;
};

/// Largest |a(x,y) - b(x,y)| over arrows; operands must share a groupoid.
double max_abs_difference(const AlgebraElement& a, const AlgebraElement& b);

/// Tabulates an expression in x1..xn (source) and y1..yn (target) onto
/// every arrow, with exact symbolic partials as jets.
AlgebraElement from_expression(GroupoidPtr g, std::string_view re, std::string_view im = "0");
AlgebraElement from_expression(GroupoidPtr g, const ComplexExpr& expr);

/// (a*b)(x,y) = sum over z in [x] of a(x,z) b(z,y) w_z. Jets propagate by
/// linearity: d_src from a, d_dst from b.
AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b);

/// a*(x,y) = conj(a(y,x)).
AlgebraElement involution(const AlgebraElement& a);

/// Weighted delta: 1/w_x on units, 0 elsewhere. Two-sided identity for convolve.
AlgebraElement unit(GroupoidPtr g);

/// The element that is 1 on `a` and 0 on every other arrow.
AlgebraElement arrow_indicator(GroupoidPtr g, const Arrow& a);

/// Indicators of every arrow; a linear basis of the algebra.
std::vector<AlgebraElement> spanning_set(GroupoidPtr g);

/// A function on base points, complex valued, optionally with gradients.
struct BaseFunction {
  std::vector<Complex> values;                               // per point index
  std::optional<std::vector<std::vector<Complex>>> gradients;  // per point index, n entries
  std::optional<ComplexExpr> symbolic;                        // over x1..xn

  static BaseFunction from_expression(const DiffSpace& space, std::string_view re, std::string_view im = "0");
  static BaseFunction from_expression(const DiffSpace& space, const ComplexExpr& expr);
  static BaseFunction constant(const DiffSpace& space, Complex c);
};

/// Q(f): (f . a)(x,y) = f(x) a(x,y). Jets by the product rule when f has
/// gradients and a has jets; value-only otherwise.
AlgebraElement module_action(const BaseFunction& f, const AlgebraElement& a);

/// Pointwise product of base functions.
BaseFunction multiply(const BaseFunction& f, const BaseFunction& g);

/// CSV with header src,dst,re,im and, when jets are present,
/// dsrc<i>_re,dsrc<i>_im,... then ddst<i>_re,ddst<i>_im,...
void write_csv(std::ostream& os, const AlgebraElement& a);
AlgebraElement read_csv(std::istream& is, GroupoidPtr g);

}  // namespace ncspace
