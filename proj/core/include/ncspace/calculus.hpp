#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncspace/algebra.hpp"

namespace ncspace {

/// A vector field P = sum_i c_i d/dx_i on the base, acting as a derivation
/// of C^inf(M).
struct Derivation {
  std::size_t dimension = 0;
  /// c_i at each point, indexed [point][i].
  std::vector<std::vector<double>> coefficients;
  /// dc_i/dx_j at each point, indexed [point][i * dimension + j].
  std::optional<std::vector<std::vector<double>>> coefficient_gradients;
  /// Components as expressions over x1..xn, when known.
  std::optional<std::vector<Expr>> symbolic;

  /// Components given as expression text, one per coordinate.
  static Derivation from_expressions(const DiffSpace& space, std::span<const std::string> components);
  static Derivation from_expressions(const DiffSpace& space, std::vector<Expr> components);
  /// d/dx_{axis+1}.
  static Derivation coordinate(const DiffSpace& space, std::size_t axis);
  static Derivation zero(const DiffSpace& space);
};

/// Pf = sum_i c_i df/dx_i. Needs the gradient of f. When f is symbolic and P
/// carries coefficient gradients, Pf gets gradients too (second derivatives
/// of f come from its expression).
BaseFunction apply(const DiffSpace& space, const Derivation& P, const BaseFunction& f);

/// P_hor(a)(x,y) = sum_i c_i(x) da/dx_i(x,y). Needs jets on `a`.
///
/// The result carries values only, unless both P and `a` are symbolic, in
/// which case its jets are recomputed from the differentiated expression.
AlgebraElement lift_horizontal(const Derivation& P, const AlgebraElement& a);
/// P_ver(a)(x,y) = sum_i c_i(y) da/dy_i(x,y).
AlgebraElement lift_vertical(const Derivation& P, const AlgebraElement& a);
/// P_hor + P_ver.
AlgebraElement lift_symmetrized(const Derivation& P, const AlgebraElement& a);

/// |P(a*b) - (P_hor(a)*b + a*P_ver(b))| over arrows.
Defect leibniz_defect(const Derivation& P, const AlgebraElement& a, const AlgebraElement& b);

/// [P, Q(f)] a = P(Q(f)a) - Q(f)(P a).
AlgebraElement commutator(const Derivation& P, const BaseFunction& f, const AlgebraElement& a);

/// |[P, Q(f)]a - Q(Pf)a| over arrows.
Defect commutator_defect(const Derivation& P, const BaseFunction& f, const AlgebraElement& a);

}  // namespace ncspace
