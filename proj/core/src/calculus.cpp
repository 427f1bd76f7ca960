#include "ncspace/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "ncspace/error.hpp"

namespace ncspace {

Derivation Derivation::from_expressions(const DiffSpace& space, std::span<const std::string> components) {
  SymbolTable symbols = SymbolTable::coordinates(space.dimension());
  std::vector<Expr> exprs;
  for (const auto& c : components) exprs.push_back(Expr::parse(c, symbols));
  return from_expressions(space, std::move(exprs));
}

Derivation Derivation::from_expressions(const DiffSpace& space, std::vector<Expr> components) {
  const std::size_t n = space.dimension();
  if (components.size() != n)
    throw MismatchError("vector field has " + std::to_string(components.size()) + " components, space dimension is " +
                        std::to_string(n));
  Derivation P;
  P.dimension = n;
  P.coefficient_gradients.emplace();
  for (const Point& p : space.points()) {
    std::vector<double> c(n);
    std::vector<double> dc(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = components[i].eval(p.coords);
      if (!std::isfinite(c[i])) throw ValidationError("vector field is not finite at point " + std::to_string(p.id));
      for (std::size_t j = 0; j < n; ++j) dc[i * n + j] = components[i].derivative(static_cast<int>(j)).eval(p.coords);
    }
    P.coefficients.push_back(std::move(c));
    P.coefficient_gradients->push_back(std::move(dc));
  }
  P.symbolic = std::move(components);
  return P;
}

Derivation Derivation::coordinate(const DiffSpace& space, std::size_t axis) {
  if (axis >= space.dimension()) throw ValidationError("coordinate axis out of range");
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < space.dimension(); ++i) comps.push_back(Expr::constant(i == axis ? 1.0 : 0.0));
  return from_expressions(space, std::move(comps));
}

Derivation Derivation::zero(const DiffSpace& space) {
  return from_expressions(space, std::vector<Expr>(space.dimension(), Expr::constant(0.0)));
}

namespace {

void require_compatible(const Derivation& P, const DiffSpace& space) {
  if (P.dimension != space.dimension()) throw MismatchError("vector field dimension does not match the space");
  if (P.coefficients.size() != space.size()) throw MismatchError("vector field is not defined on every base point");
}

ComplexExpr symbolic_lift(const Derivation& P, const ComplexExpr& a, std::size_t n, bool vertical) {
  std::vector<int> to_target(n);
  for (std::size_t i = 0; i < n; ++i) to_target[i] = static_cast<int>(n + i);
  ComplexExpr out = ComplexExpr::real(Expr::constant(0.0));
  for (std::size_t i = 0; i < n; ++i) {
    Expr c = (*P.symbolic)[i];
    if (vertical) c = c.remap(to_target);
    const int slot = static_cast<int>(vertical ? n + i : i);
    out = out + ComplexExpr::real(c) * a.derivative(slot);
  }
  return out;
}

AlgebraElement lift(const Derivation& P, const AlgebraElement& a, bool vertical) {
  const Groupoid& g = a.groupoid();
  require_compatible(P, g.base());
  if (!a.has_jets()) throw MissingDataError("lifted derivation needs jets on the element");
  const std::size_t n = g.dimension();

  AlgebraElement r(a.groupoid_ptr(), false);
  if (P.symbolic && a.symbolic()) r = from_expression(a.groupoid_ptr(), symbolic_lift(P, *a.symbolic(), n, vertical));

  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    const auto& orbit = g.orbit(k);
    const std::size_t m = orbit.size();
    const std::size_t mm = m * m;
    const auto& ab = a.block(k);
    const auto& partials = vertical ? ab.d_dst : ab.d_src;
    auto& rb = r.block(k);
    for (std::size_t row = 0; row < m; ++row) {
      for (std::size_t c = 0; c < m; ++c) {
        const auto& coeff = P.coefficients[orbit[vertical ? c : row]];
        Complex v{};
        for (std::size_t i = 0; i < n; ++i) v += coeff[i] * partials[i * mm + row * m + c];
        rb.value[row * m + c] = v;
      }
    }
  }
  return r;
}

}  // namespace

BaseFunction apply(const DiffSpace& space, const Derivation& P, const BaseFunction& f) {
  require_compatible(P, space);
  const std::size_t n = P.dimension;
  if (!f.gradients) throw MissingDataError("applying a vector field needs the gradient of the function");
  if (f.values.size() != space.size()) throw MismatchError("function is not defined on every base point");

  BaseFunction out;
  for (std::size_t p = 0; p < f.values.size(); ++p) {
    Complex v{};
    for (std::size_t i = 0; i < n; ++i) v += P.coefficients[p][i] * (*f.gradients)[p][i];
    out.values.push_back(v);
  }
  if (!f.symbolic) return out;

  std::vector<ComplexExpr> df;
  for (std::size_t i = 0; i < n; ++i) df.push_back(f.symbolic->derivative(static_cast<int>(i)));
  if (P.symbolic) {
    ComplexExpr e = ComplexExpr::real(Expr::constant(0.0));
    for (std::size_t i = 0; i < n; ++i) e = e + ComplexExpr::real((*P.symbolic)[i]) * df[i];
    out.symbolic = e;
  }
  if (!P.coefficient_gradients) return out;

  // d/dx_j (sum_i c_i df/dx_i) = sum_i (dc_i/dx_j) df/dx_i + c_i d2f/dx_i dx_j
  std::vector<std::vector<ComplexExpr>> d2f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d2f[i].push_back(df[i].derivative(static_cast<int>(j)));
  out.gradients.emplace();
  for (std::size_t p = 0; p < space.size(); ++p) {
    const auto& x = space.point(p).coords;
    const auto& dc = (*P.coefficient_gradients)[p];
    std::vector<Complex> grad(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        grad[j] += dc[i * n + j] * (*f.gradients)[p][i] + P.coefficients[p][i] * d2f[i][j].eval(x);
    out.gradients->push_back(std::move(grad));
  }
  return out;
}

AlgebraElement lift_horizontal(const Derivation& P, const AlgebraElement& a) { return lift(P, a, false); }

AlgebraElement lift_vertical(const Derivation& P, const AlgebraElement& a) { return lift(P, a, true); }

AlgebraElement lift_symmetrized(const Derivation& P, const AlgebraElement& a) {
  return lift_horizontal(P, a) + lift_vertical(P, a);
}

Defect leibniz_defect(const Derivation& P, const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.has_jets() || !b.has_jets()) throw MissingDataError("Leibniz check needs jets on both elements");
  AlgebraElement lhs = lift_symmetrized(P, convolve(a, b));
  AlgebraElement left = convolve(lift_horizontal(P, a), b);
  AlgebraElement right = convolve(a, lift_vertical(P, b));
  Defect d;
  d.absolute = max_abs_difference(lhs, left + right);
  d.scale = std::max({lhs.max_abs(), left.max_abs(), right.max_abs()});
  return d;
}

AlgebraElement commutator(const Derivation& P, const BaseFunction& f, const AlgebraElement& a) {
  if (!f.gradients) throw MissingDataError("commutator needs the gradient of the function");
  return lift_symmetrized(P, module_action(f, a)) - module_action(f, lift_symmetrized(P, a));
}

Defect commutator_defect(const Derivation& P, const BaseFunction& f, const AlgebraElement& a) {
  if (!f.gradients) throw MissingDataError("commutator needs the gradient of the function");
  if (!a.has_jets()) throw MissingDataError("commutator needs jets on the element");
  AlgebraElement first = lift_symmetrized(P, module_action(f, a));
  AlgebraElement second = module_action(f, lift_symmetrized(P, a));
  AlgebraElement expected = module_action(apply(a.groupoid().base(), P, f), a);
  Defect d;
  d.absolute = max_abs_difference(first - second, expected);
  d.scale = std::max({first.max_abs(), second.max_abs(), expected.max_abs()});
  return d;
}

}  // namespace ncspace
