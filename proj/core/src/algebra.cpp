#include "ncspace/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "ncspace/csv.hpp"
#include "ncspace/error.hpp"

namespace ncspace {

namespace {

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;

ConstMatMap view(const std::vector<Complex>& v, std::size_t offset, std::size_t m) {
  const auto mi = static_cast<Eigen::Index>(m);
  return ConstMatMap(v.data() + offset, mi, mi);
}

MatMap view(std::vector<Complex>& v, std::size_t offset, std::size_t m) {
  const auto mi = static_cast<Eigen::Index>(m);
  return MatMap(v.data() + offset, mi, mi);
}

Eigen::VectorXd orbit_weights(const Groupoid& g, std::size_t b) {
  const auto& orbit = g.orbit(b);
  Eigen::VectorXd w(static_cast<Eigen::Index>(orbit.size()));
  for (std::size_t k = 0; k < orbit.size(); ++k) w(static_cast<Eigen::Index>(k)) = g.base().point(orbit[k]).weight;
  return w;
}

// Variable vector (coords of x, coords of y) for expressions over x1..xn, y1..yn.
std::vector<double> pair_coords(const DiffSpace& s, std::size_t xi, std::size_t yi) {
  std::vector<double> v = s.point(xi).coords;
  const auto& y = s.point(yi).coords;
  v.insert(v.end(), y.begin(), y.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(GroupoidPtr groupoid, bool with_jets)
    : groupoid_(std::move(groupoid)), has_jets_(with_jets) {
  if (!groupoid_) throw ValidationError("algebra element needs a groupoid");
  const std::size_t n = groupoid_->dimension();
  blocks_.resize(groupoid_->orbit_count());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const std::size_t m = groupoid_->orbit_size(b);
    blocks_[b].value.assign(m * m, Complex{});
    if (has_jets_) {
      blocks_[b].d_src.assign(n * m * m, Complex{});
      blocks_[b].d_dst.assign(n * m * m, Complex{});
    }
  }
}

void AlgebraElement::drop_jets() {
  has_jets_ = false;
  symbolic_.reset();
  for (auto& b : blocks_) {
    b.d_src.clear();
    b.d_dst.clear();
  }
}

Complex AlgebraElement::value(const Arrow& a) const {
  ArrowSlot s = groupoid_->slot(a);
  return blocks_[s.block].value[s.row * groupoid_->orbit_size(s.block) + s.col];
}

Jet AlgebraElement::jet(const Arrow& a) const {
  if (!has_jets_) throw MissingDataError("element carries no jets");
  ArrowSlot s = groupoid_->slot(a);
  const std::size_t m = groupoid_->orbit_size(s.block);
  const std::size_t n = dimension();
  const Block& blk = blocks_[s.block];
  Jet j;
  j.value = blk.value[s.row * m + s.col];
  for (std::size_t i = 0; i < n; ++i) {
    j.d_src.push_back(blk.d_src[i * m * m + s.row * m + s.col]);
    j.d_dst.push_back(blk.d_dst[i * m * m + s.row * m + s.col]);
  }
  return j;
}

void AlgebraElement::set_value(const Arrow& a, Complex v) {
  ArrowSlot s = groupoid_->slot(a);
  blocks_[s.block].value[s.row * groupoid_->orbit_size(s.block) + s.col] = v;
  symbolic_.reset();
}

void AlgebraElement::set_jet(const Arrow& a, const Jet& j) {
  if (!has_jets_) throw MissingDataError("element carries no jets");
  const std::size_t n = dimension();
  if (j.d_src.size() != n || j.d_dst.size() != n) throw MismatchError("jet length does not match the dimension");
  ArrowSlot s = groupoid_->slot(a);
  const std::size_t m = groupoid_->orbit_size(s.block);
  Block& blk = blocks_[s.block];
  blk.value[s.row * m + s.col] = j.value;
  for (std::size_t i = 0; i < n; ++i) {
    blk.d_src[i * m * m + s.row * m + s.col] = j.d_src[i];
    blk.d_dst[i * m * m + s.row * m + s.col] = j.d_dst[i];
  }
  symbolic_.reset();
}

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_)
    for (const Complex& v : b.value) m = std::max(m, std::abs(v));
  return m;
}

void AlgebraElement::require_same(const AlgebraElement& other) const {
  if (!groupoid_->same_as(*other.groupoid_)) throw MismatchError("elements live on different groupoids");
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same(other);
  if (!other.has_jets_ && has_jets_) drop_jets();
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t k = 0; k < blocks_[b].value.size(); ++k) blocks_[b].value[k] += other.blocks_[b].value[k];
    if (has_jets_) {
      for (std::size_t k = 0; k < blocks_[b].d_src.size(); ++k) {
        blocks_[b].d_src[k] += other.blocks_[b].d_src[k];
        blocks_[b].d_dst[k] += other.blocks_[b].d_dst[k];
      }
    }
  }
  if (symbolic_ && other.symbolic_) symbolic_ = *symbolic_ + *other.symbolic_;
  else symbolic_.reset();
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  AlgebraElement neg = other;
  neg *= Complex(-1.0);
  return *this += neg;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) {
    for (auto& v : b.value) v *= s;
    for (auto& v : b.d_src) v *= s;
    for (auto& v : b.d_dst) v *= s;
  }
  if (symbolic_) symbolic_ = ComplexExpr{Expr::constant(s.real()), Expr::constant(s.imag())} * *symbolic_;
  return *this;
}

double max_abs_difference(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.groupoid().same_as(b.groupoid())) throw MismatchError("elements live on different groupoids");
  double m = 0.0;
  for (std::size_t k = 0; k < a.groupoid().orbit_count(); ++k) {
    const auto& va = a.block(k).value;
    const auto& vb = b.block(k).value;
    for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Tabulation

AlgebraElement from_expression(GroupoidPtr g, std::string_view re, std::string_view im) {
  SymbolTable symbols = SymbolTable::coordinate_pairs(g->dimension());
  return from_expression(g, ComplexExpr{Expr::parse(re, symbols), Expr::parse(im, symbols)});
}

AlgebraElement from_expression(GroupoidPtr g, const ComplexExpr& expr) {
  const std::size_t n = g->dimension();
  if (expr.re.max_slot() >= static_cast<int>(2 * n) || expr.im.max_slot() >= static_cast<int>(2 * n))
    throw ValidationError("expression uses a symbol beyond the space dimension");
  std::vector<ComplexExpr> d_src, d_dst;
  for (std::size_t i = 0; i < n; ++i) {
    d_src.push_back(expr.derivative(static_cast<int>(i)));
    d_dst.push_back(expr.derivative(static_cast<int>(n + i)));
  }
  AlgebraElement a(g, true);
  const DiffSpace& s = g->base();
  for (std::size_t b = 0; b < g->orbit_count(); ++b) {
    const auto& orbit = g->orbit(b);
    const std::size_t m = orbit.size();
    auto& blk = a.block(b);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        std::vector<double> vars = pair_coords(s, orbit[r], orbit[c]);
        blk.value[r * m + c] = expr.eval(vars);
        for (std::size_t i = 0; i < n; ++i) {
          blk.d_src[i * m * m + r * m + c] = d_src[i].eval(vars);
          blk.d_dst[i * m * m + r * m + c] = d_dst[i].eval(vars);
        }
      }
    }
  }
  a.set_symbolic(expr);
  return a;
}

// ---------------------------------------------------------------------------
// Algebra operations

AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.groupoid().same_as(b.groupoid())) throw MismatchError("convolve: elements live on different groupoids");
  const Groupoid& g = a.groupoid();
  const std::size_t n = g.dimension();
  const bool jets = a.has_jets() && b.has_jets();
  AlgebraElement c(a.groupoid_ptr(), jets);
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    const std::size_t m = g.orbit_size(k);
    const std::size_t mm = m * m;
    Eigen::VectorXd w = orbit_weights(g, k);
    const auto& ab = a.block(k);
    const auto& bb = b.block(k);
    auto& cb = c.block(k);
    RowMat aw = view(ab.value, 0, m) * w.asDiagonal();
    view(cb.value, 0, m).noalias() = aw * view(bb.value, 0, m);
    if (!jets) continue;
    for (std::size_t i = 0; i < n; ++i) {
      view(cb.d_src, i * mm, m).noalias() = (view(ab.d_src, i * mm, m) * w.asDiagonal()) * view(bb.value, 0, m);
      view(cb.d_dst, i * mm, m).noalias() = aw * view(bb.d_dst, i * mm, m);
    }
  }
  return c;
}

AlgebraElement involution(const AlgebraElement& a) {
  const Groupoid& g = a.groupoid();
  const std::size_t n = g.dimension();
  AlgebraElement r(a.groupoid_ptr(), a.has_jets());
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    const std::size_t m = g.orbit_size(k);
    const std::size_t mm = m * m;
    const auto& ab = a.block(k);
    auto& rb = r.block(k);
    view(rb.value, 0, m) = view(ab.value, 0, m).adjoint();
    if (!a.has_jets()) continue;
    for (std::size_t i = 0; i < n; ++i) {
      view(rb.d_src, i * mm, m) = view(ab.d_dst, i * mm, m).adjoint();
      view(rb.d_dst, i * mm, m) = view(ab.d_src, i * mm, m).adjoint();
    }
  }
  if (a.symbolic()) {
    std::vector<int> swap(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      swap[i] = static_cast<int>(n + i);
      swap[n + i] = static_cast<int>(i);
    }
    r.set_symbolic(a.symbolic()->remap(swap).conj());
  }
  return r;
}

AlgebraElement unit(GroupoidPtr g) {
  AlgebraElement e(g, true);
  for (std::size_t k = 0; k < g->orbit_count(); ++k) {
    const auto& orbit = g->orbit(k);
    const std::size_t m = orbit.size();
    for (std::size_t r = 0; r < m; ++r) e.block(k).value[r * m + r] = 1.0 / g->base().point(orbit[r]).weight;
  }
  return e;
}

AlgebraElement arrow_indicator(GroupoidPtr g, const Arrow& a) {
  AlgebraElement e(g, true);
  e.set_value(a, 1.0);
  return e;
}

std::vector<AlgebraElement> spanning_set(GroupoidPtr g) {
  std::vector<AlgebraElement> out;
  for (const Arrow& a : g->arrows()) out.push_back(arrow_indicator(g, a));
  return out;
}

// ---------------------------------------------------------------------------
// Base functions and the Z-action

BaseFunction BaseFunction::from_expression(const DiffSpace& space, std::string_view re, std::string_view im) {
  SymbolTable symbols = SymbolTable::coordinates(space.dimension());
  return from_expression(space, ComplexExpr{Expr::parse(re, symbols), Expr::parse(im, symbols)});
}

BaseFunction BaseFunction::from_expression(const DiffSpace& space, const ComplexExpr& expr) {
  const std::size_t n = space.dimension();
  if (expr.re.max_slot() >= static_cast<int>(n) || expr.im.max_slot() >= static_cast<int>(n))
    throw ValidationError("base function uses a symbol beyond the space dimension");
  std::vector<ComplexExpr> grad;
  for (std::size_t i = 0; i < n; ++i) grad.push_back(expr.derivative(static_cast<int>(i)));
  BaseFunction f;
  f.gradients.emplace();
  for (const Point& p : space.points()) {
    f.values.push_back(expr.eval(p.coords));
    std::vector<Complex> gp;
    for (const auto& d : grad) gp.push_back(d.eval(p.coords));
    f.gradients->push_back(std::move(gp));
  }
  f.symbolic = expr;
  return f;
}

BaseFunction BaseFunction::constant(const DiffSpace& space, Complex c) {
  return from_expression(space, ComplexExpr{Expr::constant(c.real()), Expr::constant(c.imag())});
}

BaseFunction multiply(const BaseFunction& f, const BaseFunction& g) {
  if (f.values.size() != g.values.size()) throw MismatchError("base functions have different domains");
  BaseFunction h;
  for (std::size_t i = 0; i < f.values.size(); ++i) h.values.push_back(f.values[i] * g.values[i]);
  if (f.gradients && g.gradients) {
    h.gradients.emplace();
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      std::vector<Complex> gp((*f.gradients)[i].size());
      for (std::size_t j = 0; j < gp.size(); ++j)
        gp[j] = (*f.gradients)[i][j] * g.values[i] + f.values[i] * (*g.gradients)[i][j];
      h.gradients->push_back(std::move(gp));
    }
  }
  if (f.symbolic && g.symbolic) h.symbolic = *f.symbolic * *g.symbolic;
  return h;
}

AlgebraElement module_action(const BaseFunction& f, const AlgebraElement& a) {
  const Groupoid& g = a.groupoid();
  const std::size_t n = g.dimension();
  if (f.values.size() != g.base().size()) throw MismatchError("base function is not defined on every base point");
  const bool jets = a.has_jets() && f.gradients.has_value();
  AlgebraElement r(a.groupoid_ptr(), jets);
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    const auto& orbit = g.orbit(k);
    const std::size_t m = orbit.size();
    const std::size_t mm = m * m;
    const auto& ab = a.block(k);
    auto& rb = r.block(k);
    for (std::size_t row = 0; row < m; ++row) {
      const Complex fx = f.values[orbit[row]];
      for (std::size_t c = 0; c < m; ++c) {
        const std::size_t at = row * m + c;
        rb.value[at] = fx * ab.value[at];
        if (!jets) continue;
        const auto& grad = (*f.gradients)[orbit[row]];
        for (std::size_t i = 0; i < n; ++i) {
          rb.d_src[i * mm + at] = grad[i] * ab.value[at] + fx * ab.d_src[i * mm + at];
          rb.d_dst[i * mm + at] = fx * ab.d_dst[i * mm + at];
        }
      }
    }
  }
  if (jets && f.symbolic && a.symbolic()) r.set_symbolic(*f.symbolic * *a.symbolic());
  return r;
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(std::ostream& os, const AlgebraElement& a) {
  const std::size_t n = a.dimension();
  os << "src,dst,re,im";
  if (a.has_jets()) {
    for (std::size_t i = 1; i <= n; ++i) os << ",dsrc" << i << "_re,dsrc" << i << "_im";
    for (std::size_t i = 1; i <= n; ++i) os << ",ddst" << i << "_re,ddst" << i << "_im";
  }
  os << '\n';
  for (const Arrow& arrow : a.groupoid().arrows()) {
    os << arrow.src << ',' << arrow.dst;
    if (a.has_jets()) {
      Jet j = a.jet(arrow);
      os << ',' << csv::number(j.value.real()) << ',' << csv::number(j.value.imag());
      for (const auto& d : j.d_src) os << ',' << csv::number(d.real()) << ',' << csv::number(d.imag());
      for (const auto& d : j.d_dst) os << ',' << csv::number(d.real()) << ',' << csv::number(d.imag());
    } else {
      Complex v = a.value(arrow);
      os << ',' << csv::number(v.real()) << ',' << csv::number(v.imag());
    }
    os << '\n';
  }
}

namespace {

double parse_double(const std::string& cell, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw ParseError("element csv line " + std::to_string(line) + ": malformed number '" + cell + "'");
  return v;
}

PointId parse_id(const std::string& cell, std::size_t line) {
  PointId v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size())
    throw ParseError("element csv line " + std::to_string(line) + ": malformed id '" + cell + "'");
  return v;
}

}  // namespace

AlgebraElement read_csv(std::istream& is, GroupoidPtr g) {
  const std::size_t n = g->dimension();
  std::string line;
  if (!std::getline(is, line)) throw ParseError("element csv is empty");
  const auto header = csv::split(line);
  if (header.size() < 4 || header[0] != "src" || header[1] != "dst" || header[2] != "re" || header[3] != "im")
    throw ParseError("element csv header must start with src,dst,re,im");
  const bool jets = header.size() > 4;
  if (jets && header.size() != 4 + 4 * n)
    throw ParseError("element csv has " + std::to_string(header.size()) + " columns, expected 4 or " +
                     std::to_string(4 + 4 * n));
  AlgebraElement a(g, jets);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = csv::split(line);
    if (cells.size() != header.size())
      throw ParseError("element csv line " + std::to_string(lineno) + ": wrong number of columns");
    Arrow arrow{parse_id(cells[0], lineno), parse_id(cells[1], lineno)};
    if (!g->contains(arrow))
      throw ValidationError("element csv line " + std::to_string(lineno) + ": not an arrow of the groupoid");
    Complex v{parse_double(cells[2], lineno), parse_double(cells[3], lineno)};
    if (!jets) {
      a.set_value(arrow, v);
      continue;
    }
    Jet j{v, {}, {}};
    std::size_t col = 4;
    for (std::size_t i = 0; i < n; ++i, col += 2)
      j.d_src.emplace_back(parse_double(cells[col], lineno), parse_double(cells[col + 1], lineno));
    for (std::size_t i = 0; i < n; ++i, col += 2)
      j.d_dst.emplace_back(parse_double(cells[col], lineno), parse_double(cells[col + 1], lineno));
    a.set_jet(arrow, j);
  }
  return a;
}

}  // namespace ncspace
