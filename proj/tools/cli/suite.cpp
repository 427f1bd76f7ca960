#include "cli/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncspace/calculus.hpp"
#include "ncspace/csv.hpp"
#include "ncspace/deform.hpp"
#include "ncspace/vonneumann.hpp"

namespace ncspace::cli {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<std::string> symbols(std::size_t n, bool pairs) {
  std::vector<std::string> s;
  for (std::size_t i = 1; i <= n; ++i) s.push_back("x" + std::to_string(i));
  if (pairs)
    for (std::size_t i = 1; i <= n; ++i) s.push_back("y" + std::to_string(i));
  return s;
}

double relative(double absolute, double scale) { return absolute / std::max(1.0, scale); }

}  // namespace

Partition make_partition(const DiffSpace& space, PartitionKind kind) {
  switch (kind) {
    case PartitionKind::Total: return Partition::total(space);
    case PartitionKind::Discrete: return Partition::discrete(space);
    case PartitionKind::Hausdorff: break;
  }
  return hausdorff_relation(space);
}

AlgebraElement random_element(Rng& rng, const GroupoidPtr& g, bool jets) {
  AlgebraElement a(g, jets);
  for (std::size_t b = 0; b < g->orbit_count(); ++b) {
    auto& blk = a.block(b);
    for (auto* part : {&blk.value, &blk.d_src, &blk.d_dst})
      for (auto& v : *part) v = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  }
  return a;
}

std::string random_polynomial(Rng& rng, const std::vector<std::string>& syms, int degree, int terms) {
  std::string out;
  for (int t = 0; t < terms; ++t) {
    int c = uniform_int(rng, -3, 3);
    if (c == 0) c = 1;
    std::string term = std::to_string(c);
    const int d = syms.empty() ? 0 : uniform_int(rng, 0, degree);
    for (int k = 0; k < d; ++k) term += "*" + syms[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(syms.size()) - 1))];
    out += (t == 0 ? "" : " + ") + term;
  }
  return out;
}

void check_space(Report& r, const DiffSpace& space, const std::string& prefix) {
  const Partition rho = hausdorff_relation(space);
  r.info(prefix + "space.points", static_cast<double>(space.size()));
  r.info(prefix + "space.classes", static_cast<double>(rho.block_count()));

  const ConsistencyReport cons = consistent_family(space, rho);
  for (const auto& e : cons.entries)
    r.require(prefix + "space.consistent[" + e.name + "]", e.consistent, e.consistent ? 0.0 : 1.0, 0.0,
              e.witness_block ? "witness block " + std::to_string(*e.witness_block) : "");

  // Superpositions of the generators never split or merge classes.
  Rng rng(0x5eed);
  std::vector<std::string> wrapped;
  for (const auto& g : space.generators()) wrapped.push_back("(" + g.source + ")");
  std::vector<GeneratorFunction> extended = space.generators();
  const SymbolTable table = SymbolTable::coordinates(space.dimension());
  for (int j = 0; j < 3; ++j) {
    const std::string text = random_polynomial(rng, wrapped, 3, 3);
    extended.push_back({"omega" + std::to_string(j), text, Expr::parse(text, table)});
  }
  const bool stable = hausdorff_relation(space.with_generators(extended, false)) == rho;
  r.require(prefix + "space.superposition_invariant", stable, stable ? 0.0 : 1.0, 0.0);

  const Quotient q = quotient(space, rho);
  double worst = 0.0;
  for (std::size_t g = 0; g < q.kept.size(); ++g) {
    const auto back = pullback(q, g);
    for (std::size_t i = 0; i < space.size(); ++i)
      worst = std::max(worst, std::abs(back[i] - space.evaluate(q.kept[g], i)));
  }
  r.check(prefix + "space.quotient_pullback", worst, 0.0);
  r.check(prefix + "space.quotient_measure", std::abs(q.space.total_measure() - space.total_measure()),
          1e-12 * space.total_measure());
}

void check_groupoid(Report& r, const Groupoid& g, const std::string& prefix) {
  std::size_t expected = 0, work = 0;
  for (std::size_t b = 0; b < g.orbit_count(); ++b) {
    const std::size_t m = g.orbit_size(b);
    expected += m * m;
    work += m * m * m * m;
  }
  r.info(prefix + "groupoid.arrows", static_cast<double>(g.arrow_count()));
  r.info(prefix + "groupoid.orbits", static_cast<double>(g.orbit_count()));
  r.check(prefix + "groupoid.arrow_count", std::abs(static_cast<double>(g.arrow_count()) - static_cast<double>(expected)),
          0.0);

  std::size_t unit_inverse = 0;
  for (const Arrow& a : g.arrows()) {
    unit_inverse += compose(g, {a.src, a.src}, a) != a;
    unit_inverse += compose(g, a, {a.dst, a.dst}) != a;
    unit_inverse += compose(g, a, inverse(a)) != Arrow{a.src, a.src};
  }
  r.check(prefix + "groupoid.units_inverses", static_cast<double>(unit_inverse), 0.0, "violations");

  if (work > 2'000'000) {
    r.skip(prefix + "groupoid.associativity", "more than 2e6 composable triples");
    return;
  }
  std::size_t assoc = 0;
  for (std::size_t b = 0; b < g.orbit_count(); ++b) {
    const auto& orbit = g.orbit(b);
    for (std::size_t x : orbit)
      for (std::size_t y : orbit)
        for (std::size_t z : orbit)
          for (std::size_t w : orbit) {
            const Arrow a{g.base().point(x).id, g.base().point(y).id};
            const Arrow c{g.base().point(y).id, g.base().point(z).id};
            const Arrow d{g.base().point(z).id, g.base().point(w).id};
            assoc += compose(g, compose(g, a, c), d) != compose(g, a, compose(g, c, d));
          }
  }
  r.check(prefix + "groupoid.associativity", static_cast<double>(assoc), 0.0, "violations");
}

void check_algebra_laws(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix) {
  double assoc = 0.0, anti = 0.0, invol = 0.0, unit_err = 0.0, distrib = 0.0;
  const AlgebraElement e = unit(g);
  for (int t = 0; t < s.samples; ++t) {
    const auto a = random_element(rng, g, false), b = random_element(rng, g, false), c = random_element(rng, g, false);
    const auto l = convolve(convolve(a, b), c);
    assoc = std::max(assoc, relative(max_abs_difference(l, convolve(a, convolve(b, c))), l.max_abs()));
    const auto st = involution(convolve(a, b));
    anti = std::max(anti, relative(max_abs_difference(st, convolve(involution(b), involution(a))), st.max_abs()));
    invol = std::max(invol, max_abs_difference(involution(involution(a)), a));
    unit_err = std::max(unit_err, relative(std::max(max_abs_difference(convolve(e, a), a),
                                                    max_abs_difference(convolve(a, e), a)),
                                           a.max_abs()));
    const auto sum = convolve(a, b + c);
    distrib = std::max(distrib, relative(max_abs_difference(sum, convolve(a, b) + convolve(a, c)), sum.max_abs()));
  }
  r.check(prefix + "algebra.associativity", assoc, s.tol, "relative");
  r.check(prefix + "algebra.involution_antihomomorphism", anti, s.tol, "relative");
  r.check(prefix + "algebra.involution_involutive", invol, 0.0);
  r.check(prefix + "algebra.unit", unit_err, s.tol, "relative");
  r.check(prefix + "algebra.distributivity", distrib, s.tol, "relative");
}

void check_representation(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix) {
  double hom = 0.0, star = 0.0;
  for (int t = 0; t < s.samples; ++t) {
    const auto a = random_element(rng, g, false), b = random_element(rng, g, false);
    hom = std::max(hom, homomorphism_defect(a, b).relative());
    star = std::max(star, star_defect(a).relative());
  }
  r.check(prefix + "rep.homomorphism", hom, s.tol, "relative");
  r.check(prefix + "rep.star", star, s.tol, "relative");

  const RandomOperator id = represent(unit(g));
  double unit_err = 0.0;
  for (std::size_t b = 0; b < g->orbit_count(); ++b) {
    const auto m = static_cast<Eigen::Index>(g->orbit_size(b));
    unit_err = std::max(unit_err, (id.orbit_matrix(b) - Matrix::Identity(m, m)).cwiseAbs().maxCoeff());
  }
  r.check(prefix + "rep.unit_identity", unit_err, s.tol);

  const RandomOperatorReport rep = random_operator_report(represent(random_element(rng, g, false)));
  r.require(prefix + "rep.random_operator", rep.measurable && rep.essentially_bounded, rep.ess_sup_norm,
            std::numeric_limits<double>::infinity(), "ess sup norm of a sample");
}

void check_calculus(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix) {
  const DiffSpace& space = g->base();
  const std::size_t n = space.dimension();
  if (n == 0) {
    r.skip(prefix + "calculus", "zero-dimensional base");
    return;
  }
  const auto xs = symbols(n, false), xys = symbols(n, true);
  double leib = 0.0, comm = 0.0, heis = 0.0;
  for (int t = 0; t < s.samples; ++t) {
    std::vector<std::string> comps;
    for (std::size_t i = 0; i < n; ++i) comps.push_back(random_polynomial(rng, xs, 2, 2));
    const auto P = Derivation::from_expressions(space, comps);
    const auto f = BaseFunction::from_expression(space, random_polynomial(rng, xs, 3, 3), random_polynomial(rng, xs, 2, 2));
    const auto a = from_expression(g, random_polynomial(rng, xys, 2, 4), random_polynomial(rng, xys, 2, 2));
    const auto b = from_expression(g, random_polynomial(rng, xys, 2, 4), random_polynomial(rng, xys, 2, 2));
    leib = std::max(leib, leibniz_defect(P, a, b).relative());
    comm = std::max(comm, commutator_defect(P, f, a).relative());
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = commutator(Derivation::coordinate(space, i), BaseFunction::from_expression(space, xs[i]), a);
      heis = std::max(heis, relative(max_abs_difference(c, a), a.max_abs()));
    }
  }
  r.check(prefix + "calculus.leibniz", leib, s.tol, "relative");
  r.check(prefix + "calculus.commutator", comm, s.tol, "relative");
  r.check(prefix + "calculus.heisenberg", heis, s.tol, "relative");
}

std::optional<BicommutantReport> check_bicommutant(Report& r, const GroupoidPtr& g, const Settings& s,
                                                   const std::string& prefix) {
  const std::size_t d = direct_sum_dimension(*g);
  if (d > kMaxCommutantDimension) {
    r.skip(prefix + "vn.bicommutant", "direct-sum dimension " + std::to_string(d) + " exceeds " +
                                          std::to_string(kMaxCommutantDimension));
    return std::nullopt;
  }
  std::vector<Matrix> gens;
  for (const auto& e : spanning_set(g)) gens.push_back(to_direct_sum(represent(e)));
  BicommutantReport rep = double_commutant(gens, d);
  double commute = 0.0, scale = 0.0;
  for (const Matrix& y : gens) scale = std::max(scale, y.cwiseAbs().maxCoeff());
  for (const Matrix& x : rep.commutant.elements)
    for (const Matrix& y : gens) commute = std::max(commute, (x * y - y * x).cwiseAbs().maxCoeff());
  commute = relative(commute, scale);
  r.info(prefix + "vn.commutant_dimension", static_cast<double>(rep.commutant.size()));
  r.info(prefix + "vn.bicommutant_dimension", static_cast<double>(rep.bicommutant.size()));
  r.check(prefix + "vn.commutant_commutes", commute, s.tol, "relative");
  r.require(prefix + "vn.bicommutant_equals_span", rep.equals_span, rep.containment_residual, kRankThreshold,
            "span dimension " + std::to_string(rep.span_dimension));
  return rep;
}

void check_states(Report& r, const GroupoidPtr& g, const Settings& s, Rng& rng, const std::string& prefix) {
  const StateReport rep = check_density(DensityField::uniform(g), s.norm_tol);
  r.require(prefix + "state.hermitian", rep.hermitian, 0.0, 0.0);
  r.require(prefix + "state.positive", rep.positive, std::max(0.0, -rep.min_eigenvalue), 0.0);
  r.check(prefix + "state.normalized", std::abs(rep.normalization - 1.0), s.norm_tol);
  r.require(prefix + "state.trace_class_integrable_normal", rep.trace_class && rep.integrable && rep.normal, 0.0, 0.0);
  r.info(prefix + "state.faithful", rep.faithful ? 1.0 : 0.0);
  if (!rep.valid()) return;

  const State phi = make_state(DensityField::uniform(g), s.norm_tol);
  r.check(prefix + "state.expect_identity", std::abs(expect(phi, RandomOperator::identity(g)) - Complex(1.0)), s.tol);
  double lowest = std::numeric_limits<double>::infinity();
  for (int t = 0; t < s.samples; ++t) {
    const RandomOperator R = represent(random_element(rng, g, false));
    lowest = std::min(lowest, expect(phi, adjoint(R) * R).real());
  }
  r.check(prefix + "state.positivity", std::max(0.0, -lowest), s.tol, "min phi(R^dag R)");
}

void check_deformation(Report& r, const DiffSpace& space, const Settings& s, Rng& rng, const std::string& prefix) {
  const DeformationChain chain = deformation_chain(space);
  const ChainReport& rep = chain.report();
  r.require(prefix + "deform.arrows_decreasing", rep.arrows_decreasing, 0.0, 0.0);
  r.require(prefix + "deform.partitions_refine", rep.partitions_refine, 0.0, 0.0);
  r.require(prefix + "deform.bottom_total", rep.bottom_total, 0.0, 0.0);
  r.require(prefix + "deform.classes_are_projection_fibers", rep.classes_are_projection_fibers, 0.0, 0.0);
  if (rep.top_diagonal)
    r.require(prefix + "deform.top_diagonal", true, 0.0, 0.0);
  else
    r.skip(prefix + "deform.top_diagonal", "points with equal coordinates");

  const auto& top = chain.level(chain.top()).groupoid;
  double worst = 0.0;
  bool unit_weights = true;
  for (int t = 0; t < s.samples; ++t) {
    const auto a = random_element(rng, top, false), b = random_element(rng, top, false);
    const PointwiseReport p = step_n_pointwise_check(chain, a, b);
    unit_weights = p.unit_weights;
    worst = std::max(worst, relative(p.unit_weights ? p.unweighted_defect : p.weighted_defect, p.scale));
  }
  r.check(prefix + "deform.step_n_pointwise", worst, s.tol,
          unit_weights ? "relative, unit weights" : "relative, weighted by w_x");
}

Table classes_table(const DiffSpace& space, const Partition& p) {
  Table t{"classes", {"point_id", "class"}, {}};
  for (const auto& pt : space.points()) t.rows.push_back({std::to_string(pt.id), std::to_string(p.block_of(pt.id))});
  return t;
}

Table quotient_table(const Quotient& q) {
  Table t{"quotient", {"id", "weight"}, {}};
  for (std::size_t g = 0; g < q.kept.size(); ++g) t.header.push_back(q.space.generators()[g].name);
  for (const auto& p : q.space.points()) {
    std::vector<std::string> row{std::to_string(p.id), csv::number(p.weight)};
    for (double c : p.coords) row.push_back(csv::number(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table arrows_table(const Groupoid& g) {
  Table t{"arrows", {"src", "dst", "orbit"}, {}};
  for (const Arrow& a : g.arrows())
    t.rows.push_back({std::to_string(a.src), std::to_string(a.dst), std::to_string(g.slot(a).block)});
  return t;
}

Table orbits_table(const Groupoid& g) {
  Table t{"orbits", {"orbit", "size", "members"}, {}};
  for (std::size_t b = 0; b < g.orbit_count(); ++b) {
    std::string members;
    for (std::size_t i : g.orbit(b)) members += (members.empty() ? "" : ";") + std::to_string(g.base().point(i).id);
    t.rows.push_back({std::to_string(b), std::to_string(g.orbit_size(b)), members});
  }
  return t;
}

Table deform_table(const DiffSpace& space, const Settings& s, Rng& rng) {
  const DeformationChain chain = deformation_chain(space);
  Table t{"deform", {"k", "blocks", "block_sizes", "arrows", "homomorphism_defect"}, {}};
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const ChainLevel& level = chain.level(k);
    std::string sizes;
    for (const auto& b : level.partition.blocks()) sizes += (sizes.empty() ? "" : ";") + std::to_string(b.size());
    std::string defect;
    if (k < chain.top()) {
      double worst = 0.0;
      for (int i = 0; i < s.samples; ++i) {
        const auto a = random_element(rng, level.groupoid, false), b = random_element(rng, level.groupoid, false);
        worst = std::max(worst, homomorphism_defect_chain(a, b, chain, k).absolute);
      }
      defect = csv::number(worst);
    }
    t.rows.push_back({std::to_string(k), std::to_string(level.partition.block_count()), sizes,
                      std::to_string(level.groupoid->arrow_count()), defect});
  }
  return t;
}

Table matrices_table(std::string name, const std::vector<Matrix>& ms) {
  Table t{std::move(name), {"element", "row", "col", "re", "im"}, {}};
  for (std::size_t k = 0; k < ms.size(); ++k)
    for (Eigen::Index i = 0; i < ms[k].rows(); ++i)
      for (Eigen::Index j = 0; j < ms[k].cols(); ++j)
        t.rows.push_back({std::to_string(k), std::to_string(i), std::to_string(j), csv::number(ms[k](i, j).real()),
                          csv::number(ms[k](i, j).imag())});
  return t;
}

}  // namespace ncspace::cli
