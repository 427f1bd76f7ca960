#include <doctest.h>

#include "ncspace/calculus.hpp"
#include "ncspace/error.hpp"
#include "support/models.hpp"

using namespace ncspace;
using namespace ncspace::testing;

namespace {

Derivation random_field(Rng& rng, const DiffSpace& space) {
  std::vector<std::string> comps;
  for (std::size_t i = 0; i < space.dimension(); ++i)
    comps.push_back(random_polynomial(rng, coordinate_symbols(space.dimension()), 2, 2));
  return Derivation::from_expressions(space, comps);
}

BaseFunction random_function(Rng& rng, const DiffSpace& space) {
  auto syms = coordinate_symbols(space.dimension());
  return BaseFunction::from_expression(space, random_polynomial(rng, syms, 3, 3), random_polynomial(rng, syms, 2, 2));
}

}  // namespace

TEST_CASE("apply differentiates base functions") {
  auto s = make_space(2, {{1, 2}, {0.5, -1}}, {"x1"});
  auto P = Derivation::from_expressions(*s, std::vector<std::string>{"x2", "1"});
  auto f = BaseFunction::from_expression(*s, "x1*x2 + x2^2");
  auto pf = apply(*s, P, f);
  // x2 * x2 + 1 * (x1 + 2 x2)
  for (std::size_t i = 0; i < s->size(); ++i) {
    const auto& x = s->point(i).coords;
    CHECK(pf.values[i] == Complex(x[1] * x[1] + x[0] + 2 * x[1]));
  }
  REQUIRE(pf.gradients);
  // d/dx1 = 1, d/dx2 = 2 x2 + 2
  CHECK((*pf.gradients)[0][0] == Complex(1.0));
  CHECK((*pf.gradients)[0][1] == Complex(6.0));

  BaseFunction bare{{1.0, 2.0}, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(apply(*s, P, bare), MissingDataError);
}

TEST_CASE("horizontal and vertical lifts") {
  auto s = make_space(1, {{1.0}, {2.0}}, {});
  auto g = build_groupoid(s, Partition::total(*s));
  auto a = from_expression(g, "x1^2*y1");
  auto P = Derivation::coordinate(*s, 0);
  auto hor = lift_horizontal(P, a);
  auto ver = lift_vertical(P, a);
  for (const Arrow& arrow : g->arrows()) {
    double x = s->point(s->index_of(arrow.src)).coords[0];
    double y = s->point(s->index_of(arrow.dst)).coords[0];
    CHECK(hor.value(arrow) == Complex(2 * x * y));
    CHECK(ver.value(arrow) == Complex(x * x));
  }
  CHECK(hor.has_jets());

  Rng rng(1);
  auto bare = random_element(rng, g, false);
  CHECK_THROWS_AS(lift_horizontal(P, bare), MissingDataError);
}

TEST_CASE("Leibniz rule on random data") {
  Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    auto g = random_groupoid(rng, 7, 4);
    auto P = random_field(rng, g->base());
    auto a = random_expression_element(rng, g);
    auto b = random_expression_element(rng, g);
    Defect d = leibniz_defect(P, a, b);
    CHECK(d.relative() <= 1e-12);

    auto ra = random_element(rng, g);
    auto rb = random_element(rng, g);
    CHECK(leibniz_defect(P, ra, rb).relative() <= 1e-12);
  }
}

TEST_CASE("commutator with module action") {
  Rng rng(47);
  for (int t = 0; t < 40; ++t) {
    auto g = random_groupoid(rng, 7, 4);
    auto P = random_field(rng, g->base());
    auto f = random_function(rng, g->base());
    auto a = random_expression_element(rng, g);
    CHECK(commutator_defect(P, f, a).relative() <= 1e-12);
  }
}

TEST_CASE("Heisenberg relation holds elementwise") {
  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    auto g = random_groupoid(rng, 7, 4);
    for (std::size_t i = 0; i < g->dimension(); ++i) {
      auto P = Derivation::coordinate(g->base(), i);
      auto f = BaseFunction::from_expression(g->base(), "x" + std::to_string(i + 1));
      auto a = random_expression_element(rng, g);
      auto c = commutator(P, f, a);
      for (const Arrow& arrow : g->arrows()) CHECK(std::abs(c.value(arrow) - a.value(arrow)) <= 1e-14);
    }
  }
}

TEST_CASE("zero field lifts to zero") {
  Rng rng(59);
  auto g = random_groupoid(rng, 6, 3);
  auto a = random_element(rng, g);
  CHECK(lift_symmetrized(Derivation::zero(g->base()), a).max_abs() == 0.0);
}
