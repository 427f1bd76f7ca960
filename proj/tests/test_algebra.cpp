#include <doctest.h>

#include <sstream>

#include "ncspace/algebra.hpp"
#include "ncspace/error.hpp"
#include "support/models.hpp"

using namespace ncspace;
using namespace ncspace::testing;

namespace {

// Convolution straight from the definition, arrow by arrow.
AlgebraElement naive_convolve(const AlgebraElement& a, const AlgebraElement& b) {
  const Groupoid& g = a.groupoid();
  AlgebraElement out(a.groupoid_ptr(), false);
  for (const Arrow& xy : g.arrows()) {
    Complex sum{};
    for (const auto& z : g.base().points()) {
      if (!g.contains({xy.src, z.id})) continue;
      sum += a.value({xy.src, z.id}) * b.value({z.id, xy.dst}) * z.weight;
    }
    out.set_value(xy, sum);
  }
  return out;
}

double relative_scale(const AlgebraElement& a) { return std::max(1.0, a.max_abs()); }

}  // namespace

TEST_CASE("convolution on the total two-point space") {
  auto s = line(2);
  auto g = build_groupoid(s, Partition::total(*s));
  auto one = from_expression(g, "1");
  auto c = convolve(one, one);
  for (const Arrow& a : g->arrows()) CHECK(c.value(a) == Complex(2.0));
}

TEST_CASE("unit is the weighted delta") {
  auto s = line(2, {}, {2.0, 2.0});
  auto g = build_groupoid(s, Partition::total(*s));
  auto e = unit(g);
  CHECK(e.value({0, 0}) == Complex(0.5));
  CHECK(e.value({1, 1}) == Complex(0.5));
  CHECK(e.value({0, 1}) == Complex(0.0));

  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    auto rg = random_groupoid(rng, 8, 4);
    auto a = random_element(rng, rg);
    auto u = unit(rg);
    CHECK(max_abs_difference(convolve(u, a), a) <= 1e-14 * relative_scale(a));
    CHECK(max_abs_difference(convolve(a, u), a) <= 1e-14 * relative_scale(a));
  }
}

TEST_CASE("convolve agrees with the definition") {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    auto g = random_groupoid(rng, 9, 5);
    auto a = random_element(rng, g, false);
    auto b = random_element(rng, g, false);
    auto fast = convolve(a, b);
    auto slow = naive_convolve(a, b);
    CHECK(max_abs_difference(fast, slow) <= 1e-14 * relative_scale(slow));
  }
}

TEST_CASE("associativity and involution laws") {
  Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    auto g = random_groupoid(rng, 10, 6);
    auto a = random_element(rng, g);
    auto b = random_element(rng, g);
    auto c = random_element(rng, g);
    auto left = convolve(convolve(a, b), c);
    auto right = convolve(a, convolve(b, c));
    CHECK(max_abs_difference(left, right) <= 1e-12 * relative_scale(left));

    auto star_ab = involution(convolve(a, b));
    auto ba = convolve(involution(b), involution(a));
    CHECK(max_abs_difference(star_ab, ba) <= 1e-12 * relative_scale(ba));
    CHECK(max_abs_difference(involution(involution(a)), a) == 0.0);
  }
}

TEST_CASE("involution swaps and conjugates jets") {
  auto s = line(2);
  auto g = build_groupoid(s, Partition::total(*s));
  auto a = from_expression(g, "x1 + 2*y1", "x1*y1");
  auto as = involution(a);
  Jet j = a.jet({0, 1});
  Jet js = as.jet({1, 0});
  CHECK(js.value == std::conj(j.value));
  CHECK(js.d_src[0] == std::conj(j.d_dst[0]));
  CHECK(js.d_dst[0] == std::conj(j.d_src[0]));
  REQUIRE(as.symbolic());
  auto again = from_expression(g, *as.symbolic());
  CHECK(max_abs_difference(again, as) == 0.0);
}

TEST_CASE("convolution collapses to the pointwise product on the diagonal") {
  Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    auto space = random_space(rng, static_cast<std::size_t>(uniform_int(rng, 1, 8)), 2, true);
    auto g = build_groupoid(space, Partition::discrete(*space));
    auto a = random_element(rng, g);
    auto b = random_element(rng, g);
    auto c = convolve(a, b);
    for (const Arrow& x : g->arrows()) CHECK(c.value(x) == a.value(x) * b.value(x));
  }
}

TEST_CASE("jets from expressions match finite differences") {
  Rng rng(31);
  const double h = 1e-4;
  for (int t = 0; t < 20; ++t) {
    auto g = random_groupoid(rng, 6, 3);
    const std::size_t n = g->dimension();
    auto syms = pair_symbols(n);
    std::string re = random_polynomial(rng, syms, 3, 4) + " + sin(x1*y1)";
    std::string im = random_polynomial(rng, syms, 2, 2);
    auto a = from_expression(g, re, im);
    auto table = SymbolTable::coordinate_pairs(n);
    Expr ere = Expr::parse(re, table);
    Expr eim = Expr::parse(im, table);
    for (const Arrow& arrow : g->arrows()) {
      std::vector<double> vars(2 * n);
      const auto& xs = g->base().point(g->base().index_of(arrow.src)).coords;
      const auto& ys = g->base().point(g->base().index_of(arrow.dst)).coords;
      std::copy(xs.begin(), xs.end(), vars.begin());
      std::copy(ys.begin(), ys.end(), vars.begin() + static_cast<std::ptrdiff_t>(n));
      Jet j = a.jet(arrow);
      for (std::size_t s = 0; s < 2 * n; ++s) {
        auto up = vars, down = vars;
        up[s] += h;
        down[s] -= h;
        Complex fd{(ere.eval(up) - ere.eval(down)) / (2 * h), (eim.eval(up) - eim.eval(down)) / (2 * h)};
        Complex got = s < n ? j.d_src[s] : j.d_dst[s - n];
        CHECK(std::abs(got - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("module action uses the product rule") {
  auto s = make_space(1, {{0.5}, {1.5}}, {"x1"});
  auto g = build_groupoid(s, Partition::total(*s));
  auto a = from_expression(g, "x1*y1");
  auto f = BaseFunction::from_expression(*s, "x1^2");
  auto fa = module_action(f, a);
  auto direct = from_expression(g, "x1^3*y1");
  for (const Arrow& x : g->arrows()) {
    Jet got = fa.jet(x);
    Jet want = direct.jet(x);
    CHECK(std::abs(got.value - want.value) <= 1e-15);
    CHECK(std::abs(got.d_src[0] - want.d_src[0]) <= 1e-15);
    CHECK(std::abs(got.d_dst[0] - want.d_dst[0]) <= 1e-15);
  }

  auto bare = module_action(BaseFunction{{1.0, 2.0}, std::nullopt, std::nullopt}, a);
  CHECK_FALSE(bare.has_jets());
}

TEST_CASE("elements on different groupoids do not mix") {
  auto s = line(2);
  auto g1 = build_groupoid(s, Partition::total(*s));
  auto g2 = build_groupoid(s, Partition::discrete(*s));
  CHECK_THROWS_AS(convolve(unit(g1), unit(g2)), MismatchError);
  CHECK_THROWS_AS(unit(g1) + unit(g2), MismatchError);
}

TEST_CASE("spanning set and indicators") {
  auto s = grid_2x2({"x1"});
  auto g = build_groupoid(s, hausdorff_relation(*s));
  auto basis = spanning_set(g);
  CHECK(basis.size() == g->arrow_count());
  auto e = arrow_indicator(g, {0, 1});
  CHECK(e.value({0, 1}) == Complex(1.0));
  CHECK(e.max_abs() == 1.0);
  CHECK_THROWS(arrow_indicator(g, {0, 2}));
}

TEST_CASE("csv round trip is bit exact") {
  Rng rng(41);
  for (bool jets : {false, true}) {
    auto g = random_groupoid(rng, 7, 3);
    auto a = random_element(rng, g, jets);
    std::stringstream ss;
    write_csv(ss, a);
    auto b = read_csv(ss, g);
    CHECK(b.has_jets() == jets);
    CHECK(max_abs_difference(a, b) == 0.0);
    if (jets)
      for (const Arrow& x : g->arrows()) {
        CHECK(a.jet(x).d_src == b.jet(x).d_src);
        CHECK(a.jet(x).d_dst == b.jet(x).d_dst);
      }
  }
  auto s = line(2);
  auto g = build_groupoid(s, Partition::discrete(*s));
  std::stringstream bad("src,dst,re,im\n0,1,1,0\n");
  CHECK_THROWS(read_csv(bad, g));
}
