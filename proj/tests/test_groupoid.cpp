#include <doctest.h>

#include "ncspace/error.hpp"
#include "ncspace/groupoid.hpp"
#include "support/models.hpp"

using namespace ncspace;
using namespace ncspace::testing;

TEST_CASE("arrow counts") {
  auto two = line(2);
  CHECK(build_groupoid(two, Partition::total(*two))->arrow_count() == 4);

  auto grid = grid_2x2({"x1"});
  auto diag = build_groupoid(grid, Partition::discrete(*grid));
  CHECK(diag->arrow_count() == 4);
  for (const Arrow& a : diag->arrows()) CHECK(a.src == a.dst);

  // Oracle: enumerate ordered pairs with equal first coordinate.
  std::size_t expected = 0;
  for (const auto& p : grid->points())
    for (const auto& q : grid->points())
      if (p.coords[0] == q.coords[0]) ++expected;
  auto g = build_groupoid(grid, hausdorff_relation(*grid));
  CHECK(expected == 8);
  CHECK(g->arrow_count() == expected);

  CHECK_THROWS_AS(build_groupoid(grid, Partition({{0, 1}})), MismatchError);
}

TEST_CASE("compose and inverse") {
  auto s = line(3);
  auto g = build_groupoid(s, Partition::total(*s));
  CHECK(compose(*g, {0, 1}, {1, 0}) == Arrow{0, 0});
  CHECK(compose(*g, {0, 1}, {1, 2}) == Arrow{0, 2});
  CHECK_THROWS_AS(compose(*g, {0, 1}, {2, 0}), MismatchError);
  CHECK(inverse(Arrow{0, 1}) == Arrow{1, 0});
  CHECK(inverse(Arrow{2, 2}) == Arrow{2, 2});
  CHECK(inverse(inverse(Arrow{0, 2})) == Arrow{0, 2});
}

TEST_CASE("groupoid laws hold exhaustively on small blocks") {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto s = line(n);
    auto g = build_groupoid(s, Partition::total(*s));
    auto arrows = g->arrows();
    for (const Arrow& a : arrows) {
      CHECK(compose(*g, {a.src, a.src}, a) == a);
      CHECK(compose(*g, a, {a.dst, a.dst}) == a);
      CHECK(compose(*g, a, inverse(a)) == Arrow{a.src, a.src});
      for (const Arrow& b : arrows) {
        if (a.dst != b.src) continue;
        for (const Arrow& c : arrows) {
          if (b.dst != c.src) continue;
          CHECK(compose(*g, compose(*g, a, b), c) == compose(*g, a, compose(*g, b, c)));
        }
      }
    }
  }
}

TEST_CASE("fibers and isotropy") {
  auto two = line(2);
  auto total = build_groupoid(two, Partition::total(*two));
  FiberReport f = fibers(*total, 0);
  CHECK(f.outgoing == std::vector<Arrow>{{0, 0}, {0, 1}});
  CHECK(f.incoming == std::vector<Arrow>{{0, 0}, {1, 0}});
  CHECK(f.isotropy == std::vector<Arrow>{{0, 0}});

  auto grid = grid_2x2({"x1"});
  auto diag = build_groupoid(grid, Partition::discrete(*grid));
  for (const auto& p : grid->points()) CHECK(fibers(*diag, p.id).outgoing == std::vector<Arrow>{{p.id, p.id}});

  auto g = build_groupoid(grid, hausdorff_relation(*grid));
  CHECK(fibers(*g, 0).outgoing.size() == 2);
  CHECK_THROWS_AS(fibers(*g, 42), ValidationError);
}

TEST_CASE("transitivity and orbit decomposition") {
  auto grid = grid_2x2({"x1"});
  CHECK(is_transitive(*build_groupoid(grid, Partition::total(*grid))));
  CHECK_FALSE(is_transitive(*build_groupoid(grid, Partition::discrete(*grid))));
  auto g = build_groupoid(grid, hausdorff_relation(*grid));
  CHECK_FALSE(is_transitive(*g));
  CHECK(g->orbit_count() == 2);

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    auto rg = random_groupoid(rng, 9, 4);
    std::size_t sum = 0;
    for (std::size_t b = 0; b < rg->orbit_count(); ++b) sum += rg->orbit_size(b) * rg->orbit_size(b);
    CHECK(rg->arrow_count() == sum);
    for (const Arrow& a : rg->arrows()) {
      CHECK(rg->contains(a));
      CHECK(rg->arrow(rg->slot(a)) == a);
    }
  }
}
