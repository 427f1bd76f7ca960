#include <doctest.h>

#include <cmath>
#include <vector>

#include "ncspace/error.hpp"
#include "ncspace/expr.hpp"

using namespace ncspace;

TEST_CASE("parse and evaluate with precedence") {
  auto syms = SymbolTable::coordinates(2);
  std::vector<double> x{2.0, 3.0};
  CHECK(Expr::parse("1 + 2*x1^2 - x2/3", syms).eval(x) == doctest::Approx(1 + 8 - 1.0));
  CHECK(Expr::parse("-x1^2", syms).eval(x) == -4.0);
  CHECK(Expr::parse("2^3^2", syms).eval(x) == 512.0);
  CHECK(Expr::parse("x1^-1", syms).eval(x) == 0.5);
  CHECK(Expr::parse("sin(x1)*cos(x2) + exp(0) + log(x2)", syms).eval(x) ==
        doctest::Approx(std::sin(2.0) * std::cos(3.0) + 1.0 + std::log(3.0)));
  CHECK(Expr::parse("1.5e1", syms).eval(x) == 15.0);
}

TEST_CASE("parse errors name the problem") {
  auto syms = SymbolTable::coordinates(2);
  CHECK_THROWS_AS(Expr::parse("x3", syms), ParseError);
  CHECK_THROWS_AS(Expr::parse("x1 +", syms), ParseError);
  CHECK_THROWS_AS(Expr::parse("tan(x1)", syms), ParseError);
  CHECK_THROWS_AS(Expr::parse("(x1", syms), ParseError);
  CHECK_THROWS_AS(Expr::parse("x1 x2", syms), ParseError);
  try {
    Expr::parse("x1 + x7", syms);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("x7") != std::string::npos);
  }
}

TEST_CASE("symbolic derivatives agree with central differences") {
  auto syms = SymbolTable::coordinates(2);
  const char* cases[] = {"x1*x2^3", "sin(x1*x2)", "exp(x1)/(1 + x2^2)", "log(1 + x1^2)*cos(x2)", "x1^x2",
                         "(x1 - x2)^2/(x1 + 3)"};
  std::vector<double> x{0.7, 1.3};
  const double h = 1e-5;
  for (const char* text : cases) {
    Expr e = Expr::parse(text, syms);
    for (int slot = 0; slot < 2; ++slot) {
      std::vector<double> xp = x, xm = x;
      xp[static_cast<std::size_t>(slot)] += h;
      xm[static_cast<std::size_t>(slot)] -= h;
      double fd = (e.eval(xp) - e.eval(xm)) / (2 * h);
      CAPTURE(text);
      CAPTURE(slot);
      CHECK(e.derivative(slot).eval(x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("evaluation is bit-for-bit reproducible") {
  auto syms = SymbolTable::coordinates(1);
  Expr e = Expr::parse("sin(x1)^2 + cos(x1)^2 + x1/7", syms);
  std::vector<double> x{0.123456789};
  double first = e.eval(x);
  for (int i = 0; i < 10; ++i) CHECK(e.eval(x) == first);
  Expr copy = Expr::parse(e.to_string(syms), syms);
  CHECK(copy.eval(x) == first);
}

TEST_CASE("substitution and remapping") {
  auto pairs = SymbolTable::coordinate_pairs(1);
  Expr e = Expr::parse("x1 - 2*y1", pairs);
  std::vector<int> swap{1, 0};
  std::vector<double> v{5.0, 1.0};
  CHECK(e.remap(swap).eval(v) == 1.0 - 10.0);
  std::vector<Expr> repl{Expr::parse("y1^2", pairs), Expr::constant(0.0)};
  CHECK(e.substitute(repl).eval(v) == 1.0);
  CHECK(e.max_slot() == 1);
  CHECK(Expr::constant(3).max_slot() == -1);
}
