#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "ncspace/error.hpp"
#include "ncspace/representation.hpp"
#include "support/models.hpp"

using namespace ncspace;
using namespace ncspace::testing;

TEST_CASE("all-ones element on the total two-point space") {
  auto s = line(2);
  auto g = build_groupoid(s, Partition::total(*s));
  auto one = from_expression(g, "1");
  RandomOperator r = represent(one);
  CHECK(r.orbit_matrix(0) == Matrix::Ones(2, 2));
  CHECK(&r.fiber(0) == &r.fiber(1));

  Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix::Ones(2, 2));
  const double oracle = eig.eigenvalues().cwiseAbs().maxCoeff();
  RandomOperatorReport report = random_operator_report(r);
  CHECK(report.measurable);
  CHECK(report.essentially_bounded);
  CHECK(std::abs(report.ess_sup_norm - oracle) <= 1e-12);
  CHECK(std::abs(report.ess_sup_norm - 2.0) <= 1e-12);
}

TEST_CASE("represent uses the weighted matrix") {
  auto s = line(2, {}, {1.0, 3.0});
  auto g = build_groupoid(s, Partition::total(*s));
  auto a = from_expression(g, "x1 + 2*y1");
  Matrix m = represent(a).orbit_matrix(0);
  CHECK(m(0, 0) == Complex(0.0));
  CHECK(m(0, 1) == Complex(6.0));
  CHECK(m(1, 0) == Complex(1.0));
  CHECK(m(1, 1) == Complex(9.0));
}

TEST_CASE("unit represents as the identity") {
  Rng rng(61);
  for (int t = 0; t < 20; ++t) {
    auto g = random_groupoid(rng, 9, 5);
    RandomOperator r = represent(unit(g));
    for (std::size_t b = 0; b < g->orbit_count(); ++b) {
      const auto m = static_cast<Eigen::Index>(g->orbit_size(b));
      CHECK((r.orbit_matrix(b) - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }
}

TEST_CASE("representation is a star homomorphism") {
  Rng rng(67);
  for (int t = 0; t < 40; ++t) {
    auto g = random_groupoid(rng, 10, 6);
    auto a = random_element(rng, g, false);
    auto b = random_element(rng, g, false);
    CHECK(homomorphism_defect(a, b).relative() <= 1e-12);
    CHECK(star_defect(a).relative() <= 1e-12);
  }
}

TEST_CASE("weighted adjoint is an involution and matches the inner product") {
  Rng rng(71);
  auto g = random_groupoid(rng, 8, 5);
  auto r = represent(random_element(rng, g, false));
  auto rr = adjoint(adjoint(r));
  for (std::size_t b = 0; b < g->orbit_count(); ++b) {
    CHECK((rr.orbit_matrix(b) - r.orbit_matrix(b)).cwiseAbs().maxCoeff() <= 1e-13);
    const Eigen::VectorXd w = orbit_weight_vector(*g, b);
    const auto m = w.size();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(m), phi = Eigen::VectorXcd::Random(m);
    auto inner = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
      Complex s{};
      for (Eigen::Index i = 0; i < m; ++i) s += u(i) * std::conj(v(i)) * w(i);
      return s;
    };
    Complex lhs = inner(r.orbit_matrix(b) * psi, phi);
    Complex rhs = inner(psi, adjoint(r).orbit_matrix(b) * phi);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("weighted operator norm against a brute-force oracle") {
  Rng rng(73);
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index m = uniform_int(rng, 1, 5);
    Matrix a = Matrix::Random(m, m);
    Eigen::VectorXd w(m);
    for (Eigen::Index i = 0; i < m; ++i) w(i) = uniform(rng, 0.25, 2.0);
    // ||A||_w^2 is the largest eigenvalue of A^dagger A with the weighted adjoint.
    Matrix wd = w.cast<Complex>().asDiagonal();
    Matrix winv = w.cwiseInverse().cast<Complex>().asDiagonal();
    Eigen::ComplexEigenSolver<Matrix> eig(winv * a.adjoint() * wd * a);
    double top = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) top = std::max(top, eig.eigenvalues()(i).real());
    CHECK(weighted_operator_norm(a, w) == doctest::Approx(std::sqrt(top)).epsilon(1e-10));
  }
}

TEST_CASE("random operator algebra and direct sum") {
  auto s = grid_2x2({"x1"});
  auto g = build_groupoid(s, hausdorff_relation(*s));
  CHECK(direct_sum_dimension(*g) == 8);
  auto id = RandomOperator::identity(g);
  CHECK(to_direct_sum(id) == Matrix::Identity(8, 8));
  auto two = id + id;
  CHECK((two - Complex(2.0) * id).orbit_matrix(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((two * two).orbit_matrix(1)(0, 0) == Complex(4.0));
  CHECK_THROWS_AS(RandomOperator(g, {Matrix::Identity(2, 2)}), MismatchError);
}
