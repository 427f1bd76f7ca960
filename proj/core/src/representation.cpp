#include "ncspace/representation.hpp"

#include <algorithm>
#include <cmath>

#include "ncspace/error.hpp"

namespace ncspace {

RandomOperator::RandomOperator(GroupoidPtr groupoid, std::vector<Matrix> orbit_matrices)
    : groupoid_(std::move(groupoid)), matrices_(std::move(orbit_matrices)) {
  if (!groupoid_) throw ValidationError("random operator needs a groupoid");
  if (matrices_.size() != groupoid_->orbit_count()) throw MismatchError("one matrix per orbit is required");
  for (std::size_t b = 0; b < matrices_.size(); ++b) {
    const auto m = static_cast<Eigen::Index>(groupoid_->orbit_size(b));
    if (matrices_[b].rows() != m || matrices_[b].cols() != m)
      throw MismatchError("orbit " + std::to_string(b) + " matrix must be " + std::to_string(m) + "x" +
                          std::to_string(m));
  }
}

RandomOperator RandomOperator::zero(GroupoidPtr g) {
  std::vector<Matrix> ms;
  for (std::size_t b = 0; b < g->orbit_count(); ++b) {
    const auto m = static_cast<Eigen::Index>(g->orbit_size(b));
    ms.push_back(Matrix::Zero(m, m));
  }
  return RandomOperator(std::move(g), std::move(ms));
}

RandomOperator RandomOperator::identity(GroupoidPtr g) {
  std::vector<Matrix> ms;
  for (std::size_t b = 0; b < g->orbit_count(); ++b) {
    const auto m = static_cast<Eigen::Index>(g->orbit_size(b));
    ms.push_back(Matrix::Identity(m, m));
  }
  return RandomOperator(std::move(g), std::move(ms));
}

const Matrix& RandomOperator::fiber(PointId x) const {
  return matrices_[groupoid_->block_of_index(groupoid_->base().index_of(x))];
}

void RandomOperator::require_same(const RandomOperator& other) const {
  if (!groupoid_->same_as(*other.groupoid_)) throw MismatchError("operators live on different groupoids");
}

RandomOperator& RandomOperator::operator+=(const RandomOperator& other) {
  require_same(other);
  for (std::size_t b = 0; b < matrices_.size(); ++b) matrices_[b] += other.matrices_[b];
  return *this;
}

RandomOperator& RandomOperator::operator-=(const RandomOperator& other) {
  require_same(other);
  for (std::size_t b = 0; b < matrices_.size(); ++b) matrices_[b] -= other.matrices_[b];
  return *this;
}

RandomOperator& RandomOperator::operator*=(Complex s) {
  for (auto& m : matrices_) m *= s;
  return *this;
}

RandomOperator operator*(const RandomOperator& a, const RandomOperator& b) {
  a.require_same(b);
  std::vector<Matrix> ms;
  for (std::size_t k = 0; k < a.matrices_.size(); ++k) ms.push_back(a.matrices_[k] * b.matrices_[k]);
  return RandomOperator(a.groupoid_, std::move(ms));
}

Eigen::VectorXd orbit_weight_vector(const Groupoid& g, std::size_t block) {
  const auto& orbit = g.orbit(block);
  Eigen::VectorXd w(static_cast<Eigen::Index>(orbit.size()));
  for (std::size_t k = 0; k < orbit.size(); ++k) w(static_cast<Eigen::Index>(k)) = g.base().point(orbit[k]).weight;
  return w;
}

RandomOperator represent(const AlgebraElement& a) {
  const Groupoid& g = a.groupoid();
  std::vector<Matrix> ms;
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    const auto m = static_cast<Eigen::Index>(g.orbit_size(k));
    Eigen::VectorXd w = orbit_weight_vector(g, k);
    Matrix mat(m, m);
    const auto& values = a.block(k).value;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) mat(i, j) = values[static_cast<std::size_t>(i * m + j)] * w(j);
    ms.push_back(std::move(mat));
  }
  return RandomOperator(a.groupoid_ptr(), std::move(ms));
}

RandomOperator adjoint(const RandomOperator& r) {
  const Groupoid& g = r.groupoid();
  std::vector<Matrix> ms;
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    Eigen::VectorXd w = orbit_weight_vector(g, k);
    ms.push_back(w.cwiseInverse().asDiagonal() * r.orbit_matrix(k).adjoint() * w.asDiagonal());
  }
  return RandomOperator(r.groupoid_ptr(), std::move(ms));
}

double weighted_operator_norm(const Matrix& m, const Eigen::VectorXd& weights) {
  if (m.size() == 0) return 0.0;
  Eigen::VectorXd s = weights.cwiseSqrt();
  Matrix similar = s.asDiagonal() * m * s.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Matrix> svd(similar);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Defect homomorphism_defect(const AlgebraElement& a, const AlgebraElement& b) {
  RandomOperator ra = represent(a);
  RandomOperator rb = represent(b);
  RandomOperator rab = represent(convolve(a, b));
  const Groupoid& g = a.groupoid();
  Defect d;
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    Eigen::VectorXd w = orbit_weight_vector(g, k);
    const Matrix& A = ra.orbit_matrix(k);
    const Matrix& B = rb.orbit_matrix(k);
    d.absolute = std::max(d.absolute, weighted_operator_norm(rab.orbit_matrix(k) - A * B, w));
    d.scale = std::max(d.scale, weighted_operator_norm(A, w) * weighted_operator_norm(B, w));
  }
  return d;
}

Defect star_defect(const AlgebraElement& a) {
  RandomOperator lhs = represent(involution(a));
  RandomOperator rhs = adjoint(represent(a));
  const Groupoid& g = a.groupoid();
  Defect d;
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    Eigen::VectorXd w = orbit_weight_vector(g, k);
    d.absolute = std::max(d.absolute, weighted_operator_norm(lhs.orbit_matrix(k) - rhs.orbit_matrix(k), w));
    d.scale = std::max(d.scale, weighted_operator_norm(rhs.orbit_matrix(k), w));
  }
  return d;
}

RandomOperatorReport random_operator_report(const RandomOperator& r) {
  const Groupoid& g = r.groupoid();
  RandomOperatorReport report;
  report.measurability_note = "base is a finite index set of " + std::to_string(g.base().size()) +
                              " points; every function of x is measurable";
  for (std::size_t k = 0; k < g.orbit_count(); ++k) {
    double norm = weighted_operator_norm(r.orbit_matrix(k), orbit_weight_vector(g, k));
    report.orbit_norms.push_back(norm);
    report.ess_sup_norm = std::max(report.ess_sup_norm, norm);
  }
  report.essentially_bounded = std::isfinite(report.ess_sup_norm);
  return report;
}

std::size_t direct_sum_dimension(const Groupoid& g) {
  std::size_t d = 0;
  for (std::size_t k = 0; k < g.orbit_count(); ++k) d += g.orbit_size(k) * g.orbit_size(k);
  return d;
}

Matrix to_direct_sum(const RandomOperator& r) {
  const Groupoid& g = r.groupoid();
  const auto D = static_cast<Eigen::Index>(direct_sum_dimension(g));
  Matrix out = Matrix::Zero(D, D);
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < g.base().size(); ++i) {
    const Matrix& m = r.orbit_matrix(g.block_of_index(i));
    out.block(offset, offset, m.rows(), m.cols()) = m;
    offset += m.rows();
  }
  return out;
}

}  // namespace ncspace
