#include "ncspace/vonneumann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncspace/error.hpp"

namespace ncspace {

namespace {

using Vector = Eigen::VectorXcd;

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Eigen::Ref<const Vector>& v, Eigen::Index d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

std::size_t numerical_rank(const Eigen::VectorXd& singular_values) {
  if (singular_values.size() == 0 || singular_values(0) == 0.0) return 0;
  const double cut = kRankThreshold * singular_values(0);
  return static_cast<std::size_t>((singular_values.array() > cut).count());
}

Matrix stack_columns(std::span<const Matrix> matrices) {
  if (matrices.empty()) return Matrix();
  Matrix cols(matrices.front().size(), static_cast<Eigen::Index>(matrices.size()));
  for (std::size_t k = 0; k < matrices.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = vec(matrices[k]);
  return cols;
}

// Number of leading |R_ii| of a column-pivoted QR above kRankThreshold * scale.
Eigen::Index qr_rank(const Matrix& qr, double scale) {
  const Eigen::Index diag = std::min(qr.rows(), qr.cols());
  Eigen::Index rank = 0;
  while (rank < diag && std::abs(qr(rank, rank)) > kRankThreshold * scale) ++rank;
  return rank;
}

// Orthonormal matrices spanning the same space as `matrices`.
std::vector<Matrix> span_basis(std::span<const Matrix> matrices, Eigen::Index d) {
  std::vector<Matrix> out;
  if (matrices.empty()) return out;
  Eigen::ColPivHouseholderQR<Matrix> qr(stack_columns(matrices));
  if (qr.matrixQR().size() == 0) return out;
  const Eigen::Index rank = qr_rank(qr.matrixQR(), std::abs(qr.matrixQR()(0, 0)));
  const Matrix Q = qr.householderQ();
  for (Eigen::Index k = 0; k < rank; ++k) out.push_back(unvec(Q.col(k), d));
  return out;
}

// Orthonormal basis of ker A: the complement of range(A^H), read off a
// column-pivoted QR of A^H.
Matrix null_space(const Matrix& A, double scale) {
  Eigen::ColPivHouseholderQR<Matrix> qr(A.adjoint());
  const Eigen::Index rank = qr_rank(qr.matrixQR(), scale);
  const Matrix Q = qr.householderQ();
  return Q.rightCols(A.cols() - rank);
}

// Matrix of X -> XG - GX acting on vec(X) (column-major).
Matrix commutation_operator(const Matrix& G) {
  const Eigen::Index d = G.rows();
  Matrix K = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k) {
        K(i + d * j, i + d * k) += G(k, j);
        K(i + d * j, k + d * j) -= G(i, k);
      }
  return K;
}

std::vector<Matrix> to_direct_sums(std::span<const RandomOperator> generators, std::size_t& ambient) {
  if (generators.empty()) throw ValidationError("commutant of random operators needs at least one generator");
  ambient = direct_sum_dimension(generators.front().groupoid());
  std::vector<Matrix> out;
  for (const auto& r : generators) {
    if (!r.groupoid().same_as(generators.front().groupoid()))
      throw MismatchError("generators live on different groupoids");
    out.push_back(to_direct_sum(r));
  }
  return out;
}

}  // namespace

OperatorBasis commutant(std::span<const Matrix> generators, std::size_t ambient_dimension) {
  if (ambient_dimension > kMaxCommutantDimension)
    throw ValidationError("commutant: direct-sum dimension " + std::to_string(ambient_dimension) + " exceeds the limit " +
                          std::to_string(kMaxCommutantDimension));
  const auto d = static_cast<Eigen::Index>(ambient_dimension);
  for (const auto& g : generators)
    if (g.rows() != d || g.cols() != d) throw MismatchError("commutant: generator is not " + std::to_string(d) + "x" + std::to_string(d));

  OperatorBasis basis;
  basis.ambient_dimension = ambient_dimension;
  const std::vector<Matrix> independent = span_basis(generators, d);
  if (independent.empty()) {
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, j) = 1.0;
        basis.elements.push_back(std::move(e));
      }
    return basis;
  }

  // Shrink the candidate space one generator at a time: N holds an
  // orthonormal basis (columns of vec(X)) of matrices commuting with every
  // generator seen so far.
  const Eigen::Index unknowns = d * d;
  Matrix N = Matrix::Identity(unknowns, unknowns);
  for (const Matrix& G : independent) {
    const Matrix K = commutation_operator(G);
    // N is orthonormal, so ||K|| bounds the restricted system; measuring
    // rank against it keeps rounding noise from counting as constraints.
    N = N * null_space(K * N, K.norm());
    if (N.cols() == 0) break;
  }
  for (Eigen::Index k = 0; k < N.cols(); ++k) basis.elements.push_back(unvec(N.col(k), d));
  return basis;
}

OperatorBasis commutant(std::span<const RandomOperator> generators) {
  std::size_t ambient = 0;
  std::vector<Matrix> mats = to_direct_sums(generators, ambient);
  return commutant(mats, ambient);
}

std::size_t span_dimension(std::span<const Matrix> matrices) {
  if (matrices.empty()) return 0;
  Eigen::BDCSVD<Matrix> svd(stack_columns(matrices));
  return numerical_rank(svd.singularValues());
}

double containment_residual(std::span<const Matrix> matrices, const OperatorBasis& basis) {
  double worst = 0.0;
  for (const Matrix& g : matrices) {
    Matrix residual = g;
    for (const Matrix& b : basis.elements) residual -= (b.adjoint() * g).trace() * b;
    const double norm = g.norm();
    if (norm > 0.0) worst = std::max(worst, residual.norm() / norm);
  }
  return worst;
}

BicommutantReport double_commutant(std::span<const Matrix> generators, std::size_t ambient_dimension) {
  BicommutantReport report;
  report.commutant = commutant(generators, ambient_dimension);
  report.bicommutant = commutant(report.commutant.elements, ambient_dimension);
  std::vector<Matrix> with_identity(generators.begin(), generators.end());
  const auto d = static_cast<Eigen::Index>(ambient_dimension);
  with_identity.push_back(Matrix::Identity(d, d));
  report.span_dimension = span_dimension(with_identity);
  report.containment_residual = containment_residual(with_identity, report.bicommutant);
  report.equals_span =
      report.bicommutant.size() == report.span_dimension && report.containment_residual <= kRankThreshold;
  return report;
}

BicommutantReport double_commutant(std::span<const RandomOperator> generators) {
  std::size_t ambient = 0;
  std::vector<Matrix> mats = to_direct_sums(generators, ambient);
  return double_commutant(mats, ambient);
}

// ---------------------------------------------------------------------------
// States

DensityField::DensityField(GroupoidPtr groupoid, std::vector<Matrix> per_point)
    : groupoid_(std::move(groupoid)), matrices_(std::move(per_point)) {
  if (!groupoid_) throw ValidationError("density field needs a groupoid");
  if (matrices_.size() != groupoid_->base().size()) throw MismatchError("density field needs one matrix per base point");
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const auto m = static_cast<Eigen::Index>(groupoid_->orbit_size(groupoid_->block_of_index(i)));
    if (matrices_[i].rows() != m || matrices_[i].cols() != m)
      throw MismatchError("density at point " + std::to_string(groupoid_->base().point(i).id) + " must be " +
                          std::to_string(m) + "x" + std::to_string(m));
  }
}

DensityField DensityField::uniform(GroupoidPtr g) {
  double total = 0.0;
  for (std::size_t i = 0; i < g->base().size(); ++i)
    total += static_cast<double>(g->orbit_size(g->block_of_index(i))) * g->base().point(i).weight;
  std::vector<Matrix> ms;
  for (std::size_t i = 0; i < g->base().size(); ++i) {
    const auto m = static_cast<Eigen::Index>(g->orbit_size(g->block_of_index(i)));
    ms.push_back(Matrix::Identity(m, m) / total);
  }
  return DensityField(std::move(g), std::move(ms));
}

StateReport check_density(const DensityField& rho, double normalization_tol) {
  const Groupoid& g = rho.groupoid();
  StateReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  Complex norm{};
  for (std::size_t i = 0; i < g.base().size(); ++i) {
    const Matrix& m = rho.at(i);
    const PointId id = g.base().point(i).id;
    const double size = std::max(m.cwiseAbs().maxCoeff(), std::abs(m.trace()));
    const double tol = 1e-12 * std::max(size, std::numeric_limits<double>::min());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
      report.hermitian = false;
      report.problems.push_back("density at point " + std::to_string(id) + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    report.min_eigenvalue = std::min(report.min_eigenvalue, lo);
    if (lo < -tol) {
      report.positive = false;
      report.problems.push_back("density at point " + std::to_string(id) + " has negative eigenvalue " +
                                std::to_string(lo));
    }
    const double tr = m.trace().real();
    if (!(lo > 1e-12 * tr) || tr <= 0.0) report.faithful = false;
    norm += m.trace() * g.base().point(i).weight;
  }
  report.normalization = norm.real();
  if (std::abs(norm - Complex(1.0)) > normalization_tol) {
    report.normalized = false;
    report.problems.push_back("sum of weighted traces is " + std::to_string(norm.real()) + ", expected 1");
  }
  report.faithful = report.faithful && report.valid();
  return report;
}

State make_state(DensityField rho, double normalization_tol) {
  StateReport report = check_density(rho, normalization_tol);
  if (!report.valid()) {
    std::string msg = "invalid density field:";
    for (const auto& p : report.problems) msg += " " + p + ";";
    throw ValidationError(msg);
  }
  return State(std::move(rho), std::move(report));
}

Complex expect(const State& state, const RandomOperator& r) {
  const DensityField& rho = state.density();
  const Groupoid& g = rho.groupoid();
  if (!g.same_as(r.groupoid())) throw MismatchError("state and operator live on different groupoids");
  Complex total{};
  for (std::size_t i = 0; i < g.base().size(); ++i) {
    const Matrix& fiber = r.orbit_matrix(g.block_of_index(i));
    total += (rho.at(i) * fiber).trace() * g.base().point(i).weight;
  }
  return total;
}

}  // namespace ncspace
