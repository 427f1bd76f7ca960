#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ncspace/representation.hpp"

namespace ncspace {

/// Largest direct-sum dimension accepted by the commutant solver; the linear
/// system has D^2 unknowns.
inline constexpr std::size_t kMaxCommutantDimension = 64;

/// Relative singular-value cutoff for rank decisions.
inline constexpr double kRankThreshold = 1e-10;

/// Operators on C^D, orthonormal for the trace inner product tr(X^H Y).
struct OperatorBasis {
  std::size_t ambient_dimension = 0;
  std::vector<Matrix> elements;

  std::size_t size() const { return elements.size(); }
};

/// All D x D matrices commuting with every generator. Throws
/// ValidationError when D exceeds kMaxCommutantDimension.
OperatorBasis commutant(std::span<const Matrix> generators, std::size_t ambient_dimension);
OperatorBasis commutant(std::span<const RandomOperator> generators);

/// Dimension of the linear span of the matrices.
std::size_t span_dimension(std::span<const Matrix> matrices);

/// max over `matrices` of ||G - proj_basis(G)||_F / ||G||_F.
double containment_residual(std::span<const Matrix> matrices, const OperatorBasis& basis);

struct BicommutantReport {
  OperatorBasis commutant;
  OperatorBasis bicommutant;
  /// dim span(generators + identity)
  std::size_t span_dimension = 0;
  /// Generators and identity measured against the bicommutant.
  double containment_residual = 0.0;
  /// Bicommutant equals span(generators + identity).
  bool equals_span = false;
};

BicommutantReport double_commutant(std::span<const Matrix> generators, std::size_t ambient_dimension);
BicommutantReport double_commutant(std::span<const RandomOperator> generators);

/// rho(x) for every base point, over the basis of the point's orbit.
class DensityField {
 public:
  DensityField(GroupoidPtr groupoid, std::vector<Matrix> per_point);

  /// rho(x) = I / (sum_x |[x]| w_x) everywhere.
  static DensityField uniform(GroupoidPtr g);

  const Groupoid& groupoid() const { return *groupoid_; }
  const GroupoidPtr& groupoid_ptr() const { return groupoid_; }
  /// Indexed by point index.
  const Matrix& at(std::size_t point_index) const { return matrices_.at(point_index); }
  const std::vector<Matrix>& matrices() const { return matrices_; }

 private:
  GroupoidPtr groupoid_;
  std::vector<Matrix> matrices_;
};

/// Which of the four density conditions hold, plus faithfulness.
struct StateReport {
  bool hermitian = true;
  bool trace_class = true;  // finite fibers
  bool integrable = true;   // finite base
  bool positive = true;
  bool normalized = true;
  bool normal = true;       // structurally satisfied in finite dimension
  bool faithful = true;
  double normalization = 0.0;   // sum_x tr(rho(x)) w_x
  double min_eigenvalue = 0.0;  // over all fibers
  std::vector<std::string> problems;

  bool valid() const { return hermitian && positive && normalized; }
};

StateReport check_density(const DensityField& rho, double normalization_tol = 1e-9);

/// phi(R) = sum_x tr(rho(x) R_x) w_x, a normal state on the represented algebra.
class State {
 public:
  const DensityField& density() const { return density_; }
  const StateReport& report() const { return report_; }
  bool faithful() const { return report_.faithful; }

 private:
  State(DensityField d, StateReport r) : density_(std::move(d)), report_(std::move(r)) {}
  friend State make_state(DensityField rho, double normalization_tol);

  DensityField density_;
  StateReport report_;
};

/// Validates the density field. Throws ValidationError when a matrix is not
/// Hermitian, has a negative eigenvalue, or the normalization is off.
State make_state(DensityField rho, double normalization_tol = 1e-9);

Complex expect(const State& state, const RandomOperator& r);

}  // namespace ncspace
