#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "ncspace/algebra.hpp"

namespace ncspace {

using Matrix = Eigen::MatrixXcd;

/// A field of fiber operators x -> A_x, one matrix per orbit. Every point of
/// an orbit shares its orbit's matrix, acting on L2 of the orbit with the
/// weighted inner product <psi, phi> = sum_z psi(z) conj(phi(z)) w_z.
class RandomOperator {
 public:
  RandomOperator(GroupoidPtr groupoid, std::vector<Matrix> orbit_matrices);

  static RandomOperator zero(GroupoidPtr g);
  static RandomOperator identity(GroupoidPtr g);

  const Groupoid& groupoid() const { return *groupoid_; }
  const GroupoidPtr& groupoid_ptr() const { return groupoid_; }

  const Matrix& orbit_matrix(std::size_t block) const { return matrices_.at(block); }
  const std::vector<Matrix>& orbit_matrices() const { return matrices_; }
  /// A_x for the base point with this id.
  const Matrix& fiber(PointId x) const;

  RandomOperator& operator+=(const RandomOperator& other);
  RandomOperator& operator-=(const RandomOperator& other);
  RandomOperator& operator*=(Complex s);

  friend RandomOperator operator+(RandomOperator a, const RandomOperator& b) { return a += b; }
  friend RandomOperator operator-(RandomOperator a, const RandomOperator& b) { return a -= b; }
  friend RandomOperator operator*(Complex s, RandomOperator a) { return a *= s; }
  /// Fiberwise composition.
  friend RandomOperator operator*(const RandomOperator& a, const RandomOperator& b);

 private:
  void require_same(const RandomOperator& other) const;

  GroupoidPtr groupoid_;
  std::vector<Matrix> matrices_;
};

/// Weights of the members of one orbit, in orbit order.
Eigen::VectorXd orbit_weight_vector(const Groupoid& g, std::size_t block);

/// Regular representation: on the orbit {z_1..z_m}, M[i,j] = a(z_i, z_j) w_{z_j}.
RandomOperator represent(const AlgebraElement& a);

/// Adjoint for the weighted fiber inner product: W^-1 A^H W per orbit.
RandomOperator adjoint(const RandomOperator& r);

/// Operator norm of `m` on C^k with inner product weighted by `weights`.
double weighted_operator_norm(const Matrix& m, const Eigen::VectorXd& weights);

/// max over fibers of ||pi(a*b) - pi(a) pi(b)||.
Defect homomorphism_defect(const AlgebraElement& a, const AlgebraElement& b);

/// max over fibers of ||pi(a^*) - pi(a)^dagger|| with the weighted adjoint.
Defect star_defect(const AlgebraElement& a);

/// Conditions for a field of operators to be a random operator.
struct RandomOperatorReport {
  /// The base is a finite index set, so every coefficient function
  /// x -> <A_x psi_i(x), psi_j(x)> is measurable.
  bool measurable = true;
  std::string measurability_note;
  /// ess sup ||A_x||: with atomic positive weights every point has positive
  /// measure, so this is the maximum over base points.
  double ess_sup_norm = 0.0;
  bool essentially_bounded = true;
  std::vector<double> orbit_norms;
};

RandomOperatorReport random_operator_report(const RandomOperator& r);

/// Total dimension of the direct sum of all fibers, sum over x of |[x]|.
std::size_t direct_sum_dimension(const Groupoid& g);

/// Block-diagonal matrix of the operator on the direct sum of all fibers,
/// base points in space order.
Matrix to_direct_sum(const RandomOperator& r);

}  // namespace ncspace
