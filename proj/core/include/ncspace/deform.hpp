#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ncspace/algebra.hpp"

namespace ncspace {

/// One step of the projection-generated chain: structure C_k, relation rho_k
/// and groupoid Gamma_k over the same points.
struct ChainLevel {
  std::size_t k = 0;
  std::shared_ptr<const DiffSpace> structure;
  Partition partition;
  GroupoidPtr groupoid;
};

struct ChainReport {
  bool arrows_decreasing = true;    // Gamma_{k+1} within Gamma_k
  bool partitions_refine = true;    // rho_{k+1} refines rho_k
  bool bottom_total = true;         // rho_0 has one block
  bool top_diagonal = true;         // Gamma_n is the diagonal
  bool block_counts_nondecreasing = true;
  /// Each class at level k is exactly the fiber of (pi_1..pi_k) through its
  /// points, and finite; this is the finite stand-in for measurability.
  bool classes_are_projection_fibers = true;
  std::vector<std::vector<std::size_t>> class_sizes;  // per level

  bool ok() const {
    return arrows_decreasing && partitions_refine && bottom_total && top_diagonal && block_counts_nondecreasing &&
           classes_are_projection_fibers;
  }
};

class DeformationChain {
 public:
  explicit DeformationChain(std::vector<ChainLevel> levels);

  std::size_t size() const { return levels_.size(); }
  /// Index of the last level, the space dimension n.
  std::size_t top() const { return levels_.size() - 1; }
  const ChainLevel& level(std::size_t k) const { return levels_.at(k); }
  const std::vector<ChainLevel>& levels() const { return levels_; }
  const ChainReport& report() const { return report_; }

 private:
  std::vector<ChainLevel> levels_;
  ChainReport report_;
};

/// Levels k = 0..n generated by {1}, {pi_1}, ..., {pi_1..pi_n}. The user's
/// own generators are ignored; coordinates define the projections.
DeformationChain deformation_chain(const DiffSpace& space);

/// Restriction of functions along Gamma_{k+1} within Gamma_k: values and jets
/// copied on surviving arrows. `a` must live on level k.
AlgebraElement restrict(const AlgebraElement& a, const DeformationChain& chain, std::size_t k);

/// Composite restriction from level `from` down to level `to` >= from.
AlgebraElement restrict_to(const AlgebraElement& a, const DeformationChain& chain, std::size_t from, std::size_t to);

/// max |restrict(a *_k b) - restrict(a) *_{k+1} restrict(b)|.
Defect homomorphism_defect_chain(const AlgebraElement& a, const AlgebraElement& b, const DeformationChain& chain,
                                 std::size_t k);

struct PointwiseReport {
  /// max |(a *_n b)(x,x) - a(x,x) b(x,x) w_x|
  double weighted_defect = 0.0;
  /// max |(a *_n b)(x,x) - a(x,x) b(x,x)|; zero up to rounding iff weights are 1
  double unweighted_defect = 0.0;
  bool unit_weights = true;
  double scale = 0.0;
};

/// Step n multiplication against the pointwise product on the diagonal.
PointwiseReport step_n_pointwise_check(const DeformationChain& chain, const AlgebraElement& a,
                                       const AlgebraElement& b);

}  // namespace ncspace
