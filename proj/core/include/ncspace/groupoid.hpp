#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ncspace/diffspace.hpp"

namespace ncspace {

struct Arrow {
  PointId src = 0;
  PointId dst = 0;

  friend bool operator==(const Arrow&, const Arrow&) = default;
  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

inline Arrow inverse(const Arrow& a) { return {a.dst, a.src}; }

/// Location of an arrow in block storage: block index and the positions of
/// source and target inside the block.
struct ArrowSlot {
  std::size_t block = 0;
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Pair groupoid of an equivalence relation: arrows are the related ordered
/// pairs, stored implicitly per block so that an arrow is (block, row, col).
class Groupoid {
 public:
  Groupoid(std::shared_ptr<const DiffSpace> base, Partition partition);

  const DiffSpace& base() const { return *base_; }
  const std::shared_ptr<const DiffSpace>& base_ptr() const { return base_; }
  const Partition& partition() const { return partition_; }
  std::size_t dimension() const { return base_->dimension(); }

  std::size_t orbit_count() const { return members_.size(); }
  /// Point indices (into base().points()) of one orbit, ordered by id.
  const std::vector<std::size_t>& orbit(std::size_t block) const { return members_.at(block); }
  std::size_t orbit_size(std::size_t block) const { return members_.at(block).size(); }

  std::size_t block_of_index(std::size_t point_index) const { return block_of_index_.at(point_index); }
  std::size_t position_of_index(std::size_t point_index) const { return position_.at(point_index); }

  std::size_t arrow_count() const;
  bool contains(const Arrow& a) const;
  /// Throws ValidationError if the pair is not an arrow.
  ArrowSlot slot(const Arrow& a) const;
  Arrow arrow(const ArrowSlot& s) const;
  /// Every arrow, block by block, row-major inside a block.
  std::vector<Arrow> arrows() const;

  /// Structural identity: same base space object and same partition.
  bool same_as(const Groupoid& other) const;

 private:
  std::shared_ptr<const DiffSpace> base_;
  Partition partition_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::size_t> block_of_index_;
  std::vector<std::size_t> position_;
};

using GroupoidPtr = std::shared_ptr<const Groupoid>;

GroupoidPtr build_groupoid(std::shared_ptr<const DiffSpace> space, const Partition& rho);

/// (x,y) o (y,z) = (x,z). Throws MismatchError when a1.dst != a2.src.
Arrow compose(const Groupoid& g, const Arrow& a1, const Arrow& a2);

struct FiberReport {
  std::vector<Arrow> outgoing;  // src = x
  std::vector<Arrow> incoming;  // dst = x
  std::vector<Arrow> isotropy;  // both
};

FiberReport fibers(const Groupoid& g, PointId x);

bool is_transitive(const Groupoid& g);

}  // namespace ncspace
