#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncspace/expr.hpp"

namespace ncspace {

using PointId = std::int64_t;

struct Point {
  PointId id = 0;
  std::vector<double> coords;
  double weight = 1.0;  // measure atom of {x}
};

struct GeneratorFunction {
  std::string name;
  std::string source;  // text as written in the config
  Expr expr;           // over x1..xn
};

/// How generator values are compared when grouping points.
struct CompareMode {
  enum class Kind { Exact, Quantized };
  Kind kind = Kind::Exact;
  double eps = 0.0;

  static CompareMode exact() { return {}; }
  static CompareMode quantized(double eps);
};

/// Unvalidated description of a space, as read from a config file.
struct SpaceSpec {
  struct GeneratorSpec {
    std::string name;
    std::string expr;
  };
  std::size_t dimension = 0;
  std::vector<Point> points;
  std::vector<GeneratorSpec> generators;
  bool constants_only = false;
  CompareMode compare_mode;
};

/// A finite differential space (M, C): points with coordinates and atomic
/// weights, plus a generating family of smooth functions.
///
/// The constants-only structure stores a single synthetic generator `1`.
class DiffSpace {
 public:
  DiffSpace(std::size_t dimension, std::vector<Point> points, std::vector<GeneratorFunction> generators,
            CompareMode mode, bool constants_only);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(std::size_t index) const { return points_.at(index); }
  const std::vector<GeneratorFunction>& generators() const { return generators_; }
  const CompareMode& compare_mode() const { return mode_; }
  bool constants_only() const { return constants_only_; }

  bool contains(PointId id) const { return index_.count(id) != 0; }
  /// Position of `id` in points(); throws ValidationError for unknown ids.
  std::size_t index_of(PointId id) const;

  double total_measure() const;
  double evaluate(std::size_t generator, std::size_t point_index) const;

  /// Same points and compare mode, different generator family.
  DiffSpace with_generators(std::vector<GeneratorFunction> generators, bool constants_only) const;

 private:
  std::size_t dimension_;
  std::vector<Point> points_;
  std::vector<GeneratorFunction> generators_;
  CompareMode mode_;
  bool constants_only_;
  std::unordered_map<PointId, std::size_t> index_;
};

/// An equivalence relation on point ids stored as disjoint covering blocks.
///
/// Canonical form: members ascending inside each block, blocks ordered by
/// their smallest member. Two partitions of the same set are equal iff their
/// canonical forms are equal.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<PointId>> blocks);

  static Partition total(const DiffSpace& space);
  static Partition discrete(const DiffSpace& space);

  const std::vector<std::vector<PointId>>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t element_count() const { return block_of_.size(); }
  std::size_t block_of(PointId id) const;
  bool contains(PointId id) const { return block_of_.count(id) != 0; }
  bool related(PointId x, PointId y) const { return block_of(x) == block_of(y); }

  /// True when every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;
  /// True when the partition covers exactly the ids of `space`.
  bool covers(const DiffSpace& space) const;

  /// All related ordered pairs, the graph of the relation.
  std::vector<std::pair<PointId, PointId>> pairs() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.blocks_ == b.blocks_; }

 private:
  std::vector<std::vector<PointId>> blocks_;
  std::unordered_map<PointId, std::size_t> block_of_;
};

SpaceSpec parse_space_spec(const std::string& json_text);
DiffSpace build_space(const SpaceSpec& spec);

/// Fibers of x -> (f_1(x), ..., f_m(x)) over the generating family.
Partition hausdorff_relation(const DiffSpace& space);

struct ConsistencyReport {
  struct Entry {
    std::string name;
    bool consistent = true;
    /// First block on which the generator takes two values.
    std::optional<std::size_t> witness_block;
  };
  std::vector<Entry> entries;

  bool all_consistent() const;
  std::size_t inconsistent_count() const;
};

/// Per generator: is it constant on every block of `rho`?
ConsistencyReport consistent_family(const DiffSpace& space, const Partition& rho);

struct Quotient {
  DiffSpace space;                    // one point per block
  std::vector<std::string> dropped;   // generators not constant on blocks
  std::vector<std::size_t> kept;      // indices of pushed-down generators
  std::vector<std::size_t> projection;  // original point index -> quotient point index
};

/// M/rho with the pushed-down consistent generators as coordinates.
Quotient quotient(const DiffSpace& space, const Partition& rho);

/// Composes a quotient generator with the projection: values on the
/// original points, in original point order.
std::vector<double> pullback(const Quotient& q, std::size_t quotient_generator);

}  // namespace ncspace
