#include "ncspace/diffspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "ncspace/error.hpp"

namespace ncspace {

CompareMode CompareMode::quantized(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("quantization eps must be a positive real");
  return {Kind::Quantized, eps};
}

// ---------------------------------------------------------------------------
// DiffSpace

DiffSpace::DiffSpace(std::size_t dimension, std::vector<Point> points, std::vector<GeneratorFunction> generators,
                     CompareMode mode, bool constants_only)
    : dimension_(dimension),
      points_(std::move(points)),
      generators_(std::move(generators)),
      mode_(mode),
      constants_only_(constants_only) {
  if (points_.empty()) throw ValidationError("a space needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    if (!index_.emplace(p.id, i).second) throw ValidationError("duplicate point id " + std::to_string(p.id));
    if (p.coords.size() != dimension_)
      throw ValidationError("point " + std::to_string(p.id) + " has " + std::to_string(p.coords.size()) +
                            " coordinates, expected " + std::to_string(dimension_));
    if (!(p.weight > 0.0) || !std::isfinite(p.weight))
      throw ValidationError("point " + std::to_string(p.id) + " has non-positive weight");
    for (double c : p.coords)
      if (!std::isfinite(c)) throw ValidationError("point " + std::to_string(p.id) + " has a non-finite coordinate");
  }
  if (constants_only_) {
    generators_.clear();
    generators_.push_back({"1", "1", Expr::constant(1.0)});
  } else if (generators_.empty()) {
    throw ValidationError("empty generator family; declare constants_only for the constants-only structure");
  }
  for (const auto& g : generators_) {
    if (g.expr.max_slot() >= static_cast<int>(dimension_))
      throw ValidationError("generator '" + g.name + "' uses a coordinate beyond dimension " +
                            std::to_string(dimension_));
  }
  if (mode_.kind == CompareMode::Kind::Quantized) (void)CompareMode::quantized(mode_.eps);
}

std::size_t DiffSpace::index_of(PointId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown point id " + std::to_string(id));
  return it->second;
}

double DiffSpace::total_measure() const {
  double s = 0.0;
  for (const auto& p : points_) s += p.weight;
  return s;
}

double DiffSpace::evaluate(std::size_t generator, std::size_t point_index) const {
  double v = generators_.at(generator).expr.eval(points_.at(point_index).coords);
  if (!std::isfinite(v))
    throw ValidationError("generator '" + generators_[generator].name + "' does not evaluate to a finite value at point " +
                          std::to_string(points_[point_index].id));
  return v;
}

DiffSpace DiffSpace::with_generators(std::vector<GeneratorFunction> generators, bool constants_only) const {
  return DiffSpace(dimension_, points_, std::move(generators), mode_, constants_only);
}

DiffSpace build_space(const SpaceSpec& spec) {
  SymbolTable symbols = SymbolTable::coordinates(spec.dimension);
  std::vector<GeneratorFunction> gens;
  if (!spec.constants_only) {
    for (const auto& g : spec.generators) gens.push_back({g.name, g.expr, Expr::parse(g.expr, symbols)});
  }
  return DiffSpace(spec.dimension, spec.points, std::move(gens), spec.compare_mode, spec.constants_only);
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<std::vector<PointId>> blocks) : blocks_(std::move(blocks)) {
  std::erase_if(blocks_, [](const auto& b) { return b.empty(); });
  for (auto& b : blocks_) std::sort(b.begin(), b.end());
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (PointId id : blocks_[i]) {
      if (!block_of_.emplace(id, i).second)
        throw ValidationError("partition blocks overlap at id " + std::to_string(id));
    }
  }
}

Partition Partition::total(const DiffSpace& space) {
  std::vector<PointId> all;
  for (const auto& p : space.points()) all.push_back(p.id);
  return Partition({all});
}

Partition Partition::discrete(const DiffSpace& space) {
  std::vector<std::vector<PointId>> blocks;
  for (const auto& p : space.points()) blocks.push_back({p.id});
  return Partition(std::move(blocks));
}

std::size_t Partition::block_of(PointId id) const {
  auto it = block_of_.find(id);
  if (it == block_of_.end()) throw ValidationError("id " + std::to_string(id) + " is not in the partition");
  return it->second;
}

bool Partition::refines(const Partition& coarser) const {
  for (const auto& b : blocks_) {
    if (!coarser.contains(b.front())) return false;
    std::size_t target = coarser.block_of(b.front());
    for (PointId id : b)
      if (!coarser.contains(id) || coarser.block_of(id) != target) return false;
  }
  return true;
}

bool Partition::covers(const DiffSpace& space) const {
  if (element_count() != space.size()) return false;
  return std::all_of(space.points().begin(), space.points().end(), [&](const Point& p) { return contains(p.id); });
}

std::vector<std::pair<PointId, PointId>> Partition::pairs() const {
  std::vector<std::pair<PointId, PointId>> out;
  for (const auto& b : blocks_)
    for (PointId x : b)
      for (PointId y : b) out.emplace_back(x, y);
  return out;
}

// ---------------------------------------------------------------------------
// Hausdorff relation and consistency

namespace {

// Grouping key of one generator value. Exact mode compares bit patterns with
// -0.0 folded onto +0.0; quantized mode rounds to the eps grid first, which
// keeps the induced relation transitive.
std::int64_t value_key(double v, const CompareMode& mode) {
  if (mode.kind == CompareMode::Kind::Quantized) return std::llround(v / mode.eps);
  if (v == 0.0) v = 0.0;
  return std::bit_cast<std::int64_t>(v);
}

std::vector<std::int64_t> signature(const DiffSpace& space, std::size_t point_index) {
  std::vector<std::int64_t> key(space.generators().size());
  for (std::size_t g = 0; g < key.size(); ++g) key[g] = value_key(space.evaluate(g, point_index), space.compare_mode());
  return key;
}

void require_cover(const DiffSpace& space, const Partition& rho) {
  if (!rho.covers(space)) throw MismatchError("partition does not cover exactly the ids of the space");
}

}  // namespace

Partition hausdorff_relation(const DiffSpace& space) {
  std::map<std::vector<std::int64_t>, std::vector<PointId>> fibers;
  for (std::size_t i = 0; i < space.size(); ++i) fibers[signature(space, i)].push_back(space.point(i).id);
  std::vector<std::vector<PointId>> blocks;
  blocks.reserve(fibers.size());
  for (auto& [key, ids] : fibers) blocks.push_back(std::move(ids));
  return Partition(std::move(blocks));
}

bool ConsistencyReport::all_consistent() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.consistent; });
}

std::size_t ConsistencyReport::inconsistent_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const Entry& e) { return !e.consistent; }));
}

ConsistencyReport consistent_family(const DiffSpace& space, const Partition& rho) {
  require_cover(space, rho);
  ConsistencyReport report;
  for (std::size_t g = 0; g < space.generators().size(); ++g) {
    ConsistencyReport::Entry entry{space.generators()[g].name, true, std::nullopt};
    for (std::size_t b = 0; b < rho.block_count() && entry.consistent; ++b) {
      const auto& block = rho.blocks()[b];
      std::int64_t first = value_key(space.evaluate(g, space.index_of(block.front())), space.compare_mode());
      for (PointId id : block) {
        if (value_key(space.evaluate(g, space.index_of(id)), space.compare_mode()) != first) {
          entry.consistent = false;
          entry.witness_block = b;
          break;
        }
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Quotient

Quotient quotient(const DiffSpace& space, const Partition& rho) {
  ConsistencyReport report = consistent_family(space, rho);
  std::vector<std::size_t> kept;
  std::vector<std::string> dropped;
  for (std::size_t g = 0; g < report.entries.size(); ++g) {
    if (report.entries[g].consistent) kept.push_back(g);
    else dropped.push_back(report.entries[g].name);
  }

  std::vector<std::size_t> projection(space.size());
  std::vector<Point> qpoints;
  qpoints.reserve(rho.block_count());
  for (std::size_t b = 0; b < rho.block_count(); ++b) {
    const auto& block = rho.blocks()[b];
    Point q;
    q.id = block.front();
    q.weight = 0.0;
    std::size_t rep = space.index_of(block.front());
    for (std::size_t g : kept) q.coords.push_back(space.evaluate(g, rep));
    for (PointId id : block) {
      std::size_t i = space.index_of(id);
      q.weight += space.point(i).weight;
      projection[i] = b;
    }
    qpoints.push_back(std::move(q));
  }

  std::vector<GeneratorFunction> qgens;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    std::string sym = "x" + std::to_string(k + 1);
    qgens.push_back({space.generators()[kept[k]].name, sym, Expr::variable(static_cast<int>(k))});
  }
  bool constants_only = qgens.empty();
  DiffSpace qspace(kept.size(), std::move(qpoints), std::move(qgens), space.compare_mode(), constants_only);
  return Quotient{std::move(qspace), std::move(dropped), std::move(kept), std::move(projection)};
}

std::vector<double> pullback(const Quotient& q, std::size_t quotient_generator) {
  std::vector<double> out(q.projection.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = q.space.evaluate(quotient_generator, q.projection[i]);
  return out;
}

}  // namespace ncspace
