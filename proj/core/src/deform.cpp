#include "ncspace/deform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ncspace/error.hpp"

namespace ncspace {

namespace {

bool same_coordinate(double u, double v, const CompareMode& mode) {
  if (mode.kind == CompareMode::Kind::Quantized) return std::llround(u / mode.eps) == std::llround(v / mode.eps);
  return u == v;
}

bool classes_match_fibers(const ChainLevel& level) {
  const DiffSpace& s = *level.structure;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      bool fiber = true;
      for (std::size_t c = 0; c < level.k && fiber; ++c)
        fiber = same_coordinate(s.point(i).coords[c], s.point(j).coords[c], s.compare_mode());
      if (fiber != level.partition.related(s.point(i).id, s.point(j).id)) return false;
    }
  }
  return true;
}

ChainReport verify(const std::vector<ChainLevel>& levels) {
  ChainReport r;
  for (const auto& level : levels) {
    std::vector<std::size_t> sizes;
    for (const auto& b : level.partition.blocks()) sizes.push_back(b.size());
    r.class_sizes.push_back(std::move(sizes));
    r.classes_are_projection_fibers = r.classes_are_projection_fibers && classes_match_fibers(level);
  }
  r.bottom_total = levels.front().partition.block_count() == 1;
  const auto& top = levels.back().groupoid;
  r.top_diagonal = top->arrow_count() == top->base().size();
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const auto& lo = levels[k];
    const auto& hi = levels[k + 1];
    r.partitions_refine = r.partitions_refine && hi.partition.refines(lo.partition);
    r.block_counts_nondecreasing =
        r.block_counts_nondecreasing && hi.partition.block_count() >= lo.partition.block_count();
    for (const Arrow& a : hi.groupoid->arrows()) {
      if (!lo.groupoid->contains(a)) {
        r.arrows_decreasing = false;
        break;
      }
    }
  }
  return r;
}

void require_level(const AlgebraElement& a, const DeformationChain& chain, std::size_t k) {
  if (k >= chain.size()) throw ValidationError("chain level " + std::to_string(k) + " out of range");
  if (!a.groupoid().same_as(*chain.level(k).groupoid))
    throw MismatchError("element does not live on chain level " + std::to_string(k));
}

}  // namespace

DeformationChain::DeformationChain(std::vector<ChainLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw ValidationError("a deformation chain needs at least one level");
  report_ = verify(levels_);
}

DeformationChain deformation_chain(const DiffSpace& space) {
  std::vector<ChainLevel> levels;
  std::vector<GeneratorFunction> projections;
  for (std::size_t k = 0; k <= space.dimension(); ++k) {
    if (k > 0) {
      std::string sym = "x" + std::to_string(k);
      projections.push_back({"pi" + std::to_string(k), sym, Expr::variable(static_cast<int>(k - 1))});
    }
    auto structure = std::make_shared<const DiffSpace>(space.with_generators(projections, k == 0));
    Partition rho = hausdorff_relation(*structure);
    GroupoidPtr g = build_groupoid(structure, rho);
    levels.push_back({k, std::move(structure), std::move(rho), std::move(g)});
  }
  return DeformationChain(std::move(levels));
}

AlgebraElement restrict(const AlgebraElement& a, const DeformationChain& chain, std::size_t k) {
  require_level(a, chain, k);
  if (k + 1 >= chain.size()) throw ValidationError("cannot restrict past the top level " + std::to_string(chain.top()));
  const Groupoid& from = *chain.level(k).groupoid;
  const GroupoidPtr& to = chain.level(k + 1).groupoid;
  const std::size_t n = from.dimension();
  AlgebraElement r(to, a.has_jets());
  for (std::size_t b = 0; b < to->orbit_count(); ++b) {
    const std::size_t m = to->orbit_size(b);
    auto& rb = r.block(b);
    for (std::size_t row = 0; row < m; ++row) {
      for (std::size_t col = 0; col < m; ++col) {
        ArrowSlot s = from.slot(to->arrow({b, row, col}));
        const std::size_t fm = from.orbit_size(s.block);
        const auto& ab = a.block(s.block);
        rb.value[row * m + col] = ab.value[s.row * fm + s.col];
        if (!a.has_jets()) continue;
        for (std::size_t i = 0; i < n; ++i) {
          rb.d_src[i * m * m + row * m + col] = ab.d_src[i * fm * fm + s.row * fm + s.col];
          rb.d_dst[i * m * m + row * m + col] = ab.d_dst[i * fm * fm + s.row * fm + s.col];
        }
      }
    }
  }
  r.set_symbolic(a.symbolic());
  return r;
}

AlgebraElement restrict_to(const AlgebraElement& a, const DeformationChain& chain, std::size_t from, std::size_t to) {
  if (to < from) throw ValidationError("restriction only goes up the chain");
  require_level(a, chain, from);
  if (to >= chain.size()) throw ValidationError("chain level " + std::to_string(to) + " out of range");
  AlgebraElement cur = a;
  for (std::size_t k = from; k < to; ++k) cur = restrict(cur, chain, k);
  return cur;
}

Defect homomorphism_defect_chain(const AlgebraElement& a, const AlgebraElement& b, const DeformationChain& chain,
                                 std::size_t k) {
  AlgebraElement lhs = restrict(convolve(a, b), chain, k);
  AlgebraElement rhs = convolve(restrict(a, chain, k), restrict(b, chain, k));
  return {max_abs_difference(lhs, rhs), std::max(lhs.max_abs(), rhs.max_abs())};
}

PointwiseReport step_n_pointwise_check(const DeformationChain& chain, const AlgebraElement& a,
                                       const AlgebraElement& b) {
  require_level(a, chain, chain.top());
  require_level(b, chain, chain.top());
  AlgebraElement c = convolve(a, b);
  PointwiseReport r;
  for (const Point& p : a.groupoid().base().points()) {
    const Arrow unit_arrow{p.id, p.id};
    const Complex product = a.value(unit_arrow) * b.value(unit_arrow);
    const Complex got = c.value(unit_arrow);
    r.weighted_defect = std::max(r.weighted_defect, std::abs(got - product * p.weight));
    r.unweighted_defect = std::max(r.unweighted_defect, std::abs(got - product));
    r.scale = std::max(r.scale, std::abs(got));
    if (p.weight != 1.0) r.unit_weights = false;
  }
  return r;
}

}  // namespace ncspace
