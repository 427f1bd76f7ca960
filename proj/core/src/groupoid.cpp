#include "ncspace/groupoid.hpp"

#include "ncspace/error.hpp"

namespace ncspace {

Groupoid::Groupoid(std::shared_ptr<const DiffSpace> base, Partition partition)
    : base_(std::move(base)), partition_(std::move(partition)) {
  if (!base_) throw ValidationError("groupoid needs a base space");
  if (!partition_.covers(*base_)) throw MismatchError("partition does not cover exactly the ids of the space");
  block_of_index_.resize(base_->size());
  position_.resize(base_->size());
  members_.reserve(partition_.block_count());
  for (std::size_t b = 0; b < partition_.block_count(); ++b) {
    std::vector<std::size_t> idx;
    for (PointId id : partition_.blocks()[b]) {
      std::size_t i = base_->index_of(id);
      block_of_index_[i] = b;
      position_[i] = idx.size();
      idx.push_back(i);
    }
    members_.push_back(std::move(idx));
  }
}

std::size_t Groupoid::arrow_count() const {
  std::size_t n = 0;
  for (const auto& m : members_) n += m.size() * m.size();
  return n;
}

bool Groupoid::contains(const Arrow& a) const {
  return base_->contains(a.src) && base_->contains(a.dst) && partition_.related(a.src, a.dst);
}

ArrowSlot Groupoid::slot(const Arrow& a) const {
  if (!contains(a))
    throw ValidationError("(" + std::to_string(a.src) + "," + std::to_string(a.dst) + ") is not an arrow");
  std::size_t s = base_->index_of(a.src);
  std::size_t d = base_->index_of(a.dst);
  return {block_of_index_[s], position_[s], position_[d]};
}

Arrow Groupoid::arrow(const ArrowSlot& s) const {
  const auto& m = members_.at(s.block);
  return {base_->point(m.at(s.row)).id, base_->point(m.at(s.col)).id};
}

std::vector<Arrow> Groupoid::arrows() const {
  std::vector<Arrow> out;
  out.reserve(arrow_count());
  for (std::size_t b = 0; b < members_.size(); ++b)
    for (std::size_t r = 0; r < members_[b].size(); ++r)
      for (std::size_t c = 0; c < members_[b].size(); ++c) out.push_back(arrow({b, r, c}));
  return out;
}

bool Groupoid::same_as(const Groupoid& other) const {
  return this == &other || (base_ == other.base_ && partition_ == other.partition_);
}

GroupoidPtr build_groupoid(std::shared_ptr<const DiffSpace> space, const Partition& rho) {
  return std::make_shared<const Groupoid>(std::move(space), rho);
}

Arrow compose(const Groupoid& g, const Arrow& a1, const Arrow& a2) {
  if (a1.dst != a2.src)
    throw MismatchError("arrows (" + std::to_string(a1.src) + "," + std::to_string(a1.dst) + ") and (" +
                        std::to_string(a2.src) + "," + std::to_string(a2.dst) + ") are not composable");
  if (!g.contains(a1) || !g.contains(a2)) throw ValidationError("compose: operand is not an arrow of the groupoid");
  return {a1.src, a2.dst};
}

FiberReport fibers(const Groupoid& g, PointId x) {
  std::size_t i = g.base().index_of(x);
  const auto& orbit = g.orbit(g.block_of_index(i));
  FiberReport r;
  for (std::size_t j : orbit) {
    PointId y = g.base().point(j).id;
    r.outgoing.push_back({x, y});
    r.incoming.push_back({y, x});
  }
  for (const Arrow& a : r.outgoing)
    for (const Arrow& b : r.incoming)
      if (a == b) r.isotropy.push_back(a);
  return r;
}

bool is_transitive(const Groupoid& g) { return g.orbit_count() == 1; }

}  // namespace ncspace
