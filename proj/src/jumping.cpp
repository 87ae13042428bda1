#include "arbor/jumping.hpp"

#include <algorithm>
#include <bit>

#include "arbor/error.hpp"

namespace arbor {

EndTable::EndTable(const ClusterModel& model, NodeId s, EdgeId e_end, const RandomnessPlan& plan,
                   std::uint64_t stream, std::uint64_t length)
    : model_(model), node_(s), e_end_(e_end), plan_(plan), stream_(stream), length_(std::bit_ceil(std::max<std::uint64_t>(length, 1))) {
  members_ = model.hierarchy().node(s).members;
  absorbed_ = members_.size();
  const std::size_t states = absorbed_ + 1;

  std::vector<std::uint32_t> base(length_ * states);
  for (std::uint64_t t = 0; t < length_; ++t) {
    for (std::uint32_t x = 0; x < states; ++x) base[t * states + x] = step(x, t);
  }
  levels_.push_back(std::move(base));
  for (std::uint64_t block = 2; block <= length_; block *= 2) {
    const auto& prev = levels_.back();
    const std::uint64_t count = length_ / block;
    std::vector<std::uint32_t> cur(count * states);
    for (std::uint64_t j = 0; j < count; ++j) {
      for (std::uint32_t x = 0; x < states; ++x) {
        // End(x, t, 2l) = End(End(x, t, l), t + l, l)
        const std::uint32_t mid = prev[(2 * j) * states + x];
        cur[j * states + x] = prev[(2 * j + 1) * states + mid];
      }
    }
    levels_.push_back(std::move(cur));
  }
}

std::uint32_t EndTable::state_of(VertexId v) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), v);
  if (it == members_.end() || *it != v) fail(ErrorCode::InvalidArgument, "vertex is outside the cluster");
  return static_cast<std::uint32_t>(it - members_.begin());
}

std::uint32_t EndTable::step(std::uint32_t state, std::uint64_t t) const {
  if (state == absorbed_) return state;
  // States the conditioned walk never reaches stay put.
  if (!model_.admissible(node_, e_end_, members_[state])) return state;
  const EdgeId f = model_.next(node_, e_end_, members_[state], plan_.uniform(StreamDomain::Walk, stream_, t));
  if (f == e_end_) return static_cast<std::uint32_t>(absorbed_);
  return state_of(model_.graph().edge(f).dst);
}

std::uint32_t EndTable::end(std::uint32_t state, std::uint64_t t, std::size_t level) const {
  const std::size_t states = absorbed_ + 1;
  return levels_[level][(t >> level) * states + state];
}

std::vector<std::uint32_t> EndTable::trajectory(std::uint32_t state) const {
  std::vector<std::uint32_t> at(length_ + 1);
  at[0] = state;
  // Fill block starts from the longest block down.
  for (std::size_t level = levels_.size(); level-- > 0;) {
    const std::uint64_t block = std::uint64_t{1} << level;
    for (std::uint64_t t = 0; t + block <= length_; t += 2 * block) at[t + block] = end(at[t], t, level);
  }
  at.pop_back();
  return at;
}

Transcript jumping_edges(const ClusterModel& model, NodeId s, VertexId v0, EdgeId e_end, std::uint64_t budget,
                         const RandomnessPlan& plan, std::uint64_t stream, JumpStrategy strategy) {
  const Hierarchy& h = model.hierarchy();
  if (h.node(s).is_leaf()) fail(ErrorCode::InvalidArgument, "a leaf has no jumping edges");
  Transcript out;
  out.conditioning_edge = e_end;

  auto emit = [&](VertexId cur, EdgeId f) {
    const NodeId child = h.child_containing(s, cur);
    const RecordKind kind = h.node(child).is_leaf() ? RecordKind::Leaf : RecordKind::Frontier;
    out.records.push_back({child, cur, f, kind, stream});
  };

  if (strategy == JumpStrategy::Sequential) {
    VertexId cur = v0;
    for (std::uint64_t t = 0; t < budget; ++t) {
      const EdgeId f = model.next(s, e_end, cur, plan.uniform(StreamDomain::Walk, stream, t));
      emit(cur, f);
      if (f == e_end) return out;
      cur = model.graph().edge(f).dst;
    }
    out.records.push_back({s, cur, e_end, RecordKind::Opaque, stream});
    return out;
  }

  if (budget == 0) {
    out.records.push_back({s, v0, e_end, RecordKind::Opaque, stream});
    return out;
  }
  const EndTable table(model, s, e_end, plan, stream, budget);
  const auto states = table.trajectory(table.state_of(v0));
  for (std::uint64_t t = 0; t < budget; ++t) {
    const VertexId cur = table.vertex_of(states[t]);
    const EdgeId f = model.next(s, e_end, cur, plan.uniform(StreamDomain::Walk, stream, t));
    emit(cur, f);
    if (f == e_end) return out;
    if (t + 1 == budget) {
      out.records.push_back({s, model.graph().edge(f).dst, e_end, RecordKind::Opaque, stream});
    }
  }
  return out;
}

}  // namespace arbor
