#include "arbor/unravel.hpp"

#include <array>
#include <bit>
#include <set>
#include <unordered_set>

#include "arbor/error.hpp"
#include "arbor/jumping.hpp"

namespace arbor {

namespace {

struct SlotKeyHash {
  std::size_t operator()(const std::array<std::uint64_t, 3>& k) const noexcept {
    return static_cast<std::size_t>(hash_words({k[0], k[1], k[2]}));
  }
};

constexpr std::uint64_t kFreshTag = 0xF8E5;
constexpr std::uint64_t kCachedTag = 0xCAC4E;

class Unraveler {
 public:
  Unraveler(const ClusterModel& model, const RandomnessPlan& plan, const UnravelOptions& options)
      : model_(model),
        h_(model.hierarchy()),
        g_(model.graph()),
        plan_(plan),
        options_(options),
        counts_(h_.node_count(), 0),
        unvisited_(h_.node_count(), 0),
        seen_(g_.vertex_count(), false),
        remaining_(g_.vertex_count()) {
    for (NodeId s = 0; s < h_.node_count(); ++s) unvisited_[s] = h_.node(s).members.size();
  }

  UnravelResult run(VertexId start) {
    const NodeId top = h_.root();
    std::uint64_t id = 0;
    if (options_.mode == CacheMode::Cached) {
      const std::uint64_t slot = plan_.below(StreamDomain::TopSlot, 0, 0, options_.multiplicity);
      used_.insert({(std::uint64_t{top} << 32) | start, kNoEdge, slot});
      id = hash_words({top, start, kNoEdge, slot, kCachedTag});
    } else {
      id = hash_words({top, start, kFreshTag});
    }
    streams_.insert(id);
    if (h_.node(top).is_leaf()) {
      visit({top, start, kNoEdge, RecordKind::Leaf, id});
    } else {
      expand(top, start, kNoEdge, id);
    }
    result_.final_counts = counts_;
    if (result_.count_at_cover.empty()) result_.count_at_cover = counts_;
    result_.coverage.covered = covered_;
    result_.transcript.conditioning_edge = kNoEdge;
    return std::move(result_);
  }

 private:
  void visit(const SojournRecord& r) {
    auto& records = result_.transcript.records;
    records.push_back(r);
    const std::size_t index = records.size() - 1;
    if (!seen_[r.entry]) {
      seen_[r.entry] = true;
      for (NodeId s = h_.leaf(r.entry); s != kNoNode; s = h_.node(s).parent) --unvisited_[s];
      if (--remaining_ == 0 && !covered_ && !failed_) {
        covered_ = true;
        result_.coverage.cover_record = index;
        result_.count_at_cover = counts_;
        if (options_.stop_at_cover) stop_ = true;
      }
    }
    if (r.kind != RecordKind::Leaf && !covered_ && !failed_ && unvisited_[r.node] > 0) {
      failed_ = true;
      result_.coverage.hidden_record = index;
      if (options_.stop_at_cover) stop_ = true;
    }
  }

  std::uint64_t child_stream(NodeId c, VertexId entry, EdgeId exit, std::uint64_t emitter, std::uint64_t t) {
    std::uint64_t id = 0;
    if (options_.mode == CacheMode::Fresh) {
      id = hash_words({emitter, t, kFreshTag});
    } else {
      const std::uint64_t slot = plan_.below(StreamDomain::SlotChoice, emitter, t, options_.multiplicity);
      if (used_.insert({(std::uint64_t{c} << 32) | entry, exit, slot}).second) {
        id = hash_words({c, entry, exit, slot, kCachedTag});
      } else {
        ++result_.replacements;
        id = hash_words({emitter, t, kFreshTag});
      }
    }
    if (!streams_.insert(id).second) ++result_.duplicates_after;
    return id;
  }

  void expand(NodeId s, VertexId v, EdgeId e_end, std::uint64_t stream) {
    ++result_.sojourns;
    const std::uint64_t budget = options_.budget;
    VertexId cur = v;
    for (std::uint64_t t = 0;; ++t) {
      const EdgeId f = model_.next(s, e_end, cur, plan_.uniform(StreamDomain::Walk, stream, t));
      const NodeId child = h_.child_containing(s, cur);
      if (h_.node(child).is_leaf()) {
        visit({child, cur, f, RecordKind::Leaf, stream});
      } else if (counts_[child] >= budget) {
        visit({child, cur, f, RecordKind::Opaque, stream});
      } else {
        expand(child, cur, f, child_stream(child, cur, f, stream, t));
      }
      if (stop_ || f == e_end) return;
      ++counts_[s];
      cur = g_.edge(f).dst;
      if (counts_[s] >= budget) {
        visit({s, cur, e_end, RecordKind::Opaque, stream});
        return;
      }
    }
  }

  const ClusterModel& model_;
  const Hierarchy& h_;
  const WeightedDigraph& g_;
  RandomnessPlan plan_;
  UnravelOptions options_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::size_t> unvisited_;
  std::vector<bool> seen_;
  std::size_t remaining_;
  bool covered_ = false;
  bool failed_ = false;
  bool stop_ = false;
  std::unordered_set<std::array<std::uint64_t, 3>, SlotKeyHash> used_;
  std::unordered_set<std::uint64_t> streams_;
  UnravelResult result_;
};

}  // namespace

UnravelResult unravel(const ClusterModel& model, VertexId start, const RandomnessPlan& plan,
                      const UnravelOptions& options) {
  if (options.budget == 0 || options.multiplicity == 0) fail(ErrorCode::InvalidArgument, "budget and multiplicity must be positive");
  if (!model.graph().valid_vertex(start)) fail(ErrorCode::InvalidArgument, "start is not a vertex");
  return Unraveler(model, plan, options).run(start);
}

AllEdges::AllEdges(const ClusterModel& model, const RandomnessPlan& plan, std::uint64_t budget,
                   std::uint64_t multiplicity)
    : model_(model), plan_(plan), budget_(budget), multiplicity_(multiplicity) {
  if (budget == 0 || multiplicity == 0) fail(ErrorCode::InvalidArgument, "budget and multiplicity must be positive");
}

const Transcript& AllEdges::answer(NodeId s, VertexId v, EdgeId e, std::uint32_t depth, std::uint64_t slot) {
  const std::uint32_t l = std::bit_ceil(std::max<std::uint32_t>(depth, 1));
  const Key key{s, v, e, l, slot};
  if (auto it = memo_.find(key); it != memo_.end()) return *it->second;

  auto result = std::make_unique<Transcript>();
  if (l == 1) {
    *result = jumping_edges(model_, s, v, e, budget_, plan_, hash_words({s, v, e, slot, 0xA11}));
  } else {
    const Transcript base = answer(s, v, e, l / 2, slot);
    bool frontier = false;
    for (const auto& r : base.records) frontier = frontier || r.kind == RecordKind::Frontier;
    if (!frontier) {
      *result = base;
    } else {
      const std::uint64_t chooser = hash_words({s, v, e, l, slot, 0xC40});
      std::set<std::tuple<NodeId, VertexId, EdgeId, std::uint64_t>> used;
      Transcript spliced;
      spliced.conditioning_edge = e;
      for (std::size_t idx = 0; idx < base.records.size(); ++idx) {
        const SojournRecord& r = base.records[idx];
        if (r.kind != RecordKind::Frontier) {
          spliced.records.push_back(r);
          continue;
        }
        std::uint64_t j = plan_.below(StreamDomain::SlotChoice, chooser, idx, multiplicity_);
        if (!used.insert({r.node, r.entry, r.exit, j}).second) {
          // Fresh slots live outside [0, M).
          ++stats_.replacements;
          j = (std::uint64_t{1} << 63) | hash_words({chooser, idx});
        }
        const Transcript& sub = answer(r.node, r.entry, r.exit, l / 2, j);
        spliced.records.insert(spliced.records.end(), sub.records.begin(), sub.records.end());
      }
      *result = trim_transcript(model_.graph(), model_.hierarchy(), spliced, s, budget_);
    }
  }
  ++stats_.answers_computed;
  return *memo_.emplace(key, std::move(result)).first->second;
}

Transcript all_edges(const ClusterModel& model, NodeId s, VertexId v, EdgeId e, std::uint64_t budget,
                     std::uint32_t depth, const RandomnessPlan& plan, std::uint64_t multiplicity) {
  AllEdges engine(model, plan, budget, multiplicity);
  return engine.answer(s, v, e, depth, 0);
}

}  // namespace arbor
