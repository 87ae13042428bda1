#include "arbor/transcript.hpp"

#include <algorithm>

namespace arbor {

std::vector<EdgeId> extract_first_visits(const Transcript& t, VertexId start, std::size_t vertex_count) {
  std::vector<EdgeId> first(vertex_count, kNoEdge);
  std::vector<bool> seen(vertex_count, false);
  if (start < vertex_count) seen[start] = true;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const VertexId v = t.records[i].entry;
    if (seen[v]) continue;
    seen[v] = true;
    if (i > 0) first[v] = t.records[i - 1].exit;
  }
  return first;
}

CoverageReport check_coverage(const Hierarchy& h, const Transcript& t) {
  CoverageReport report;
  const std::size_t n = h.vertex_count();
  std::vector<bool> seen(n, false);
  std::size_t remaining = n;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const SojournRecord& r = t.records[i];
    if (!seen[r.entry]) {
      seen[r.entry] = true;
      if (--remaining == 0) {
        report.covered = true;
        report.cover_record = i;
        return report;
      }
    }
    if (r.kind != RecordKind::Leaf) {
      for (VertexId v : h.node(r.node).members) {
        if (!seen[v]) {
          report.hidden_record = i;
          return report;
        }
      }
    }
  }
  return report;
}

std::string validate_transcript(const WeightedDigraph& g, const Hierarchy& h, const Transcript& t) {
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const SojournRecord& r = t.records[i];
    const std::string at = "record " + std::to_string(i) + ": ";
    if (r.node >= h.node_count() || !g.valid_vertex(r.entry)) return at + "bad ids";
    if (!h.contains(r.node, r.entry)) return at + "entry outside its node";
    const bool leaf = h.node(r.node).is_leaf();
    if (leaf != (r.kind == RecordKind::Leaf)) return at + "kind does not match node";
    if (r.exit == kNoEdge) {
      if (i + 1 != t.records.size()) return at + "missing exit before the end";
      continue;
    }
    if (r.exit >= g.edge_count()) return at + "bad exit id";
    const Edge& e = g.edge(r.exit);
    if (!h.contains(r.node, e.src) || h.contains(r.node, e.dst)) return at + "exit does not leave the node";
    if (leaf && e.src != r.entry) return at + "leaf exit does not start at the entry";
    if (i + 1 < t.records.size() && t.records[i + 1].entry != e.dst) return at + "next record does not start at the exit head";
  }
  return {};
}

std::vector<std::uint64_t> jumping_counts(const WeightedDigraph& g, const Hierarchy& h, const Transcript& t) {
  std::vector<std::uint64_t> counts(h.node_count(), 0);
  for (const SojournRecord& r : t.records) {
    if (r.exit != kNoEdge) ++counts[h.jumping_node(r.exit)];
  }
  (void)g;
  return counts;
}

namespace {

class Trimmer {
 public:
  Trimmer(const WeightedDigraph& g, const Hierarchy& h, const std::vector<SojournRecord>& in, std::uint64_t budget)
      : g_(g), h_(h), in_(in), budget_(budget), counts_(h.node_count(), 0) {}

  std::vector<SojournRecord> run(NodeId top) {
    while (pos_ < in_.size()) parse(top);
    return std::move(out_);
  }

 private:
  bool leaves(NodeId s, EdgeId e) const { return e == kNoEdge || !h_.contains(s, g_.edge(e).dst); }

  /// Collapses the rest of the current sojourn of s, entered at `entry`.
  void collapse(NodeId s, VertexId entry, std::uint64_t emitter) {
    std::size_t j = pos_;
    while (j < in_.size() && !leaves(s, in_[j].exit)) ++j;
    const EdgeId exit = j < in_.size() ? in_[j].exit : kNoEdge;
    out_.push_back({s, entry, exit, RecordKind::Opaque, emitter});
    pos_ = std::min(j + 1, in_.size());
  }

  void parse(NodeId s) {
    const SojournRecord& first = in_[pos_];
    if (first.node == s || h_.node(s).is_leaf()) {
      out_.push_back(first);
      ++pos_;
      return;
    }
    if (counts_[s] >= budget_) {
      collapse(s, first.entry, first.emitter);
      return;
    }
    while (pos_ < in_.size()) {
      const SojournRecord& r = in_[pos_];
      if (r.node == s) {  // terminal marker of this sojourn
        out_.push_back(r);
        ++pos_;
        return;
      }
      const NodeId child = h_.child_containing(s, r.entry);
      if (r.node == child) {
        out_.push_back(r);
        ++pos_;
      } else {
        parse(child);
      }
      const EdgeId f = out_.back().exit;
      if (leaves(s, f)) return;
      if (++counts_[s] >= budget_) {
        if (pos_ < in_.size()) collapse(s, g_.edge(f).dst, out_.back().emitter);
        return;
      }
    }
  }

  const WeightedDigraph& g_;
  const Hierarchy& h_;
  const std::vector<SojournRecord>& in_;
  std::uint64_t budget_;
  std::vector<std::uint64_t> counts_;
  std::vector<SojournRecord> out_;
  std::size_t pos_ = 0;
};

}  // namespace

Transcript trim_transcript(const WeightedDigraph& g, const Hierarchy& h, const Transcript& t, NodeId top,
                           std::uint64_t budget) {
  Transcript out;
  out.conditioning_edge = t.conditioning_edge;
  out.records = Trimmer(g, h, t.records, budget).run(top);
  return out;
}

std::string format_transcript(const Hierarchy& h, const Transcript& t) {
  std::string out;
  for (const SojournRecord& r : t.records) {
    const auto& members = h.node(r.node).members;
    out += '{';
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(members[i]);
    }
    out += "}@" + std::to_string(r.entry);
    if (r.kind == RecordKind::Frontier) out += "+";
    if (r.kind == RecordKind::Opaque) out += "*";
    out += r.exit == kNoEdge ? std::string(" .") : " e" + std::to_string(r.exit);
    out += '\n';
  }
  return out;
}

}  // namespace arbor
