#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/graph.hpp"
#include "arbor/hierarchy.hpp"

namespace arbor {

/// How much of a sojourn is visible.
enum class RecordKind : std::uint8_t {
  Leaf,      // a single vertex; the walk is fully visible here
  Frontier,  // an internal node left unexpanded at the current depth
  Opaque,    // an internal node whose budget is spent; its exit is known, its inside is not
};

/// One stay of the walk inside a hierarchy node: entered at `entry`, left
/// through `exit` (kNoEdge when the transcript ends inside it).
struct SojournRecord {
  NodeId node = kNoNode;
  VertexId entry = kNoVertex;
  EdgeId exit = kNoEdge;
  RecordKind kind = RecordKind::Leaf;
  std::uint64_t emitter = 0;  // stream id of the sojourn expansion that produced it

  friend bool operator==(const SojournRecord&, const SojournRecord&) = default;
};

/// The alternating sequence node_1, e_1, node_2, e_2, ... of a partially
/// expanded walk. head(e_i) is the entry of record i+1.
struct Transcript {
  std::vector<SojournRecord> records;
  EdgeId conditioning_edge = kNoEdge;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// For each vertex first entered in t (other than start), the edge entering
/// it; kNoEdge elsewhere. Entries of every record count as visits.
std::vector<EdgeId> extract_first_visits(const Transcript& t, VertexId start, std::size_t vertex_count);

struct CoverageReport {
  bool covered = false;
  /// Index of the record at which the last vertex was first entered.
  std::size_t cover_record = 0;
  /// Index of the first unexpanded record hiding an unvisited vertex, if any.
  std::size_t hidden_record = SIZE_MAX;
};

/// The first visits in t are those of the underlying walk iff every vertex is
/// entered before any unexpanded record that contains an unvisited vertex.
CoverageReport check_coverage(const Hierarchy& h, const Transcript& t);

/// Empty string when t is a legal walk fragment in g under h, else the first problem.
std::string validate_transcript(const WeightedDigraph& g, const Hierarchy& h, const Transcript& t);

/// Re-parses t as nested sojourns of `top` in time order and caps the number
/// of jumping edges of every node at budget: once a node has emitted budget
/// jumping edges, the rest of its current sojourn and all later sojourns
/// collapse into single Opaque records.
Transcript trim_transcript(const WeightedDigraph& g, const Hierarchy& h, const Transcript& t, NodeId top,
                           std::uint64_t budget);

/// Jumping-edge count per node over the visible edges of t.
std::vector<std::uint64_t> jumping_counts(const WeightedDigraph& g, const Hierarchy& h, const Transcript& t);

std::string format_transcript(const Hierarchy& h, const Transcript& t);

}  // namespace arbor
