#pragma once

// Majority graphs over items (or over copy ranges of quantitative items) and
// the Schwartz and Smith tournament solutions.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "dembudget/model.hpp"

namespace dembudget {

/// Dense directed graph on vertices 0..n-1 without self-arcs.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t vertex_count)
      : n_(vertex_count), adjacency_(vertex_count * vertex_count, 0) {}

  std::size_t vertexCount() const { return n_; }
  bool hasArc(std::size_t from, std::size_t to) const { return adjacency_[from * n_ + to] != 0; }
  void addArc(std::size_t from, std::size_t to);
  void removeArc(std::size_t from, std::size_t to) { adjacency_[from * n_ + to] = 0; }
  std::size_t arcCount() const;
  std::vector<std::pair<std::size_t, std::size_t>> arcs() const;
  /// Subgraph induced by `keep`, renumbered in the given order.
  Digraph induced(const std::vector<std::size_t>& keep) const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> adjacency_;
};

/// A majority-graph vertex: copies [first, last] of one item. Unit-mode
/// items are the range [1, 1].
struct VertexKey {
  ItemIndex item = 0;
  Count first = 1;
  Count last = 1;

  Count copies() const { return last - first + 1; }
  friend auto operator<=>(const VertexKey&, const VertexKey&) = default;
};

/// Per item, the sorted union of every ballot's cumulative component
/// boundaries; the last entry is the item's quantity.
using SplitPoints = std::vector<std::vector<Count>>;

struct MajorityGraph {
  std::vector<VertexKey> vertices;
  Digraph graph;
};

/// Cumulative copy boundaries of one item in one quantitative ballot.
std::vector<Count> ballotSplitPoints(const OrderedPartition& vote, ItemIndex item);
SplitPoints splitPoints(const Proposal& proposal, const Profile& profile);
/// One vertex per item in unit mode, one per split range in quantitative mode.
std::vector<VertexKey> majorityVertices(const Proposal& proposal, const Profile& profile);

/// Arc (u, w) iff strictly more than half of the ballots rank u above w.
MajorityGraph buildMajorityGraph(const Proposal& proposal, const Profile& profile);
/// Same over a caller-chosen vertex set; each vertex must lie inside one
/// split range.
MajorityGraph buildMajorityGraph(const Proposal& proposal, const Profile& profile,
                                 std::vector<VertexKey> vertices);
/// Adds both arcs for every pair joined by neither.
Digraph weakMajority(const Digraph& strict);
MajorityGraph weakMajorityGraph(const MajorityGraph& strict);

/// Strongly connected components, each sorted, listed in topological order of
/// the condensation (sources first; ties by smallest member).
std::vector<std::vector<std::size_t>> stronglyConnectedComponents(const Digraph& g);
/// Strongly connected components with no arc entering from outside.
std::vector<std::vector<std::size_t>> schwartzComponents(const Digraph& g);
std::vector<std::size_t> schwartzSet(const Digraph& g);
/// Smallest vertex set whose members all have arcs to every outside vertex.
/// Unique when no pair has arcs both ways; otherwise the first smallest
/// closure by vertex index is returned.
std::vector<std::size_t> smithSet(const Digraph& g);

/// Debug export: one "u w" line per arc, using item ids (and copy ranges in
/// quantitative mode).
std::string toEdgeList(const Proposal& proposal, const MajorityGraph& g);
std::string vertexLabel(const Proposal& proposal, const VertexKey& key);

}  // namespace dembudget
