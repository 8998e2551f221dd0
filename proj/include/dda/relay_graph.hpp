// Candidate relaying sets as undirected graphs, and recognition of the fully
// connected relaying networks inside them.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace dda {

using NodeId = std::uint32_t;

/// Node ids, kept sorted ascending when used as a set.
using NodeSet = std::vector<NodeId>;

/// One bit per position in CandidateGraph::node_ids(); the owner's own bit is set.
using NeighborRow = boost::dynamic_bitset<>;

struct Edge {
  NodeId a;
  NodeId b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected connectivity over a candidate relaying set.
///
/// Node ids map to stable positions 0..m-1 in the order given at construction.
/// Each node stores a neighbor row whose bit j is set iff node j shares a
/// bidirectional link with it, or j is the node itself.
class CandidateGraph {
 public:
  CandidateGraph() = default;

  /// Throws DuplicateNode on repeated ids, NodeNotFound for edges touching
  /// unknown ids, InvalidValue for self-loops.
  CandidateGraph(std::vector<NodeId> node_ids, std::span<const Edge> edges);

  /// Node set is the sorted union of edge endpoints.
  static CandidateGraph from_edges(std::span<const Edge> edges);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<NodeId>& node_ids() const noexcept { return ids_; }

  bool contains(NodeId id) const noexcept { return index_.contains(id); }
  std::size_t index_of(NodeId id) const;

  /// Irreflexive: adjacent(a, a) is false.
  bool adjacent(NodeId a, NodeId b) const;

  const NeighborRow& row_at(std::size_t index) const { return rows_.at(index); }

  /// Edges with a < b in index order, each listed once.
  std::vector<Edge> edges() const;

  /// Number of edges with both endpoints inside `subset`.
  std::size_t induced_edge_count(std::span<const NodeId> subset) const;

  /// Sub-graph on `keep`, preserving this graph's relative node order.
  CandidateGraph induced(std::span<const NodeId> keep) const;

 private:
  std::vector<NodeId> ids_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<NeighborRow> rows_;
};

/// Plain-text edge list: one `a b` pair per line, `#` starts a comment.
/// A line holding a single id declares an isolated node.
CandidateGraph read_edge_list(std::istream& in);
CandidateGraph load_edge_list(const std::string& path);
void write_edge_list(std::ostream& out, const CandidateGraph& graph);

NeighborRow build_neighbor_matrix(const CandidateGraph& graph, NodeId node);

/// Popcount of the bitwise AND across all rows (needs at least two rows).
std::size_t d_sum(std::span<const NeighborRow> rows);

enum class SubsetKind { NotRelayingNetwork, ONetwork, SNetwork };

std::string_view to_string(SubsetKind kind) noexcept;

struct SubsetClassification {
  SubsetKind kind = SubsetKind::NotRelayingNetwork;
  std::size_t subset_degree = 0;
  std::size_t d_value = 0;
  /// Degree of the o-network the subset derives from; SNetwork only.
  std::size_t parent_degree = 0;
  /// C(parent_degree, subset_degree); SNetwork only.
  std::uint64_t relevant_s_count = 0;
  /// Exact pairwise adjacency verdict. The D-test alone admits subsets whose
  /// members share enough common neighbors outside the subset.
  bool verified_clique = false;
};

SubsetClassification classify_subset(const CandidateGraph& graph, std::span<const NodeId> subset);

bool is_clique(const CandidateGraph& graph, std::span<const NodeId> subset);

inline constexpr std::size_t kDefaultEnumerationCap = 16;

/// Every clique S with min_degree <= |S| <= max_degree, ordered by size and
/// then lexicographically over the sorted ids. max_degree == 0 means m.
std::vector<NodeSet> enumerate_relaying_networks(const CandidateGraph& graph,
                                                 std::size_t min_degree = 2,
                                                 std::size_t max_degree = 0,
                                                 std::size_t cap = kDefaultEnumerationCap);

std::uint64_t binomial(unsigned n, unsigned k);

/// Sum of C(n, i) for i in [2, n-1]; n >= 3.
std::uint64_t expected_network_count(unsigned n);

/// Sum of C(n, i) for i in [2, n], which also counts the n-degree network itself.
std::uint64_t full_network_count(unsigned n);

}  // namespace dda
