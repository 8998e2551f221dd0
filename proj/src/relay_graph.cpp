#include "dda/relay_graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dda/error.hpp"

namespace dda {

CandidateGraph::CandidateGraph(std::vector<NodeId> node_ids, std::span<const Edge> edges)
    : ids_(std::move(node_ids)) {
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(Errc::DuplicateNode, "node " + std::to_string(ids_[i]) + " listed twice");
    }
  }
  rows_.assign(ids_.size(), NeighborRow(ids_.size()));
  for (std::size_t i = 0; i < ids_.size(); ++i) rows_[i].set(i);
  for (const Edge& e : edges) {
    if (e.a == e.b) {
      throw Error(Errc::InvalidValue, "self-loop on node " + std::to_string(e.a));
    }
    const std::size_t ia = index_of(e.a);
    const std::size_t ib = index_of(e.b);
    rows_[ia].set(ib);
    rows_[ib].set(ia);
  }
}

CandidateGraph CandidateGraph::from_edges(std::span<const Edge> edges) {
  std::vector<NodeId> ids;
  ids.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    ids.push_back(e.a);
    ids.push_back(e.b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return CandidateGraph(std::move(ids), edges);
}

std::size_t CandidateGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(Errc::NodeNotFound, "node " + std::to_string(id) + " is not in the graph");
  }
  return it->second;
}

bool CandidateGraph::adjacent(NodeId a, NodeId b) const {
  if (a == b) return false;
  return rows_[index_of(a)].test(index_of(b));
}

std::vector<Edge> CandidateGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    for (std::size_t j = i + 1; j < ids_.size(); ++j) {
      if (rows_[i].test(j)) out.push_back({ids_[i], ids_[j]});
    }
  }
  return out;
}

std::size_t CandidateGraph::induced_edge_count(std::span<const NodeId> subset) const {
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (NodeId id : subset) idx.push_back(index_of(id));
  std::size_t count = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] != idx[j] && rows_[idx[i]].test(idx[j])) ++count;
    }
  }
  return count;
}

CandidateGraph CandidateGraph::induced(std::span<const NodeId> keep) const {
  NeighborRow mask(ids_.size());
  for (NodeId id : keep) mask.set(index_of(id));
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (mask.test(i)) ids.push_back(ids_[i]);
  }
  std::vector<Edge> kept;
  for (const Edge& e : edges()) {
    if (mask.test(index_of(e.a)) && mask.test(index_of(e.b))) kept.push_back(e);
  }
  return CandidateGraph(std::move(ids), kept);
}

CandidateGraph read_edge_list(std::istream& in) {
  std::vector<NodeId> ids;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  auto parse_id = [&](const std::string& tok) -> NodeId {
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty() || tok[0] == '-' || value > UINT32_MAX) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": bad node id '" + tok + "'");
    }
    return static_cast<NodeId>(value);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> toks;
    for (std::string tok; fields >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() > 2) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'a b'");
    }
    const NodeId a = parse_id(toks[0]);
    ids.push_back(a);
    if (toks.size() == 2) {
      const NodeId b = parse_id(toks[1]);
      ids.push_back(b);
      edges.push_back({a, b});
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return CandidateGraph(std::move(ids), edges);
}

CandidateGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const CandidateGraph& graph) {
  std::vector<bool> touched(graph.size(), false);
  for (const Edge& e : graph.edges()) {
    out << e.a << ' ' << e.b << '\n';
    touched[graph.index_of(e.a)] = true;
    touched[graph.index_of(e.b)] = true;
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (!touched[i]) out << graph.node_ids()[i] << '\n';
  }
}

NeighborRow build_neighbor_matrix(const CandidateGraph& graph, NodeId node) {
  return graph.row_at(graph.index_of(node));
}

std::size_t d_sum(std::span<const NeighborRow> rows) {
  if (rows.size() < 2) {
    throw Error(Errc::DimensionMismatch, "D needs at least two neighbor rows");
  }
  NeighborRow acc = rows.front();
  for (const NeighborRow& r : rows.subspan(1)) {
    if (r.size() != acc.size()) {
      throw Error(Errc::DimensionMismatch, "neighbor rows differ in length");
    }
    acc &= r;
  }
  return acc.count();
}

std::string_view to_string(SubsetKind kind) noexcept {
  switch (kind) {
    case SubsetKind::NotRelayingNetwork: return "not-relaying-network";
    case SubsetKind::ONetwork: return "o-network";
    case SubsetKind::SNetwork: return "s-network";
  }
  return "?";
}

namespace {

std::vector<std::size_t> distinct_indices(const CandidateGraph& graph, std::span<const NodeId> subset) {
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (NodeId id : subset) idx.push_back(graph.index_of(id));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

}  // namespace

bool is_clique(const CandidateGraph& graph, std::span<const NodeId> subset) {
  const auto idx = distinct_indices(graph, subset);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (!graph.row_at(idx[i]).test(idx[j])) return false;
    }
  }
  return true;
}

SubsetClassification classify_subset(const CandidateGraph& graph, std::span<const NodeId> subset) {
  const auto idx = distinct_indices(graph, subset);
  if (idx.size() < 2) {
    throw Error(Errc::DegreeTooSmall, "relaying networks need at least two nodes");
  }
  std::vector<NeighborRow> rows;
  rows.reserve(idx.size());
  for (std::size_t i : idx) rows.push_back(graph.row_at(i));

  SubsetClassification c;
  c.subset_degree = idx.size();
  c.d_value = d_sum(rows);
  if (c.d_value < c.subset_degree) {
    c.kind = SubsetKind::NotRelayingNetwork;
  } else if (c.d_value == c.subset_degree) {
    c.kind = SubsetKind::ONetwork;
  } else {
    c.kind = SubsetKind::SNetwork;
    c.parent_degree = c.d_value;
    c.relevant_s_count = binomial(static_cast<unsigned>(c.parent_degree),
                                  static_cast<unsigned>(c.subset_degree));
  }
  c.verified_clique = is_clique(graph, subset);
  return c;
}

std::vector<NodeSet> enumerate_relaying_networks(const CandidateGraph& graph, std::size_t min_degree,
                                                 std::size_t max_degree, std::size_t cap) {
  if (min_degree < 2) {
    throw Error(Errc::DegreeTooSmall, "minimum relaying network degree is 2");
  }
  const std::size_t m = graph.size();
  if (cap > 63) throw Error(Errc::InvalidValue, "enumeration cap above 63 nodes is not supported");
  if (m > cap) {
    throw Error(Errc::CandidateSetTooLarge,
                std::to_string(m) + " candidates exceed the enumeration cap of " + std::to_string(cap));
  }
  if (max_degree == 0 || max_degree > m) max_degree = m;
  std::vector<NodeSet> out;
  if (min_degree > max_degree) return out;

  // Neighbor masks without the self-bit, for the backtracking extension step.
  std::vector<std::uint64_t> adj(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && graph.row_at(i).test(j)) adj[i] |= std::uint64_t{1} << j;
    }
  }

  std::vector<std::size_t> members;
  auto extend = [&](auto&& self, std::uint64_t candidates) -> void {
    if (members.size() >= min_degree) {
      NodeSet s;
      s.reserve(members.size());
      for (std::size_t i : members) s.push_back(graph.node_ids()[i]);
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
    }
    if (members.size() == max_degree) return;
    while (candidates != 0) {
      const auto next = static_cast<std::size_t>(std::countr_zero(candidates));
      candidates &= candidates - 1;
      members.push_back(next);
      self(self, candidates & adj[next]);
      members.pop_back();
    }
  };
  for (std::size_t i = 0; i < m; ++i) {
    members.assign(1, i);
    const std::uint64_t higher = (i + 1 >= 64) ? 0 : (~std::uint64_t{0} << (i + 1));
    extend(extend, adj[i] & higher);
  }

  std::sort(out.begin(), out.end(), [](const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t expected_network_count(unsigned n) {
  if (n < 3) throw Error(Errc::DegreeTooSmall, "network count needs n >= 3");
  std::uint64_t total = 0;
  for (unsigned i = 2; i + 1 <= n; ++i) total += binomial(n, i);
  return total;
}

std::uint64_t full_network_count(unsigned n) {
  if (n < 2) throw Error(Errc::DegreeTooSmall, "network count needs n >= 2");
  std::uint64_t total = 0;
  for (unsigned i = 2; i <= n; ++i) total += binomial(n, i);
  return total;
}

}  // namespace dda
