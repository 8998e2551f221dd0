#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>

#include "dda/error.hpp"
#include "dda/sim.hpp"
#include "random.hpp"

namespace dda {

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::Dda: return "DDA";
    case Scheme::Exor: return "ExOR-style";
    case Scheme::Soar: return "SOAR-style";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "dda") return Scheme::Dda;
  if (lower == "exor" || lower == "exor-style") return Scheme::Exor;
  if (lower == "soar" || lower == "soar-style") return Scheme::Soar;
  throw Error(Errc::UnknownScheme, "unknown scheme '" + std::string(text) + "'");
}

std::string_view to_string(DropCause cause) noexcept {
  switch (cause) {
    case DropCause::QueueOverflow: return "queue_overflow";
    case DropCause::RetryExhausted: return "retry_exhausted";
    case DropCause::NoCandidate: return "no_candidate";
    case DropCause::TtlExpired: return "ttl_expired";
    case DropCause::DuplicateDiscard: return "duplicate_discard";
  }
  return "?";
}

void validate(const SimParams& p) {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw Error(Errc::InvalidValue, std::string(field) + " is out of range");
  };
  require(p.area_width_m > 0, "area_width_m");
  require(p.area_height_m > 0, "area_height_m");
  require(p.radio_range_m > 0, "radio_range_m");
  require(p.data_rate_bps > 0, "data_rate_bps");
  require(p.packet_size_bytes > 0, "packet_size_bytes");
  require(p.cbr_interval_s > 0, "cbr_interval_s");
  require(p.beacon_interval_s > 0, "beacon_interval_s");
  require(p.queue_cap > 0, "queue_cap");
  require(p.slot_ms > 0, "slot_ms");
  require(p.max_retries >= 0, "max_retries");
  require(p.ttl_hops > 0, "ttl_hops");
  require(p.sim_duration_s > 0, "sim_duration_s");
  require(p.drain_s >= 0, "drain_s");
  require(p.k_max > 0, "k_max");
  require(p.pdr_gamma > 0, "pdr_gamma");
  require(p.pdr_floor > 0 && p.pdr_floor < 1, "pdr_floor");
  require(p.soar_corridor >= 0, "soar_corridor");
  require(p.dda.candidate_cap >= 2, "dda_candidate_cap");
}

double link_pdr(double distance, double range, double gamma, double p_floor) {
  if (distance > range) return 0.0;
  return std::max(p_floor, 1.0 - std::pow(distance / range, gamma));
}

World::World(std::vector<Position> positions, SimParams params)
    : positions_(std::move(positions)), params_(std::move(params)) {
  const std::size_t n = positions_.size();
  pdr_.assign(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = std::hypot(positions_[a].x - positions_[b].x, positions_[a].y - positions_[b].y);
      const double v = link_pdr(d, params_.radio_range_m, params_.pdr_gamma, params_.pdr_floor);
      pdr_[a * n + b] = v;
      pdr_[b * n + a] = v;
    }
  }
  index_neighbors();
}

World::World(std::vector<Position> positions, std::vector<double> link_pdr, SimParams params)
    : positions_(std::move(positions)), pdr_(std::move(link_pdr)), params_(std::move(params)) {
  const std::size_t n = positions_.size();
  if (pdr_.size() != n * n) throw Error(Errc::DimensionMismatch, "link matrix must be n x n");
  for (std::size_t a = 0; a < n; ++a) {
    pdr_[a * n + a] = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double v = pdr_[a * n + b];
      if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::InvalidProbability, "link ratio outside [0, 1]");
      if (v != pdr_[b * n + a]) throw Error(Errc::InvalidValue, "link matrix must be symmetric");
    }
  }
  index_neighbors();
}

void World::index_neighbors() {
  const std::size_t n = positions_.size();
  neighbors_.assign(n, {});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (pdr_[a * n + b] > 0.0) neighbors_[a].push_back(static_cast<NodeId>(b));
    }
  }
}

CandidateGraph World::connectivity() const {
  std::vector<NodeId> ids(size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
  std::vector<Edge> edges;
  for (NodeId a = 0; a < size(); ++a) {
    for (NodeId b : neighbors_[a]) {
      if (a < b) edges.push_back({a, b});
    }
  }
  return CandidateGraph(std::move(ids), edges);
}

World build_world(const SimParams& params, std::uint64_t seed) {
  validate(params);
  if (params.node_count < 2) throw Error(Errc::TooFewNodes, "a world needs at least two nodes");
  auto rng = detail::make_rng(seed, 0x574f524cULL);  // "WORL"
  std::vector<Position> pos(params.node_count);
  for (Position& p : pos) {
    p.x = detail::unit(rng) * params.area_width_m;
    p.y = detail::unit(rng) * params.area_height_m;
  }
  return World(std::move(pos), params);
}

void write_positions_csv(std::ostream& out, const World& world) {
  out << "node,x,y\n";
  char buf[96];
  for (std::size_t i = 0; i < world.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", i, world.positions()[i].x, world.positions()[i].y);
    out << buf;
  }
}

std::vector<double> etx_to(const World& world, NodeId destination) {
  if (destination >= world.size()) throw Error(Errc::NodeNotFound, "destination outside the world");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(world.size(), inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  dist[destination] = 0.0;
  frontier.push({0.0, destination});
  while (!frontier.empty()) {
    auto [d, u] = frontier.top();
    frontier.pop();
    if (d > dist[u]) continue;
    for (NodeId v : world.neighbors(u)) {
      const double nd = d + 1.0 / world.pdr(u, v);
      if (nd < dist[v]) {
        dist[v] = nd;
        frontier.push({nd, v});
      }
    }
  }
  return dist;
}

std::vector<RelayProfile> candidate_set(const World& world, NodeId sender, NodeId destination,
                                        std::size_t k_max, std::span<const double> etx) {
  if (sender == destination) throw Error(Errc::InvalidValue, "sender equals destination");
  if (sender >= world.size() || destination >= world.size()) {
    throw Error(Errc::NodeNotFound, "node outside the world");
  }
  std::vector<RelayProfile> out;
  if (world.pdr(sender, destination) > 0.0) {
    out.push_back({destination, world.pdr(sender, destination), etx[sender], 0.0, 1});
    return out;
  }
  for (NodeId j : world.neighbors(sender)) {
    if (etx[j] < etx[sender]) out.push_back({j, world.pdr(sender, j), etx[sender] - etx[j], 0.0, 0});
  }
  if (out.empty()) {
    throw Error(Errc::EmptyCandidates, "node " + std::to_string(sender) + " has no neighbor closer to " +
                                           std::to_string(destination));
  }
  std::sort(out.begin(), out.end(), [](const RelayProfile& a, const RelayProfile& b) {
    if (a.base_utility != b.base_utility) return a.base_utility > b.base_utility;
    return a.node < b.node;
  });
  if (out.size() > k_max) out.resize(k_max);
  for (std::size_t k = 0; k < out.size(); ++k) out[k].priority = static_cast<int>(k + 1);
  return out;
}

std::vector<RelayProfile> candidate_set(const World& world, NodeId sender, NodeId destination,
                                        std::size_t k_max) {
  const auto etx = etx_to(world, destination);
  return candidate_set(world, sender, destination, k_max, etx);
}

}  // namespace dda
