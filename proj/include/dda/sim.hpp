// Seeded discrete-event simulator comparing timer-based coordination schemes
// on random geometric topologies with CBR traffic.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dda/dda_select.hpp"
#include "dda/relay_graph.hpp"

namespace dda {

enum class Scheme { Dda, Exor, Soar };

inline constexpr std::array<Scheme, 3> kAllSchemes{Scheme::Dda, Scheme::Exor, Scheme::Soar};

/// "DDA", "ExOR-style", "SOAR-style".
std::string_view to_string(Scheme scheme) noexcept;

/// Accepts the labels above and the short forms dda/exor/soar, case-insensitively.
Scheme parse_scheme(std::string_view text);

struct SimParams {
  double area_width_m = 2000.0;
  double area_height_m = 2000.0;
  std::size_t node_count = 200;
  double radio_range_m = 250.0;
  double data_rate_bps = 1e6;
  std::size_t packet_size_bytes = 512;
  std::size_t cbr_flows = 60;
  double cbr_interval_s = 0.25;
  double beacon_interval_s = 1.0;
  std::size_t queue_cap = 50;
  double slot_ms = 45.0;
  int max_retries = 3;
  int ttl_hops = 32;
  double sim_duration_s = 60.0;
  /// Extra time after the last packet is generated, for in-flight packets.
  double drain_s = 10.0;
  /// Stage-one candidate cap per hop.
  std::size_t k_max = 8;
  double pdr_gamma = 2.0;
  double pdr_floor = 0.05;
  /// SOAR-style corridor: a candidate j is kept when 1/p_sj + ETX_j <= ETX_s + corridor.
  double soar_corridor = 1.0;
  SelectionConfig dda{.priority = PriorityMode::AdjustedUtility};

  double frame_ms() const { return static_cast<double>(packet_size_bytes) * 8.0 / data_rate_bps * 1e3; }
};

/// Throws InvalidValue naming the first offending field.
void validate(const SimParams& params);

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// Node placement plus the symmetric link delivery-ratio matrix.
class World {
 public:
  /// Link ratios follow link_pdr() over pairwise distances.
  World(std::vector<Position> positions, SimParams params);

  /// Explicit ratios, row-major n x n, symmetric, entries in [0, 1]; the
  /// diagonal is ignored. Positions stay informational.
  World(std::vector<Position> positions, std::vector<double> link_pdr, SimParams params);

  std::size_t size() const noexcept { return positions_.size(); }
  const std::vector<Position>& positions() const noexcept { return positions_; }
  const SimParams& params() const noexcept { return params_; }

  double pdr(NodeId a, NodeId b) const { return a == b ? 0.0 : pdr_[a * size() + b]; }
  const std::vector<NodeId>& neighbors(NodeId node) const { return neighbors_.at(node); }

  /// All bidirectional links, nodes 0..n-1.
  CandidateGraph connectivity() const;

 private:
  void index_neighbors();

  std::vector<Position> positions_;
  std::vector<double> pdr_;
  std::vector<std::vector<NodeId>> neighbors_;
  SimParams params_;
};

/// 0 beyond range, else max(p_floor, 1 - (distance / range)^gamma).
double link_pdr(double distance, double range, double gamma = 2.0, double p_floor = 0.05);

/// Uniform placement over the area from the seeded generator. Throws TooFewNodes.
World build_world(const SimParams& params, std::uint64_t seed);

void write_positions_csv(std::ostream& out, const World& world);

/// Shortest-path ETX (link weight 1/pdr) from every node to `destination`;
/// +infinity for unreachable nodes.
std::vector<double> etx_to(const World& world, NodeId destination);

/// Neighbors of `sender` strictly closer to `destination` in ETX, best
/// progress first, at most k_max. Priorities follow that order. When the
/// destination is a neighbor the set is the destination alone.
/// Throws EmptyCandidates when no neighbor makes progress.
std::vector<RelayProfile> candidate_set(const World& world, NodeId sender, NodeId destination,
                                        std::size_t k_max, std::span<const double> etx_to_destination);
std::vector<RelayProfile> candidate_set(const World& world, NodeId sender, NodeId destination,
                                        std::size_t k_max);

enum class DropCause { QueueOverflow, RetryExhausted, NoCandidate, TtlExpired, DuplicateDiscard };
inline constexpr std::size_t kDropCauseCount = 5;
std::string_view to_string(DropCause cause) noexcept;

struct RunMetrics {
  std::uint64_t sent_source_packets = 0;
  std::uint64_t delivered_packets = 0;
  double delivery_ratio = 0.0;
  /// Over delivered packets; 0 when nothing was delivered.
  double mean_e2e_delay_ms = 0.0;
  /// Data frames sent by all nodes, retries included.
  std::uint64_t total_transmissions = 0;
  /// delivered / total_transmissions.
  double throughput_ratio = 0.0;
  std::uint64_t ack_transmissions = 0;
  std::uint64_t beacon_transmissions = 0;
  /// delivered / (data + ACK + beacon frames).
  double throughput_ratio_all = 0.0;
  std::uint64_t duplicate_forwards = 0;
  double duplicates_per_delivered = 0.0;
  std::uint64_t duplicate_deliveries = 0;
  std::uint64_t deterministic_fallbacks = 0;
  std::array<std::uint64_t, kDropCauseCount> drops_by_cause{};
  std::uint64_t in_flight_at_end = 0;

  std::uint64_t total_drops() const;
  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// One run. The traffic pattern depends only on (world, seed), so the schemes
/// see identical flows for the same seed.
RunMetrics simulate(const World& world, Scheme scheme, std::uint64_t seed);

struct MetricStat {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

struct RunSummary {
  std::size_t runs = 0;
  std::vector<MetricStat> stats;

  const MetricStat& stat(std::string_view name) const;
};

/// Names of the summarised metrics, in output order.
std::span<const std::string_view> summary_metric_names();

/// Throws EmptyInput for an empty list.
RunSummary summarize_runs(std::span<const RunMetrics> metrics);

}  // namespace dda
