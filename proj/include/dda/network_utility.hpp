// Scoring of relaying networks: network ETX, deteriorated delay and utility,
// relative-variance weights, order numbers and the final rank-weighted utility.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dda/delay_model.hpp"
#include "dda/relay_graph.hpp"

namespace dda {

struct NetworkScore {
  NodeSet network;       // sorted ids
  double dt = 0.0;       // expected relay delay, ms
  double p_g = 0.0;      // network delivery ratio
  double t = 0.0;        // network ETX, 1 / p_g
  double dt_star = 0.0;  // dt * t, ms
  double u_bar = 0.0;    // expected network utility
  double u_star = 0.0;   // u_bar * p_g
  int order_dt = 0;
  int order_u = 0;
  double u_final = 0.0;
};

struct RankingWeights {
  double v_r_dt = 0.0;
  double v_r_u = 0.0;
  double xi = 1.0;
  /// Direct weights for the raw-value combination; negative means "use the
  /// relative variances".
  double legacy_w_dt = -1.0;
  double legacy_w_u = -1.0;
};

/// Node utility discounted by its one-hop ETX: u * p.
double adjusted_node_utility(double u, double p);

/// 1 / network_pdr(p).
double network_etx(std::span<const double> p);

/// expected_relay_delay(pv) * network_etx(pv.p).
double deteriorated_delay(const PrioritizedPdrVector& pv);

/// U_1 P_1 + sum_{i>=2} U_i P_i prod_{j<i}(1 - P_j), both lists in priority order.
double expected_network_utility(std::span<const double> u, std::span<const double> p);

/// expected_network_utility(u, p) * network_pdr(p).
double deteriorated_utility(std::span<const double> u, std::span<const double> p);

/// (1/n) sum ((x_i - mean) / mean)^2. Throws DegenerateMean when the mean is 0.
double relative_variance(std::span<const double> x);

/// Larger over smaller of the two relative variances; 1 when equal.
double resolution_ratio(double v_dt, double v_u);

enum class RankDirection { HigherIsBetter, LowerIsBetter };

/// Competition ranking where N marks the most desirable value. Ties share the
/// lower rank and the following rank is skipped.
std::vector<int> assign_order_numbers(std::span<const double> values, RankDirection direction);

/// v_dt * order_dt + v_u * order_u, elementwise.
std::vector<double> final_network_utility(std::span<const int> order_dt, std::span<const int> order_u,
                                          double v_dt, double v_u);

/// w_dt * dt_star + w_u * u_star.
double legacy_weighted_utility(double dt_star, double u_star, double w_dt, double w_u);

/// Header: network,dt,p_g,t,dt_star,u_bar,u_star,order_dt,order_u,u_final.
/// The network column lists node ids in priority order separated by spaces.
void write_score_csv(std::ostream& out, std::span<const NetworkScore> scores);

std::string format_node_list(std::span<const NodeId> nodes);

}  // namespace dda
