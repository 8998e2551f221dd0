#include "dda/dda_select.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "dda/error.hpp"

namespace dda {

namespace {

bool better_adjusted(const RelayProfile& a, const RelayProfile& b) {
  if (a.adjusted_utility != b.adjusted_utility) return a.adjusted_utility > b.adjusted_utility;
  return a.node < b.node;
}

double pool_weight(std::span<const double> values) {
  try {
    return relative_variance(values);
  } catch (const Error& e) {
    // All-zero pool: the metric cannot separate networks.
    if (e.code() == Errc::DegenerateMean) return 0.0;
    throw;
  }
}

// True when `a` should win over `b` on the final ordering.
bool ranks_above(const NetworkScore& a, const NetworkScore& b) {
  if (a.u_final != b.u_final) return a.u_final > b.u_final;
  if (a.p_g != b.p_g) return a.p_g > b.p_g;
  if (a.network.size() != b.network.size()) return a.network.size() < b.network.size();
  return a.network < b.network;
}

}  // namespace

std::vector<RelayProfile> prioritize_nodes(std::span<const RelayProfile> profiles, PriorityMode mode) {
  if (profiles.empty()) throw Error(Errc::EmptyInput, "no relay profiles");
  std::unordered_set<NodeId> seen;
  std::vector<RelayProfile> out(profiles.begin(), profiles.end());
  for (RelayProfile& r : out) {
    if (!seen.insert(r.node).second) {
      throw Error(Errc::DuplicateNode, "node " + std::to_string(r.node) + " profiled twice");
    }
    r.adjusted_utility = adjusted_node_utility(r.base_utility, r.pdr);
  }
  if (mode == PriorityMode::PdrDescending) {
    std::sort(out.begin(), out.end(), [](const RelayProfile& a, const RelayProfile& b) {
      if (a.pdr != b.pdr) return a.pdr > b.pdr;
      return a.node < b.node;
    });
  } else {
    std::sort(out.begin(), out.end(), better_adjusted);
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].priority = static_cast<int>(k + 1);
  return out;
}

RelayProfile best_single_relay(std::span<const RelayProfile> profiles) {
  auto ranked = prioritize_nodes(profiles, PriorityMode::AdjustedUtility);
  RelayProfile best = ranked.front();
  best.priority = 1;
  return best;
}

SelectionResult select_relaying_network(const CandidateGraph& graph,
                                        std::span<const RelayProfile> profiles, double slot_ms,
                                        const SelectionConfig& config) {
  // Validates ids and delivery ratios, and fills adjusted utilities.
  const std::vector<RelayProfile> checked = prioritize_nodes(profiles, PriorityMode::AdjustedUtility);
  std::unordered_map<NodeId, const RelayProfile*> by_node;
  for (const RelayProfile& r : checked) by_node.emplace(r.node, &r);
  for (NodeId id : graph.node_ids()) {
    if (!by_node.contains(id)) {
      throw Error(Errc::NodeNotFound, "graph node " + std::to_string(id) + " has no relay profile");
    }
  }

  const CandidateGraph* working = &graph;
  CandidateGraph pruned;
  if (graph.size() > config.candidate_cap) {
    std::vector<RelayProfile> ranked;
    for (NodeId id : graph.node_ids()) ranked.push_back(*by_node.at(id));
    std::sort(ranked.begin(), ranked.end(), better_adjusted);
    std::vector<NodeId> keep;
    for (std::size_t k = 0; k < config.candidate_cap; ++k) keep.push_back(ranked[k].node);
    pruned = graph.induced(keep);
    working = &pruned;
  }

  const std::vector<NodeSet> networks =
      enumerate_relaying_networks(*working, 2, 0, config.enumeration_cap);
  if (networks.empty()) {
    throw Error(Errc::NoRelayingNetwork, "candidate set holds no pair of connected nodes");
  }

  std::vector<NetworkScore> scores;
  std::vector<std::vector<RelayProfile>> ordered_members;
  scores.reserve(networks.size());
  ordered_members.reserve(networks.size());
  for (const NodeSet& net : networks) {
    std::vector<RelayProfile> members;
    members.reserve(net.size());
    for (NodeId id : net) members.push_back(*by_node.at(id));
    members = prioritize_nodes(members, config.priority);

    PrioritizedPdrVector pv{{}, slot_ms};
    std::vector<double> u;
    for (const RelayProfile& r : members) {
      pv.p.push_back(r.pdr);
      u.push_back(r.base_utility);
    }
    NetworkScore s;
    s.network = net;
    s.dt = expected_relay_delay(pv);
    s.p_g = network_pdr(pv.p);
    s.t = 1.0 / s.p_g;
    s.dt_star = s.dt * s.t;
    s.u_bar = expected_network_utility(u, pv.p);
    s.u_star = s.u_bar * s.p_g;
    scores.push_back(std::move(s));
    ordered_members.push_back(std::move(members));
  }

  if (config.dominance_prune && scores.size() > 1) {
    std::vector<bool> dominated(scores.size(), false);
    for (std::size_t a = 0; a < scores.size(); ++a) {
      for (std::size_t b = 0; b < scores.size() && !dominated[a]; ++b) {
        if (a != b && scores[b].dt_star < scores[a].dt_star && scores[b].u_star > scores[a].u_star) {
          dominated[a] = true;
        }
      }
    }
    std::size_t w = 0;
    for (std::size_t a = 0; a < scores.size(); ++a) {
      if (dominated[a]) continue;
      if (w != a) {
        scores[w] = std::move(scores[a]);
        ordered_members[w] = std::move(ordered_members[a]);
      }
      ++w;
    }
    scores.resize(w);
    ordered_members.resize(w);
  }

  std::vector<double> dt_star;
  std::vector<double> u_star;
  for (const NetworkScore& s : scores) {
    dt_star.push_back(s.dt_star);
    u_star.push_back(s.u_star);
  }

  RankingWeights weights;
  weights.v_r_dt = pool_weight(dt_star);
  weights.v_r_u = pool_weight(u_star);
  weights.xi = (weights.v_r_dt == 0.0 && weights.v_r_u == 0.0)
                   ? 1.0
                   : resolution_ratio(weights.v_r_dt, weights.v_r_u);
  weights.legacy_w_dt = config.legacy_w_dt;
  weights.legacy_w_u = config.legacy_w_u;

  const auto order_dt = assign_order_numbers(dt_star, RankDirection::LowerIsBetter);
  const auto order_u = assign_order_numbers(u_star, RankDirection::HigherIsBetter);
  const auto rank_weighted = final_network_utility(order_dt, order_u, weights.v_r_dt, weights.v_r_u);
  const double w_dt = config.legacy_w_dt >= 0.0 ? config.legacy_w_dt : weights.v_r_dt;
  const double w_u = config.legacy_w_u >= 0.0 ? config.legacy_w_u : weights.v_r_u;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    scores[k].order_dt = order_dt[k];
    scores[k].order_u = order_u[k];
    // Delay enters the raw-value sum as a cost.
    scores[k].u_final = config.scoring == ScoringMode::RankWeighted
                            ? rank_weighted[k]
                            : legacy_weighted_utility(-scores[k].dt_star, scores[k].u_star, w_dt, w_u);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (ranks_above(scores[k], scores[best])) best = k;
  }

  SelectionResult result;
  result.profiles = ordered_members[best];
  for (const RelayProfile& r : result.profiles) result.chosen.push_back(r.node);
  result.all_scores = std::move(scores);
  result.weights = weights;
  result.mode = config.scoring;
  result.priority_mode = config.priority;
  return result;
}

}  // namespace dda
