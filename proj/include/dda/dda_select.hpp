// Selection of the final relaying network from a candidate set: enumerate the
// fully connected networks, score each one, and pick the best by final utility.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dda/network_utility.hpp"
#include "dda/relay_graph.hpp"

namespace dda {

struct RelayProfile {
  NodeId node = 0;
  double pdr = 1.0;            // link delivery ratio from the sender
  double base_utility = 0.0;   // stage-one metric value
  double adjusted_utility = 0.0;
  int priority = 0;            // 1 fires first
};

enum class ScoringMode { RankWeighted, LegacyWeighted };
enum class PriorityMode { PdrDescending, AdjustedUtility };

struct SelectionConfig {
  ScoringMode scoring = ScoringMode::RankWeighted;
  PriorityMode priority = PriorityMode::PdrDescending;
  /// Candidates beyond this count are pruned by adjusted utility before enumeration.
  std::size_t candidate_cap = 12;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  /// Drop networks strictly worse on both dt_star and u_star than some other network.
  bool dominance_prune = false;
  /// Raw-value weights for LegacyWeighted; negative picks the relative variance.
  double legacy_w_dt = -1.0;
  double legacy_w_u = -1.0;
};

struct SelectionResult {
  NodeSet chosen;                      // in priority order
  std::vector<RelayProfile> profiles;  // chosen nodes with priorities set
  std::vector<NetworkScore> all_scores;
  RankingWeights weights;
  ScoringMode mode = ScoringMode::RankWeighted;
  PriorityMode priority_mode = PriorityMode::PdrDescending;
};

/// Sorts by pdr (PdrDescending) or by base_utility * pdr (AdjustedUtility),
/// descending, ties by node id, and assigns priorities 1..n. Fills adjusted_utility.
std::vector<RelayProfile> prioritize_nodes(std::span<const RelayProfile> profiles, PriorityMode mode);

/// Runs the full selection. Throws NoRelayingNetwork when no clique of two or
/// more nodes exists, NodeNotFound when a graph node has no profile.
SelectionResult select_relaying_network(const CandidateGraph& graph,
                                        std::span<const RelayProfile> profiles, double slot_ms,
                                        const SelectionConfig& config = {});

/// Best single relay by adjusted utility; the deterministic-routing fallback
/// when no relaying network exists.
RelayProfile best_single_relay(std::span<const RelayProfile> profiles);

}  // namespace dda
