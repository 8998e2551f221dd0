// Expected one-hop relaying delay of a prioritized relaying network under
// timer-based coordination, the network delivery ratio, and the sensitivity
// of the delay to individual delivery ratios.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dda {

/// Delivery ratios indexed by relaying priority (p[0] fires first), plus the
/// waiting-slot duration in milliseconds.
struct PrioritizedPdrVector {
  std::vector<double> p;
  double slot_ms = 45.0;
};

/// 1 - prod(1 - p_i). Entries must lie in (0, 1].
double network_pdr(std::span<const double> p);

/// Expected waiting before the first receiver forwards, after one try:
///   T * [ sum_{i=1}^{n-1} i * P_{i+1} * prod_{j<=i}(1 - P_j) + n * prod(1 - P_i) ]
/// Entries may sit on the closed interval [0, 1] so the boundary cases can be tested.
double expected_relay_delay(const PrioritizedPdrVector& pv);

/// Same expectation, computed by summing over the n + 1 disjoint outcomes
/// "priority k is the first receiver" (k - 1 slots) and "nobody receives" (n slots).
double relay_delay_oracle(const PrioritizedPdrVector& pv);

/// Delay reduction when P_i (1-based) rises by delta_p with the others fixed:
/// DT(p) - DT(p with P_i += delta_p). Positive means faster.
double sensitivity_exact(const PrioritizedPdrVector& pv, std::size_t i, double delta_p);

/// The reference closed form for the same quantity, branches i = 1 and 1 < i < n.
/// Throws NoClosedForm for i = n.
double sensitivity_closed(const PrioritizedPdrVector& pv, std::size_t i, double delta_p);

/// Gap between the sensitivities of priorities i < j via the adjacent-pair
/// closed form summed from i to j - 1.
double pairwise_gap_adjacent_sum(const PrioritizedPdrVector& pv, std::size_t i, std::size_t j,
                                 double delta_p);

/// Gap between priorities i < j using the nested any-pair closed form.
double pairwise_gap_nested(const PrioritizedPdrVector& pv, std::size_t i, std::size_t j,
                           double delta_p);

struct SensitivityReport {
  std::size_t i = 0;
  std::size_t j = 0;  // 0 for single-index reports
  double delta_p = 0.0;
  double exact_delta = 0.0;
  double closed_form_delta = 0.0;
  /// Pairwise reports only: the nested any-pair form; NaN otherwise.
  double nested_form_delta = 0.0;
  /// Pairwise reports only; NaN where the ratio is undefined.
  double phi = 0.0;
  bool agrees = false;
};

inline constexpr double kClosedFormRelTol = 1e-9;

/// Compares sensitivity_exact against sensitivity_closed. For i = n the closed
/// form is unavailable and the report carries NaN with agrees = false.
SensitivityReport sensitivity_report(const PrioritizedPdrVector& pv, std::size_t i, double delta_p);

/// sensitivity_exact(i) - sensitivity_exact(j) is authoritative; the adjacent-sum
/// closed form is compared against it. Throws InvalidPair unless i < j.
SensitivityReport pairwise_sensitivity_gap(const PrioritizedPdrVector& pv, std::size_t i,
                                           std::size_t j, double delta_p);

/// Threshold ratio from the priority-dominance condition:
///   [1 + (2 - P_{j-1}) prod_{k=i+1}^{j-2}(1 - P_k)] / [(2 - P_{j+1}) prod_{k=i+1}^{j-1}(1 - P_k)]
/// Needs 1 <= i < j < n. Returns +infinity when the denominator vanishes.
double phi(const PrioritizedPdrVector& pv, std::size_t i, std::size_t j);

}  // namespace dda
