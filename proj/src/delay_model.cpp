#include "dda/delay_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dda/error.hpp"

namespace dda {

namespace {

enum class Domain { Open, Closed };  // (0, 1] or [0, 1]

void check_pdrs(std::span<const double> p, Domain domain) {
  if (p.empty()) throw Error(Errc::EmptyInput, "delivery ratio list is empty");
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double v = p[k];
    const bool low_ok = domain == Domain::Open ? v > 0.0 : v >= 0.0;
    if (!(low_ok && v <= 1.0)) {
      throw Error(Errc::InvalidProbability,
                  "delivery ratio at position " + std::to_string(k + 1) + " is " + std::to_string(v));
    }
  }
}

void check_vector(const PrioritizedPdrVector& pv) {
  check_pdrs(pv.p, Domain::Closed);
  if (!(pv.slot_ms > 0.0)) throw Error(Errc::InvalidValue, "waiting slot must be positive");
}

void check_index(const PrioritizedPdrVector& pv, std::size_t i) {
  if (i < 1 || i > pv.p.size()) {
    throw Error(Errc::IndexOutOfRange,
                "priority " + std::to_string(i) + " outside 1.." + std::to_string(pv.p.size()));
  }
}

void check_delta(double delta_p) {
  if (!(delta_p >= 0.0)) throw Error(Errc::InvalidValue, "delta_p must be non-negative");
}

// 1-based accessors keep the closed forms readable.
struct OneBased {
  std::span<const double> p;
  double P(std::size_t k) const { return p[k - 1]; }
  double miss(std::size_t k) const { return 1.0 - p[k - 1]; }
  double miss_product(std::size_t from, std::size_t to) const {
    double prod = 1.0;
    for (std::size_t k = from; k <= to; ++k) prod *= miss(k);
    return prod;
  }
  std::size_t n() const { return p.size(); }

  // A_m = 1 + (1 - P_m) A_{m+1}, A_{n+1} = 1. Expected remaining slots, plus one,
  // once priorities below m have all missed.
  double tail(std::size_t m) const {
    double a = 1.0;
    for (std::size_t k = n(); k >= m && k >= 1; --k) a = 1.0 + miss(k) * a;
    return a;
  }
};

bool close_enough(double a, double b) {
  return std::abs(a - b) <= kClosedFormRelTol * std::max(std::abs(a), std::abs(b)) + 1e-15;
}

}  // namespace

double network_pdr(std::span<const double> p) {
  check_pdrs(p, Domain::Open);
  double all_miss = 1.0;
  for (double v : p) all_miss *= (1.0 - v);
  return 1.0 - all_miss;
}

double expected_relay_delay(const PrioritizedPdrVector& pv) {
  check_vector(pv);
  const auto& p = pv.p;
  const std::size_t n = p.size();
  double sum = 0.0;
  double miss = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    miss *= (1.0 - p[i - 1]);
    sum += static_cast<double>(i) * p[i] * miss;
  }
  miss *= (1.0 - p[n - 1]);
  sum += static_cast<double>(n) * miss;
  return pv.slot_ms * sum;
}

double relay_delay_oracle(const PrioritizedPdrVector& pv) {
  check_vector(pv);
  const auto& p = pv.p;
  const std::size_t n = p.size();
  double slots = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double first_at_k = p[k];
    for (std::size_t j = 0; j < k; ++j) first_at_k *= (1.0 - p[j]);
    slots += static_cast<double>(k) * first_at_k;
  }
  double nobody = 1.0;
  for (double v : p) nobody *= (1.0 - v);
  slots += static_cast<double>(n) * nobody;
  return pv.slot_ms * slots;
}

double sensitivity_exact(const PrioritizedPdrVector& pv, std::size_t i, double delta_p) {
  check_vector(pv);
  check_index(pv, i);
  check_delta(delta_p);
  if (pv.p[i - 1] + delta_p > 1.0 + 1e-15) {
    throw Error(Errc::InvalidProbability, "P_i + delta_p exceeds 1");
  }
  // The delay is affine in P_i with slope -T * C_i * A_{i+1}, where C_i is the
  // miss product ahead of i and A_m = 1 + (1 - P_m) A_{m+1}, A_{n+1} = 1.
  // Evaluating the slope avoids the cancellation of differencing two delays.
  const std::size_t n = pv.p.size();
  double a = 1.0;
  for (std::size_t m = n; m > i; --m) a = 1.0 + (1.0 - pv.p[m - 1]) * a;
  double c = 1.0;
  for (std::size_t k = 1; k < i; ++k) c *= 1.0 - pv.p[k - 1];
  const double step = std::min(1.0, pv.p[i - 1] + delta_p) - pv.p[i - 1];
  return pv.slot_ms * step * c * a;
}

double sensitivity_closed(const PrioritizedPdrVector& pv, std::size_t i, double delta_p) {
  check_vector(pv);
  check_index(pv, i);
  check_delta(delta_p);
  const OneBased b{pv.p};
  const std::size_t n = b.n();
  if (i == n) throw Error(Errc::NoClosedForm, "the closed form has no branch for the last priority");

  // Inner products keep fixed limits that do not move with i.
  double bracket = 0.0;
  double lead = 1.0;
  if (i == 1) {
    lead = b.miss(2);
    const double inner = b.miss_product(3, n - 1);
    for (std::size_t j = 2; j + 1 <= n; ++j) bracket += static_cast<double>(j) * b.P(j + 1) * inner;
    bracket += static_cast<double>(n) * b.miss_product(3, n);
  } else {
    lead = b.miss_product(1, i - 1);
    const double inner = b.miss_product(i + 1, n - 1);
    for (std::size_t j = i; j + 1 <= n; ++j) bracket += static_cast<double>(j) * b.P(j + 1) * inner;
    bracket += static_cast<double>(n) * b.miss_product(i + 1, n);
    bracket -= static_cast<double>(i - 1);
  }
  return lead * bracket * delta_p * pv.slot_ms;
}

double pairwise_gap_adjacent_sum(const PrioritizedPdrVector& pv, std::size_t i, std::size_t j,
                                 double delta_p) {
  check_vector(pv);
  check_index(pv, i);
  check_index(pv, j);
  check_delta(delta_p);
  if (i >= j) throw Error(Errc::InvalidPair, "need i < j");
  const OneBased b{pv.p};
  double total = 0.0;
  for (std::size_t k = i; k < j; ++k) {
    const double lead = b.miss_product(1, k - 1);
    total += lead * (1.0 + (b.P(k) - b.P(k + 1)) * b.tail(k + 2));
  }
  return total * delta_p * pv.slot_ms;
}

double pairwise_gap_nested(const PrioritizedPdrVector& pv, std::size_t i, std::size_t j,
                           double delta_p) {
  check_vector(pv);
  check_index(pv, i);
  check_index(pv, j);
  check_delta(delta_p);
  if (i >= j) throw Error(Errc::InvalidPair, "need i < j");
  const OneBased b{pv.p};
  const std::size_t n = b.n();
  double inner = 1.0 + (b.P(i) - b.P(j)) * (2.0 - b.P(n));
  for (std::size_t k = j - 1; k >= i + 1; --k) inner = 1.0 + b.miss(k) * inner;
  return b.miss_product(1, i - 1) * inner * delta_p * pv.slot_ms;
}

SensitivityReport sensitivity_report(const PrioritizedPdrVector& pv, std::size_t i, double delta_p) {
  SensitivityReport r;
  r.i = i;
  r.delta_p = delta_p;
  r.exact_delta = sensitivity_exact(pv, i, delta_p);
  r.nested_form_delta = std::numeric_limits<double>::quiet_NaN();
  r.phi = std::numeric_limits<double>::quiet_NaN();
  if (i < pv.p.size()) {
    r.closed_form_delta = sensitivity_closed(pv, i, delta_p);
    r.agrees = close_enough(r.exact_delta, r.closed_form_delta);
  } else {
    r.closed_form_delta = std::numeric_limits<double>::quiet_NaN();
    r.agrees = false;
  }
  return r;
}

SensitivityReport pairwise_sensitivity_gap(const PrioritizedPdrVector& pv, std::size_t i,
                                           std::size_t j, double delta_p) {
  if (i >= j) throw Error(Errc::InvalidPair, "need i < j");
  SensitivityReport r;
  r.i = i;
  r.j = j;
  r.delta_p = delta_p;
  r.exact_delta = sensitivity_exact(pv, i, delta_p) - sensitivity_exact(pv, j, delta_p);
  r.closed_form_delta = pairwise_gap_adjacent_sum(pv, i, j, delta_p);
  r.nested_form_delta = pairwise_gap_nested(pv, i, j, delta_p);
  r.phi = j < pv.p.size() ? phi(pv, i, j) : std::numeric_limits<double>::quiet_NaN();
  r.agrees = close_enough(r.exact_delta, r.closed_form_delta);
  return r;
}

double phi(const PrioritizedPdrVector& pv, std::size_t i, std::size_t j) {
  check_vector(pv);
  const std::size_t n = pv.p.size();
  if (i < 1 || i >= j || j >= n) {
    throw Error(Errc::InvalidPair, "phi needs 1 <= i < j < n");
  }
  const OneBased b{pv.p};
  const double numerator = 1.0 + (2.0 - b.P(j - 1)) * b.miss_product(i + 1, j - 2);
  const double denominator = (2.0 - b.P(j + 1)) * b.miss_product(i + 1, j - 1);
  if (denominator == 0.0) return std::numeric_limits<double>::infinity();
  return numerator / denominator;
}

}  // namespace dda
