#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"

#include "dda/delay_model.hpp"
#include "dda/error.hpp"

using namespace dda;

namespace {

// Expected slots by enumerating all 2^n reception patterns.
double pattern_oracle(const std::vector<double>& p, double slot) {
  const std::size_t n = p.size();
  double expected = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double prob = 1.0;
    std::size_t first = n;
    for (std::size_t k = 0; k < n; ++k) {
      const bool got = mask & (1u << k);
      prob *= got ? p[k] : 1.0 - p[k];
      if (got && first == n) first = k;
    }
    expected += prob * static_cast<double>(first);
  }
  return expected * slot;
}

std::vector<double> random_pdrs(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::vector<double> p(n);
  for (double& x : p) x = u(rng);
  return p;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("network delivery ratio") {
  CHECK(network_pdr(std::vector{0.5, 0.5}) == doctest::Approx(0.75));
  CHECK(network_pdr(std::vector{0.2, 0.3, 0.4}) == doctest::Approx(0.664));
  CHECK(network_pdr(std::vector{0.3, 1.0, 0.2}) == 1.0);
  CHECK(code_of([] { network_pdr(std::vector<double>{}); }) == Errc::EmptyInput);
  CHECK(code_of([] { network_pdr(std::vector{0.5, 0.0}); }) == Errc::InvalidProbability);
  CHECK(code_of([] { network_pdr(std::vector{1.2}); }) == Errc::InvalidProbability);
}

TEST_CASE("expected relay delay small cases") {
  CHECK(expected_relay_delay({{1.0, 0.3}, 45.0}) == 0.0);
  CHECK(expected_relay_delay({{0.5, 0.5}, 45.0}) == doctest::Approx(33.75));
  CHECK(relay_delay_oracle({{0.5, 0.5}, 45.0}) == doctest::Approx(33.75));
  CHECK(relay_delay_oracle({{1.0, 0.4}, 45.0}) == 0.0);
  CHECK(relay_delay_oracle({{0.9, 0.8, 0.7}, 1.0}) == doctest::Approx(0.126));
  CHECK(expected_relay_delay({{0.9, 0.8, 0.7}, 1.0}) == doctest::Approx(0.126));
  CHECK(expected_relay_delay({{0.0, 0.0, 0.0}, 45.0}) == doctest::Approx(135.0));
  CHECK(expected_relay_delay({{1e-9, 1e-9, 1e-9}, 1.0}) == doctest::Approx(3.0).epsilon(1e-6));

  CHECK(code_of([] { expected_relay_delay({{}, 45.0}); }) == Errc::EmptyInput);
  CHECK(code_of([] { expected_relay_delay({{0.5}, 0.0}); }) == Errc::InvalidValue);
  CHECK(code_of([] { relay_delay_oracle({{0.5, -0.1}, 1.0}); }) == Errc::InvalidProbability);
}

TEST_CASE("both delay routes agree with the reception-pattern oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const PrioritizedPdrVector pv{random_pdrs(rng, n), 45.0};
    const double want = pattern_oracle(pv.p, pv.slot_ms);
    CHECK(expected_relay_delay(pv) == doctest::Approx(want).epsilon(1e-12));
    CHECK(relay_delay_oracle(pv) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("exact sensitivity examples") {
  const PrioritizedPdrVector pv{{0.5, 0.5}, 1.0};
  CHECK(sensitivity_exact(pv, 1, 0.1) == doctest::Approx(0.15));
  CHECK(sensitivity_exact(pv, 2, 0.1) == doctest::Approx(0.05));
  CHECK(sensitivity_exact(pv, 1, 0.0) == 0.0);

  CHECK(code_of([&] { sensitivity_exact(pv, 0, 0.1); }) == Errc::IndexOutOfRange);
  CHECK(code_of([&] { sensitivity_exact(pv, 3, 0.1); }) == Errc::IndexOutOfRange);
  CHECK(code_of([&] { sensitivity_exact(pv, 1, 0.6); }) == Errc::InvalidProbability);
  CHECK(code_of([&] { sensitivity_exact(pv, 1, -0.1); }) == Errc::InvalidValue);
}

TEST_CASE("exact sensitivity matches a finite difference of the pattern oracle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 6;
    PrioritizedPdrVector pv{random_pdrs(rng, n), 45.0};
    const std::size_t i = 1 + trial % n;
    const double dp = 0.5 * (1.0 - pv.p[i - 1]);
    std::vector<double> raised = pv.p;
    raised[i - 1] += dp;
    const double want = pattern_oracle(pv.p, pv.slot_ms) - pattern_oracle(raised, pv.slot_ms);
    CHECK(sensitivity_exact(pv, i, dp) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("sensitivity is linear in the perturbation") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 7;
    PrioritizedPdrVector pv{random_pdrs(rng, n), 45.0};
    for (double& x : pv.p) x = std::min(x, 0.85);
    const std::size_t i = 1 + trial % n;
    const double base = sensitivity_exact(pv, i, 1e-4) / 1e-4;
    CHECK(sensitivity_exact(pv, i, 1e-2) / 1e-2 == doctest::Approx(base).epsilon(1e-8));
    CHECK(sensitivity_exact(pv, i, 0.1) / 0.1 == doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("closed form versus exact") {
  const PrioritizedPdrVector two{{0.5, 0.5}, 1.0};
  CHECK(sensitivity_closed(two, 1, 0.1) == doctest::Approx(0.10));
  CHECK(sensitivity_closed(two, 1, 0.0) == 0.0);
  const SensitivityReport r = sensitivity_report(two, 1, 0.1);
  CHECK(r.exact_delta == doctest::Approx(0.15));
  CHECK(r.closed_form_delta == doctest::Approx(0.10));
  CHECK_FALSE(r.agrees);

  const PrioritizedPdrVector three{{0.9, 0.8, 0.7}, 1.0};
  const SensitivityReport mid = sensitivity_report(three, 2, 0.01);
  CHECK(mid.agrees);
  CHECK(mid.closed_form_delta == doctest::Approx(mid.exact_delta).epsilon(1e-9));

  CHECK(code_of([&] { sensitivity_closed(three, 3, 0.01); }) == Errc::NoClosedForm);
  const SensitivityReport last = sensitivity_report(three, 3, 0.01);
  CHECK(std::isnan(last.closed_form_delta));
  CHECK_FALSE(last.agrees);
}

TEST_CASE("pairwise gaps") {
  const PrioritizedPdrVector two{{0.5, 0.5}, 1.0};
  const SensitivityReport g = pairwise_sensitivity_gap(two, 1, 2, 0.1);
  CHECK(g.exact_delta == doctest::Approx(0.10));
  CHECK(g.agrees);
  CHECK(code_of([&] { pairwise_sensitivity_gap(two, 2, 2, 0.1); }) == Errc::InvalidPair);
  CHECK(code_of([&] { pairwise_sensitivity_gap(two, 2, 1, 0.1); }) == Errc::InvalidPair);

  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + trial % 6;
    PrioritizedPdrVector pv{random_pdrs(rng, n), 45.0};
    for (double& x : pv.p) x = std::min(x, 0.9);
    const double dp = 0.05;
    const std::size_t i = 1;
    const std::size_t j = n;
    const double whole = pairwise_sensitivity_gap(pv, i, j, dp).exact_delta;
    double telescoped = 0.0;
    for (std::size_t k = i; k < j; ++k) telescoped += pairwise_sensitivity_gap(pv, k, k + 1, dp).exact_delta;
    CHECK(whole == doctest::Approx(telescoped).epsilon(1e-10));
    CHECK(pairwise_gap_adjacent_sum(pv, i, j, dp) == doctest::Approx(whole).epsilon(1e-10));
  }
}

TEST_CASE("descending priorities give positive gaps") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 500; ++trial) {
    PrioritizedPdrVector pv{random_pdrs(rng, 5), 45.0};
    std::sort(pv.p.rbegin(), pv.p.rend());
    for (std::size_t i = 1; i < 5; ++i) {
      for (std::size_t j = i + 1; j <= 5; ++j) {
        const double dp = 0.5 * (1.0 - std::max(pv.p[i - 1], pv.p[j - 1]));
        CHECK(pairwise_sensitivity_gap(pv, i, j, dp).exact_delta > 0.0);
      }
    }
  }
}

TEST_CASE("appending a node raises every sensitivity") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 6;
    PrioritizedPdrVector pv{random_pdrs(rng, n), 45.0};
    PrioritizedPdrVector longer = pv;
    longer.p.push_back(random_pdrs(rng, 1).front());
    for (std::size_t i = 1; i <= n; ++i) {
      const double dp = 0.5 * (1.0 - pv.p[i - 1]);
      CHECK(sensitivity_exact(longer, i, dp) > sensitivity_exact(pv, i, dp));
    }
  }
}

TEST_CASE("a weak node ahead of a strong one can be less sensitive") {
  // S_i = prod_{k<i}(1-P_k) * A_{i+1}, A_m = 1 + (1-P_m) A_{m+1}:
  // S_1 = 1 + 0.1 * 1.9 = 1.19, S_2 = 0.9 * 1.9 = 1.71 per unit perturbation.
  const PrioritizedPdrVector pv{{0.1, 0.9, 0.1}, 1.0};
  CHECK(sensitivity_exact(pv, 1, 0.01) / 0.01 == doctest::Approx(1.19));
  CHECK(sensitivity_exact(pv, 2, 0.01) / 0.01 == doctest::Approx(1.71));
  CHECK(sensitivity_exact(pv, 1, 0.01) < sensitivity_exact(pv, 2, 0.01));
  // The threshold ratio still exceeds one there.
  const PrioritizedPdrVector five{{0.05, 0.05, 0.95, 0.05, 0.05}, 1.0};
  CHECK(phi(five, 1, 3) > 1.0);
  CHECK(sensitivity_exact(five, 1, 0.01) < sensitivity_exact(five, 3, 0.01));
}

TEST_CASE("threshold ratio") {
  const PrioritizedPdrVector pv{{0.5, 0.5, 0.5, 0.5}, 45.0};
  // (1 + 1.5) / (1.5 * 0.5)
  CHECK(phi(pv, 1, 3) == doctest::Approx(10.0 / 3.0));
  CHECK(code_of([&] { phi(pv, 1, 4); }) == Errc::InvalidPair);
  CHECK(code_of([&] { phi(pv, 2, 2); }) == Errc::InvalidPair);

  const PrioritizedPdrVector ones{{1.0, 1.0, 1.0, 1.0}, 45.0};
  const double boundary = phi(ones, 1, 3);
  CHECK(boundary > 1.0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const PrioritizedPdrVector r{random_pdrs(rng, n), 45.0};
    const std::size_t i = 1 + trial % (n - 2);
    const std::size_t j = i + 1 + (trial / 7) % (n - 1 - i);
    CHECK(phi(r, i, j) > 1.0);
  }
}

TEST_CASE("descending order minimises the delay and leaves the ratio unchanged") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 5;
    std::vector<double> p = random_pdrs(rng, n);
    std::vector<double> best = p;
    std::sort(best.rbegin(), best.rend());
    const double sorted_delay = expected_relay_delay({best, 45.0});
    const double ratio = network_pdr(best);
    std::sort(p.begin(), p.end());
    do {
      CHECK(expected_relay_delay({p, 45.0}) >= sorted_delay - 1e-12);
      CHECK(network_pdr(p) == doctest::Approx(ratio).epsilon(1e-14));
    } while (std::next_permutation(p.begin(), p.end()));
  }
}
