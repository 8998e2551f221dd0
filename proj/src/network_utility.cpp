#include "dda/network_utility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "dda/error.hpp"

namespace dda {

double adjusted_node_utility(double u, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw Error(Errc::InvalidProbability, "node delivery ratio must be in (0, 1]");
  if (!(u >= 0.0)) throw Error(Errc::InvalidValue, "node utility must be non-negative");
  return u * p;
}

double network_etx(std::span<const double> p) { return 1.0 / network_pdr(p); }

double deteriorated_delay(const PrioritizedPdrVector& pv) {
  return expected_relay_delay(pv) * network_etx(pv.p);
}

double expected_network_utility(std::span<const double> u, std::span<const double> p) {
  if (u.size() != p.size()) {
    throw Error(Errc::DimensionMismatch, "utility and delivery-ratio lists differ in length");
  }
  network_pdr(p);  // validates p
  double total = 0.0;
  double all_missed = 1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    total += u[i] * p[i] * all_missed;
    all_missed *= (1.0 - p[i]);
  }
  return total;
}

double deteriorated_utility(std::span<const double> u, std::span<const double> p) {
  return expected_network_utility(u, p) * network_pdr(p);
}

double relative_variance(std::span<const double> x) {
  if (x.empty()) throw Error(Errc::EmptyInput, "relative variance of an empty list");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  if (mean == 0.0) throw Error(Errc::DegenerateMean, "relative variance with zero mean");
  double acc = 0.0;
  for (double v : x) {
    const double r = (v - mean) / mean;
    acc += r * r;
  }
  return acc / static_cast<double>(x.size());
}

double resolution_ratio(double v_dt, double v_u) {
  if (!(v_dt >= 0.0) || !(v_u >= 0.0)) throw Error(Errc::InvalidValue, "relative variances must be >= 0");
  if (v_dt == 0.0 && v_u == 0.0) throw Error(Errc::DegenerateVariances, "both relative variances are zero");
  if (v_dt == v_u) return 1.0;
  if (v_dt == 0.0 || v_u == 0.0) return std::numeric_limits<double>::infinity();
  return v_dt > v_u ? v_dt / v_u : v_u / v_dt;
}

std::vector<int> assign_order_numbers(std::span<const double> values, RankDirection direction) {
  std::vector<int> ranks(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    int worse = 0;
    for (double other : values) {
      const bool is_worse = direction == RankDirection::HigherIsBetter ? other < values[i] : other > values[i];
      if (is_worse) ++worse;
    }
    ranks[i] = 1 + worse;
  }
  return ranks;
}

std::vector<double> final_network_utility(std::span<const int> order_dt, std::span<const int> order_u,
                                          double v_dt, double v_u) {
  if (order_dt.size() != order_u.size()) {
    throw Error(Errc::DimensionMismatch, "order-number lists differ in length");
  }
  std::vector<double> out(order_dt.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = v_dt * order_dt[i] + v_u * order_u[i];
  }
  return out;
}

double legacy_weighted_utility(double dt_star, double u_star, double w_dt, double w_u) {
  return w_dt * dt_star + w_u * u_star;
}

std::string format_node_list(std::span<const NodeId> nodes) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(nodes[i]);
  }
  return s;
}

void write_score_csv(std::ostream& out, std::span<const NetworkScore> scores) {
  out << "network,dt,p_g,t,dt_star,u_bar,u_star,order_dt,order_u,u_final\n";
  char buf[512];
  for (const NetworkScore& s : scores) {
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d,%.9g\n", s.dt, s.p_g, s.t,
                  s.dt_star, s.u_bar, s.u_star, s.order_dt, s.order_u, s.u_final);
    out << format_node_list(s.network) << buf;
  }
}

}  // namespace dda
