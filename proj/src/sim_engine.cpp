#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "dda/error.hpp"
#include "dda/sim.hpp"
#include "random.hpp"

namespace dda {

std::uint64_t RunMetrics::total_drops() const {
  std::uint64_t total = 0;
  for (auto d : drops_by_cause) total += d;
  return total;
}

namespace {

struct Copy {
  std::uint32_t packet = 0;
  std::uint32_t hops = 0;
};

enum class EventKind { Generate, TxEnd, Retry, SenderFree, Arrive, Deliver };

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Generate;
  NodeId node = 0;
  std::uint32_t flow = 0;
  Copy copy;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct Packet {
  NodeId src = 0;
  NodeId dst = 0;
  double created_ms = 0.0;
  bool delivered = false;
  std::uint32_t alive = 0;
};

struct Flow {
  NodeId src = 0;
  NodeId dst = 0;
  double start_ms = 0.0;
};

/// Relays for one (sender, destination) pair, in priority order.
struct Plan {
  std::vector<NodeId> relays;
  bool fallback = false;
};

struct Transmission {
  Copy copy;
  int attempts = 0;
  const Plan* plan = nullptr;
};

struct NodeState {
  std::deque<Copy> queue;
  bool busy = false;
  Transmission current;
  std::unordered_set<std::uint32_t> seen;
};

class Simulation {
 public:
  Simulation(const World& world, Scheme scheme, std::uint64_t seed)
      : world_(world),
        params_(world.params()),
        scheme_(scheme),
        rng_(detail::make_rng(seed, 0x434f4f52ULL)),  // reception draws
        nodes_(world.size()) {
    validate(params_);
    frame_ms_ = params_.frame_ms();
    end_ms_ = (params_.sim_duration_s + params_.drain_s) * 1e3;
    make_flows(seed);
  }

  RunMetrics run() {
    for (std::uint32_t f = 0; f < flows_.size(); ++f) {
      schedule({flows_[f].start_ms, 0, EventKind::Generate, flows_[f].src, f, {}});
    }
    while (!events_.empty() && events_.top().time <= end_ms_) {
      Event ev = events_.top();
      events_.pop();
      now_ = ev.time;
      dispatch(ev);
    }
    return finish();
  }

 private:
  void make_flows(std::uint64_t seed) {
    // Flows depend on the seed only, so every scheme sees the same traffic.
    auto rng = detail::make_rng(seed, 0x43425246ULL);  // "CBRF"
    const std::uint64_t n = world_.size();
    flows_.reserve(params_.cbr_flows);
    for (std::size_t f = 0; f < params_.cbr_flows; ++f) {
      Flow flow;
      flow.src = static_cast<NodeId>(detail::index(rng, n));
      do {
        flow.dst = static_cast<NodeId>(detail::index(rng, n));
      } while (flow.dst == flow.src);
      flow.start_ms = detail::unit(rng) * params_.cbr_interval_s * 1e3;
      flows_.push_back(flow);
    }
  }

  void schedule(Event ev) {
    ev.seq = next_seq_++;
    events_.push(ev);
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::Generate: on_generate(ev.flow); break;
      case EventKind::TxEnd: on_tx_end(ev.node); break;
      case EventKind::Retry: on_retry(ev.node); break;
      case EventKind::SenderFree:
        nodes_[ev.node].busy = false;
        start_tx(ev.node);
        break;
      case EventKind::Arrive: on_arrive(ev.node, ev.copy); break;
      case EventKind::Deliver: on_deliver(ev.copy); break;
    }
  }

  void on_generate(std::uint32_t flow_index) {
    const Flow& flow = flows_[flow_index];
    const auto id = static_cast<std::uint32_t>(packets_.size());
    packets_.push_back({flow.src, flow.dst, now_, false, 1});
    ++m_.sent_source_packets;
    NodeState& src = nodes_[flow.src];
    src.seen.insert(id);
    enqueue(flow.src, Copy{id, 0});
    const double next = now_ + params_.cbr_interval_s * 1e3;
    if (next < params_.sim_duration_s * 1e3) {
      schedule({next, 0, EventKind::Generate, flow.src, flow_index, {}});
    }
  }

  void enqueue(NodeId node, Copy copy) {
    NodeState& st = nodes_[node];
    if (st.queue.size() >= params_.queue_cap) {
      kill(copy, DropCause::QueueOverflow);
      return;
    }
    st.queue.push_back(copy);
    if (!st.busy) start_tx(node);
  }

  void start_tx(NodeId node) {
    NodeState& st = nodes_[node];
    while (!st.busy && !st.queue.empty()) {
      const Copy copy = st.queue.front();
      st.queue.pop_front();
      const Plan& plan = plan_for(node, packets_[copy.packet].dst);
      if (plan.relays.empty()) {
        kill(copy, DropCause::NoCandidate);
        continue;
      }
      st.busy = true;
      st.current = {copy, 1, &plan};
      ++m_.total_transmissions;
      schedule({now_ + frame_ms_, 0, EventKind::TxEnd, node, 0, {}});
    }
  }

  void on_retry(NodeId node) {
    ++m_.total_transmissions;
    schedule({now_ + frame_ms_, 0, EventKind::TxEnd, node, 0, {}});
  }

  // Frame finished: draw receptions and resolve the timer coordination.
  void on_tx_end(NodeId sender) {
    NodeState& st = nodes_[sender];
    Transmission& tx = st.current;
    const std::vector<NodeId>& relays = tx.plan->relays;
    const double slot = params_.slot_ms;

    std::vector<std::size_t> forwarders;
    for (std::size_t k = 0; k < relays.size(); ++k) {
      if (!detail::bernoulli(rng_, world_.pdr(sender, relays[k]))) continue;
      bool heard_ack = false;
      for (std::size_t f : forwarders) {
        if (detail::bernoulli(rng_, world_.pdr(relays[f], relays[k]))) {
          heard_ack = true;
          break;
        }
      }
      if (!heard_ack) forwarders.push_back(k);
    }

    if (forwarders.empty()) {
      const double give_up = now_ + static_cast<double>(relays.size()) * slot;
      if (tx.attempts <= params_.max_retries) {
        ++tx.attempts;
        schedule({give_up, 0, EventKind::Retry, sender, 0, {}});
      } else {
        kill(tx.copy, DropCause::RetryExhausted);
        schedule({give_up, 0, EventKind::SenderFree, sender, 0, {}});
      }
      return;
    }

    m_.ack_transmissions += forwarders.size();
    m_.duplicate_forwards += forwarders.size() - 1;
    packets_[tx.copy.packet].alive += static_cast<std::uint32_t>(forwarders.size() - 1);
    const NodeId dst = packets_[tx.copy.packet].dst;
    const Copy next{tx.copy.packet, tx.copy.hops + 1};
    for (std::size_t f : forwarders) {
      const double at = now_ + static_cast<double>(f) * slot;
      if (relays[f] == dst) {
        schedule({at, 0, EventKind::Deliver, relays[f], 0, next});
      } else {
        schedule({at, 0, EventKind::Arrive, relays[f], 0, next});
      }
    }
    schedule({now_ + static_cast<double>(forwarders.front()) * slot, 0, EventKind::SenderFree, sender, 0, {}});
  }

  void on_arrive(NodeId node, Copy copy) {
    if (copy.hops >= static_cast<std::uint32_t>(params_.ttl_hops)) {
      kill(copy, DropCause::TtlExpired);
      return;
    }
    if (!nodes_[node].seen.insert(copy.packet).second) {
      kill(copy, DropCause::DuplicateDiscard);
      return;
    }
    enqueue(node, copy);
  }

  void on_deliver(Copy copy) {
    Packet& pkt = packets_[copy.packet];
    --pkt.alive;
    if (pkt.delivered) {
      ++m_.duplicate_deliveries;
      return;
    }
    pkt.delivered = true;
    ++m_.delivered_packets;
    delay_sum_ms_ += now_ - pkt.created_ms;
  }

  void kill(Copy copy, DropCause cause) {
    Packet& pkt = packets_[copy.packet];
    --pkt.alive;
    if (pkt.alive == 0 && !pkt.delivered) ++m_.drops_by_cause[static_cast<std::size_t>(cause)];
  }

  const Plan& plan_for(NodeId sender, NodeId dst) {
    const std::uint64_t key = static_cast<std::uint64_t>(sender) * world_.size() + dst;
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    return plans_.emplace(key, make_plan(sender, dst)).first->second;
  }

  const std::vector<double>& etx_for(NodeId dst) {
    if (auto it = etx_.find(dst); it != etx_.end()) return it->second;
    return etx_.emplace(dst, etx_to(world_, dst)).first->second;
  }

  Plan make_plan(NodeId sender, NodeId dst) {
    const auto& etx = etx_for(dst);
    Plan plan;
    std::vector<RelayProfile> cands;
    try {
      cands = candidate_set(world_, sender, dst, params_.k_max, etx);
    } catch (const Error& e) {
      if (e.code() != Errc::EmptyCandidates) throw;
      return plan;
    }
    const bool direct = cands.size() == 1 && cands.front().node == dst;

    switch (scheme_) {
      case Scheme::Exor:
        for (const RelayProfile& c : cands) plan.relays.push_back(c.node);
        break;
      case Scheme::Soar:
        for (const RelayProfile& c : cands) {
          if (direct || 1.0 / c.pdr + etx[c.node] <= etx[sender] + params_.soar_corridor) {
            plan.relays.push_back(c.node);
          }
        }
        break;
      case Scheme::Dda:
        if (direct) {
          plan.relays.push_back(dst);
          break;
        }
        plan = dda_plan(cands);
        break;
    }
    return plan;
  }

  Plan dda_plan(const std::vector<RelayProfile>& cands) {
    Plan plan;
    std::vector<NodeId> ids;
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < cands.size(); ++a) {
      ids.push_back(cands[a].node);
      for (std::size_t b = a + 1; b < cands.size(); ++b) {
        if (world_.pdr(cands[a].node, cands[b].node) > 0.0) edges.push_back({cands[a].node, cands[b].node});
      }
    }
    const CandidateGraph graph(std::move(ids), edges);
    try {
      const SelectionResult sel = select_relaying_network(graph, cands, params_.slot_ms, params_.dda);
      plan.relays = sel.chosen;
    } catch (const Error& e) {
      if (e.code() != Errc::NoRelayingNetwork) throw;
      plan.relays.push_back(best_single_relay(cands).node);
      plan.fallback = true;
      ++m_.deterministic_fallbacks;
    }
    return plan;
  }

  RunMetrics finish() {
    for (const Packet& p : packets_) {
      if (!p.delivered && p.alive > 0) ++m_.in_flight_at_end;
    }
    const auto beacons_per_node =
        static_cast<std::uint64_t>(std::floor(params_.sim_duration_s / params_.beacon_interval_s));
    m_.beacon_transmissions = beacons_per_node * world_.size();
    if (m_.sent_source_packets > 0) {
      m_.delivery_ratio = static_cast<double>(m_.delivered_packets) / static_cast<double>(m_.sent_source_packets);
    }
    if (m_.delivered_packets > 0) {
      m_.mean_e2e_delay_ms = delay_sum_ms_ / static_cast<double>(m_.delivered_packets);
      m_.duplicates_per_delivered =
          static_cast<double>(m_.duplicate_forwards) / static_cast<double>(m_.delivered_packets);
    }
    if (m_.total_transmissions > 0) {
      m_.throughput_ratio = static_cast<double>(m_.delivered_packets) / static_cast<double>(m_.total_transmissions);
    }
    const std::uint64_t all_frames = m_.total_transmissions + m_.ack_transmissions + m_.beacon_transmissions;
    if (all_frames > 0) {
      m_.throughput_ratio_all = static_cast<double>(m_.delivered_packets) / static_cast<double>(all_frames);
    }
    return m_;
  }

  const World& world_;
  const SimParams& params_;
  Scheme scheme_;
  detail::Rng rng_;
  std::vector<NodeState> nodes_;
  std::vector<Flow> flows_;
  std::vector<Packet> packets_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::unordered_map<std::uint64_t, Plan> plans_;
  std::unordered_map<NodeId, std::vector<double>> etx_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
  double frame_ms_ = 0.0;
  double end_ms_ = 0.0;
  double delay_sum_ms_ = 0.0;
  RunMetrics m_;
};

constexpr std::string_view kSummaryNames[] = {
    "delivery_ratio",    "mean_e2e_delay_ms",   "throughput_ratio",         "throughput_ratio_all",
    "duplicate_forwards", "duplicates_per_delivered", "sent",                "delivered",
    "total_transmissions",
};

std::array<double, std::size(kSummaryNames)> summary_values(const RunMetrics& m) {
  return {m.delivery_ratio,
          m.mean_e2e_delay_ms,
          m.throughput_ratio,
          m.throughput_ratio_all,
          static_cast<double>(m.duplicate_forwards),
          m.duplicates_per_delivered,
          static_cast<double>(m.sent_source_packets),
          static_cast<double>(m.delivered_packets),
          static_cast<double>(m.total_transmissions)};
}

}  // namespace

RunMetrics simulate(const World& world, Scheme scheme, std::uint64_t seed) {
  if (scheme != Scheme::Dda && scheme != Scheme::Exor && scheme != Scheme::Soar) {
    throw Error(Errc::UnknownScheme, "unsupported scheme");
  }
  return Simulation(world, scheme, seed).run();
}

std::span<const std::string_view> summary_metric_names() { return kSummaryNames; }

const MetricStat& RunSummary::stat(std::string_view name) const {
  for (const MetricStat& s : stats) {
    if (s.name == name) return s;
  }
  throw Error(Errc::InvalidValue, "no summary metric named " + std::string(name));
}

RunSummary summarize_runs(std::span<const RunMetrics> metrics) {
  if (metrics.empty()) throw Error(Errc::EmptyInput, "no runs to summarise");
  RunSummary out;
  out.runs = metrics.size();
  const std::size_t k = std::size(kSummaryNames);
  std::vector<double> mean(k, 0.0);
  for (const RunMetrics& m : metrics) {
    const auto v = summary_values(m);
    for (std::size_t i = 0; i < k; ++i) mean[i] += v[i];
  }
  for (double& x : mean) x /= static_cast<double>(metrics.size());
  std::vector<double> ss(k, 0.0);
  for (const RunMetrics& m : metrics) {
    const auto v = summary_values(m);
    for (std::size_t i = 0; i < k; ++i) ss[i] += (v[i] - mean[i]) * (v[i] - mean[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double sd = metrics.size() > 1 ? std::sqrt(ss[i] / static_cast<double>(metrics.size() - 1)) : 0.0;
    out.stats.push_back({std::string(kSummaryNames[i]), mean[i], sd});
  }
  return out;
}

}  // namespace dda
