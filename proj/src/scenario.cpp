#include "dda/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "dda/error.hpp"

namespace dda {
namespace {

constexpr std::string_view kRunsHeader =
    "scheme,node_count,flow_count,seed,delivery_ratio,mean_e2e_delay_ms,throughput_ratio,"
    "duplicates_per_delivered,sent,delivered,total_transmissions";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(Errc::InvalidValue, std::string(key) + ": invalid value '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v);
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  const std::string s = lower(v);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  bad_value(key, v);
}

std::vector<std::uint64_t> to_uint_list(std::string_view key, std::string_view v) {
  std::vector<std::uint64_t> out;
  if (v.empty()) return out;
  for (std::string_view item : split(v, ',')) {
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_uint(key, item));
      continue;
    }
    const std::uint64_t lo = to_uint(key, trim(item.substr(0, dots)));
    const std::uint64_t hi = to_uint(key, trim(item.substr(dots + 2)));
    if (hi < lo || hi - lo > 1'000'000) bad_value(key, item);
    for (std::uint64_t x = lo; x <= hi; ++x) out.push_back(x);
  }
  return out;
}

std::vector<std::size_t> to_size_list(std::string_view key, std::string_view v) {
  const auto raw = to_uint_list(key, v);
  return {raw.begin(), raw.end()};
}

using Setter = void (*)(ScenarioConfig&, std::string_view key, std::string_view value);

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"area_width_m", [](ScenarioConfig& c, auto k, auto v) { c.params.area_width_m = to_double(k, v); }},
      {"area_height_m", [](ScenarioConfig& c, auto k, auto v) { c.params.area_height_m = to_double(k, v); }},
      {"radio_range_m", [](ScenarioConfig& c, auto k, auto v) { c.params.radio_range_m = to_double(k, v); }},
      {"data_rate_bps", [](ScenarioConfig& c, auto k, auto v) { c.params.data_rate_bps = to_double(k, v); }},
      {"packet_size_bytes",
       [](ScenarioConfig& c, auto k, auto v) { c.params.packet_size_bytes = to_uint(k, v); }},
      {"cbr_interval_s", [](ScenarioConfig& c, auto k, auto v) { c.params.cbr_interval_s = to_double(k, v); }},
      {"beacon_interval_s",
       [](ScenarioConfig& c, auto k, auto v) { c.params.beacon_interval_s = to_double(k, v); }},
      {"queue_cap", [](ScenarioConfig& c, auto k, auto v) { c.params.queue_cap = to_uint(k, v); }},
      {"slot_ms", [](ScenarioConfig& c, auto k, auto v) { c.params.slot_ms = to_double(k, v); }},
      {"max_retries", [](ScenarioConfig& c, auto k, auto v) { c.params.max_retries = to_int(k, v); }},
      {"ttl_hops", [](ScenarioConfig& c, auto k, auto v) { c.params.ttl_hops = to_int(k, v); }},
      {"sim_duration_s", [](ScenarioConfig& c, auto k, auto v) { c.params.sim_duration_s = to_double(k, v); }},
      {"drain_s", [](ScenarioConfig& c, auto k, auto v) { c.params.drain_s = to_double(k, v); }},
      {"k_max", [](ScenarioConfig& c, auto k, auto v) { c.params.k_max = to_uint(k, v); }},
      {"pdr_gamma", [](ScenarioConfig& c, auto k, auto v) { c.params.pdr_gamma = to_double(k, v); }},
      {"pdr_floor", [](ScenarioConfig& c, auto k, auto v) { c.params.pdr_floor = to_double(k, v); }},
      {"soar_corridor", [](ScenarioConfig& c, auto k, auto v) { c.params.soar_corridor = to_double(k, v); }},
      {"node_count", [](ScenarioConfig& c, auto k, auto v) { c.node_counts = {to_uint(k, v)}; }},
      {"cbr_flows", [](ScenarioConfig& c, auto k, auto v) { c.cbr_flow_counts = {to_uint(k, v)}; }},
      {"node_counts", [](ScenarioConfig& c, auto k, auto v) { c.node_counts = to_size_list(k, v); }},
      {"cbr_flow_counts", [](ScenarioConfig& c, auto k, auto v) { c.cbr_flow_counts = to_size_list(k, v); }},
      {"seeds", [](ScenarioConfig& c, auto k, auto v) { c.seeds = to_uint_list(k, v); }},
      {"schemes",
       [](ScenarioConfig& c, auto k, auto v) {
         c.schemes.clear();
         if (v.empty()) return;
         for (std::string_view item : split(v, ',')) {
           try {
             c.schemes.push_back(parse_scheme(item));
           } catch (const Error&) {
             bad_value(k, item);
           }
         }
       }},
      {"dda_scoring",
       [](ScenarioConfig& c, auto k, auto v) {
         const std::string s = lower(v);
         if (s == "rank_weighted") {
           c.params.dda.scoring = ScoringMode::RankWeighted;
         } else if (s == "legacy_weighted") {
           c.params.dda.scoring = ScoringMode::LegacyWeighted;
         } else {
           bad_value(k, v);
         }
       }},
      {"dda_priority",
       [](ScenarioConfig& c, auto k, auto v) {
         const std::string s = lower(v);
         if (s == "pdr_descending") {
           c.params.dda.priority = PriorityMode::PdrDescending;
         } else if (s == "adjusted_utility") {
           c.params.dda.priority = PriorityMode::AdjustedUtility;
         } else {
           bad_value(k, v);
         }
       }},
      {"dda_candidate_cap", [](ScenarioConfig& c, auto k, auto v) { c.params.dda.candidate_cap = to_uint(k, v); }},
      {"dda_dominance_prune",
       [](ScenarioConfig& c, auto k, auto v) { c.params.dda.dominance_prune = to_bool(k, v); }},
      {"dda_legacy_w_dt", [](ScenarioConfig& c, auto k, auto v) { c.params.dda.legacy_w_dt = to_double(k, v); }},
      {"dda_legacy_w_u", [](ScenarioConfig& c, auto k, auto v) { c.params.dda.legacy_w_u = to_double(k, v); }},
      {"output_dir", [](ScenarioConfig& c, auto, auto v) { c.output_dir = std::string(v); }},
      {"format", [](ScenarioConfig& c, auto, auto v) { c.format = parse_output_format(v); }},
  };
  return table;
}

template <typename T>
void require_axis(const std::vector<T>& axis, const char* key) {
  if (axis.empty()) throw Error(Errc::MissingField, std::string(key) + " must list at least one value");
  std::set<T> seen(axis.begin(), axis.end());
  if (seen.size() != axis.size()) throw Error(Errc::InvalidValue, std::string(key) + ": duplicate entries");
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Round-trips through the 9-digit text so that csv and jsonl carry the same value.
double rounded(double v) { return std::strtod(fmt_double(v).c_str(), nullptr); }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

struct CellKey {
  Scheme scheme;
  std::size_t node_count;
  std::size_t flow_count;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct PointMeans {
  double delay = 0.0;
  double delivery = 0.0;
  double throughput = 0.0;
  double duplicates = 0.0;
  std::size_t runs = 0;
};

PointMeans means_of(const std::vector<const RunMetrics*>& runs) {
  PointMeans m;
  for (const RunMetrics* r : runs) {
    m.delay += r->mean_e2e_delay_ms;
    m.delivery += r->delivery_ratio;
    m.throughput += r->throughput_ratio;
    m.duplicates += r->duplicates_per_delivered;
  }
  m.runs = runs.size();
  if (m.runs > 0) {
    const double n = static_cast<double>(m.runs);
    m.delay /= n;
    m.delivery /= n;
    m.throughput /= n;
    m.duplicates /= n;
  }
  return m;
}

}  // namespace

std::string_view to_string(OutputFormat format) noexcept {
  return format == OutputFormat::Csv ? "csv" : "jsonl";
}

OutputFormat parse_output_format(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "csv") return OutputFormat::Csv;
  if (s == "jsonl") return OutputFormat::Jsonl;
  bad_value("format", text);
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig config;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(Errc::UnknownKey, "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    it->second(config, key, value);
  }
  validate(config);
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ScenarioConfig& config) {
  require_axis(config.node_counts, "node_counts");
  require_axis(config.cbr_flow_counts, "cbr_flow_counts");
  require_axis(config.schemes, "schemes");
  require_axis(config.seeds, "seeds");
  for (std::size_t n : config.node_counts) {
    if (n < 2) throw Error(Errc::InvalidValue, "node_counts: every entry needs at least two nodes");
  }
  SimParams probe = config.params;
  probe.node_count = config.node_counts.front();
  probe.cbr_flows = config.cbr_flow_counts.front();
  validate(probe);
}

std::vector<SweepCell> sweep_cells(const ScenarioConfig& config) {
  std::vector<SweepCell> cells;
  cells.reserve(config.schemes.size() * config.node_counts.size() * config.cbr_flow_counts.size() *
                config.seeds.size());
  for (Scheme s : config.schemes) {
    for (std::size_t n : config.node_counts) {
      for (std::size_t f : config.cbr_flow_counts) {
        for (std::uint64_t seed : config.seeds) cells.push_back({s, n, f, seed});
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

RunRecord run_cell(const ScenarioConfig& config, const SweepCell& cell) {
  RunRecord record;
  record.cell = cell;
  try {
    SimParams params = config.params;
    params.node_count = cell.node_count;
    params.cbr_flows = cell.flow_count;
    const World world = build_world(params, cell.seed);
    record.metrics = simulate(world, cell.scheme, cell.seed);
  } catch (const std::exception& e) {
    record.failed = true;
    record.error = e.what();
  }
  return record;
}

std::vector<RunRecord> run_sweep(const ScenarioConfig& config, const ProgressSink& progress, std::size_t jobs) {
  const std::vector<SweepCell> cells = sweep_cells(config);
  std::vector<RunRecord> records(cells.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(cells.size(), 1));

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex sink_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      records[i] = run_cell(config, cells[i]);
      if (progress) {
        std::lock_guard lock(sink_mutex);
        progress(records[i], ++done, cells.size());
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  return records;
}

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kRunsHeader << '\n';
  for (const RunRecord& r : records) {
    if (r.failed) continue;
    const RunMetrics& m = r.metrics;
    out << to_string(r.cell.scheme) << ',' << r.cell.node_count << ',' << r.cell.flow_count << ',' << r.cell.seed
        << ',' << fmt_double(m.delivery_ratio) << ',' << fmt_double(m.mean_e2e_delay_ms) << ','
        << fmt_double(m.throughput_ratio) << ',' << fmt_double(m.duplicates_per_delivered) << ','
        << m.sent_source_packets << ',' << m.delivered_packets << ',' << m.total_transmissions << '\n';
  }
}

void write_runs_jsonl(std::ostream& out, std::span<const RunRecord> records) {
  for (const RunRecord& r : records) {
    if (r.failed) continue;
    const RunMetrics& m = r.metrics;
    nlohmann::ordered_json j;
    j["scheme"] = to_string(r.cell.scheme);
    j["node_count"] = r.cell.node_count;
    j["flow_count"] = r.cell.flow_count;
    j["seed"] = r.cell.seed;
    j["delivery_ratio"] = rounded(m.delivery_ratio);
    j["mean_e2e_delay_ms"] = rounded(m.mean_e2e_delay_ms);
    j["throughput_ratio"] = rounded(m.throughput_ratio);
    j["duplicates_per_delivered"] = rounded(m.duplicates_per_delivered);
    j["sent"] = m.sent_source_packets;
    j["delivered"] = m.delivered_packets;
    j["total_transmissions"] = m.total_transmissions;
    out << j.dump() << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << "scheme,node_count,flow_count,runs";
  for (std::string_view name : summary_metric_names()) out << ',' << name << "_mean," << name << "_std";
  out << '\n';
  std::map<CellKey, std::vector<RunMetrics>> groups;
  for (const RunRecord& r : records) {
    if (!r.failed) groups[{r.cell.scheme, r.cell.node_count, r.cell.flow_count}].push_back(r.metrics);
  }
  for (const auto& [key, runs] : groups) {
    const RunSummary s = summarize_runs(runs);
    out << to_string(key.scheme) << ',' << key.node_count << ',' << key.flow_count << ',' << s.runs;
    for (const MetricStat& stat : s.stats) out << ',' << fmt_double(stat.mean) << ',' << fmt_double(stat.stddev);
    out << '\n';
  }
}

std::vector<std::filesystem::path> emit_records(std::span<const RunRecord> records, OutputFormat format,
                                                const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::filesystem::path& path, auto&& writer) {
    std::ofstream out = open_output(path);
    writer(out);
    finish_output(out, path);
    written.push_back(path);
  };
  if (format == OutputFormat::Csv) {
    emit(out_dir / "runs.csv", [&](std::ostream& o) { write_runs_csv(o, records); });
  } else {
    emit(out_dir / "runs.jsonl", [&](std::ostream& o) { write_runs_jsonl(o, records); });
  }
  emit(out_dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, records); });
  if (std::any_of(records.begin(), records.end(), [](const RunRecord& r) { return r.failed; })) {
    emit(out_dir / "failures.csv", [&](std::ostream& o) {
      o << "scheme,node_count,flow_count,seed,error\n";
      for (const RunRecord& r : records) {
        if (!r.failed) continue;
        std::string msg = r.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        o << to_string(r.cell.scheme) << ',' << r.cell.node_count << ',' << r.cell.flow_count << ','
          << r.cell.seed << ',' << msg << '\n';
      }
    });
  }
  return written;
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kRunsHeader) {
    throw Error(Errc::ParseError, "line 1: expected header " + std::string(kRunsHeader));
  }
  std::vector<RunRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != 11) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 11 fields");
    }
    try {
      RunRecord r;
      r.cell.scheme = parse_scheme(fields[0]);
      r.cell.node_count = to_uint("node_count", fields[1]);
      r.cell.flow_count = to_uint("flow_count", fields[2]);
      r.cell.seed = to_uint("seed", fields[3]);
      RunMetrics& m = r.metrics;
      m.delivery_ratio = to_double("delivery_ratio", fields[4]);
      m.mean_e2e_delay_ms = to_double("mean_e2e_delay_ms", fields[5]);
      m.throughput_ratio = to_double("throughput_ratio", fields[6]);
      m.duplicates_per_delivered = to_double("duplicates_per_delivered", fields[7]);
      m.sent_source_packets = to_uint("sent", fields[8]);
      m.delivered_packets = to_uint("delivered", fields[9]);
      m.total_transmissions = to_uint("total_transmissions", fields[10]);
      out.push_back(std::move(r));
    } catch (const Error& e) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<RunRecord> load_runs_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  try {
    return read_runs_csv(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

bool ComparisonReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const TrendCheck& c) { return c.passed; });
}

ComparisonReport compare_schemes(std::span<const RunRecord> records) {
  // (scheme, node_count, flow_count) -> seed -> metrics
  std::map<CellKey, std::map<std::uint64_t, const RunMetrics*>> cells;
  for (const RunRecord& r : records) {
    if (!r.failed) cells[{r.cell.scheme, r.cell.node_count, r.cell.flow_count}][r.cell.seed] = &r.metrics;
  }

  ComparisonReport report;
  for (const auto& [key, dda_runs] : cells) {
    if (key.scheme != Scheme::Dda) continue;
    for (Scheme baseline : {Scheme::Exor, Scheme::Soar}) {
      const auto it = cells.find({baseline, key.node_count, key.flow_count});
      if (it == cells.end()) continue;
      CellDelta d{.node_count = key.node_count, .flow_count = key.flow_count, .baseline = baseline};
      for (const auto& [seed, dm] : dda_runs) {
        const auto b = it->second.find(seed);
        if (b == it->second.end()) continue;
        const RunMetrics& bm = *b->second;
        ++d.paired_seeds;
        d.delay_ms += dm->mean_e2e_delay_ms - bm.mean_e2e_delay_ms;
        d.delivery_ratio += dm->delivery_ratio - bm.delivery_ratio;
        d.throughput_ratio += dm->throughput_ratio - bm.throughput_ratio;
        d.duplicates_per_delivered += dm->duplicates_per_delivered - bm.duplicates_per_delivered;
      }
      if (d.paired_seeds == 0) continue;
      const double n = static_cast<double>(d.paired_seeds);
      d.delay_ms /= n;
      d.delivery_ratio /= n;
      d.throughput_ratio /= n;
      d.duplicates_per_delivered /= n;
      report.deltas.push_back(d);
    }
  }
  if (report.deltas.empty()) throw Error(Errc::NoCommonCells, "DDA shares no cell and seed with any baseline");

  std::map<CellKey, PointMeans> point;
  for (const auto& [key, runs] : cells) {
    std::vector<const RunMetrics*> list;
    for (const auto& [seed, m] : runs) list.push_back(m);
    point[key] = means_of(list);
  }

  std::set<std::size_t> flows;
  std::set<Scheme> schemes;
  for (const auto& [key, m] : point) {
    flows.insert(key.flow_count);
    schemes.insert(key.scheme);
  }

  const auto check_monotone = [&](const char* name, auto value, bool increasing) {
    TrendCheck c;
    c.name = name;
    c.passed = true;
    for (Scheme s : schemes) {
      for (std::size_t f : flows) {
        const PointMeans* prev = nullptr;
        std::size_t prev_n = 0;
        for (const auto& [key, m] : point) {
          if (key.scheme != s || key.flow_count != f) continue;
          if (prev != nullptr) {
            const bool ok = increasing ? value(m) >= value(*prev) : value(m) <= value(*prev);
            if (!ok) {
              c.passed = false;
              std::ostringstream msg;
              msg << to_string(s) << " flows=" << f << " n=" << prev_n << "->" << key.node_count << ": "
                  << fmt_double(value(*prev)) << " -> " << fmt_double(value(m)) << "; ";
              c.detail += msg.str();
            }
          }
          prev = &m;
          prev_n = key.node_count;
        }
      }
    }
    if (c.passed) c.detail = "holds at every density step";
    report.checks.push_back(std::move(c));
  };
  check_monotone("delay_nonincreasing", [](const PointMeans& m) { return m.delay; }, false);
  check_monotone("delivery_nondecreasing", [](const PointMeans& m) { return m.delivery; }, true);

  const auto check_points = [&](const char* name, auto holds, std::span<const Scheme> baselines,
                                bool allow_misses) {
    std::size_t points = 0;
    std::size_t hits = 0;
    std::string misses;
    for (const auto& [key, m] : point) {
      if (key.scheme != Scheme::Dda) continue;
      bool any = false;
      bool ok = true;
      for (Scheme b : baselines) {
        const auto it = point.find({b, key.node_count, key.flow_count});
        if (it == point.end()) continue;
        any = true;
        if (!holds(m, it->second)) ok = false;
      }
      if (!any) continue;
      ++points;
      if (ok) {
        ++hits;
      } else {
        misses += " n=" + std::to_string(key.node_count) + ",flows=" + std::to_string(key.flow_count);
      }
    }
    const std::size_t needed = allow_misses ? (points * 4 + 4) / 5 : points;
    TrendCheck c;
    c.name = name;
    c.passed = points > 0 && hits >= needed;
    c.detail = std::to_string(hits) + "/" + std::to_string(points) + " points (need " + std::to_string(needed) + ")";
    if (!misses.empty()) c.detail += "; misses:" + misses;
    report.checks.push_back(std::move(c));
  };
  constexpr Scheme kExorOnly[] = {Scheme::Exor};
  constexpr Scheme kBoth[] = {Scheme::Exor, Scheme::Soar};
  check_points("dda_delay_below_exor", [](const PointMeans& d, const PointMeans& b) { return d.delay < b.delay; },
               kExorOnly, false);
  check_points("dda_duplicates_below_exor",
               [](const PointMeans& d, const PointMeans& b) { return d.duplicates < b.duplicates; }, kExorOnly, false);
  check_points("dda_throughput_best",
               [](const PointMeans& d, const PointMeans& b) { return d.throughput >= b.throughput; }, kBoth, true);
  return report;
}

void write_comparison(std::ostream& out, const ComparisonReport& report) {
  char line[256];
  std::snprintf(line, sizeof line, "%-11s %6s %6s %6s %12s %12s %12s %12s\n", "baseline", "nodes", "flows", "seeds",
                "d_delay_ms", "d_delivery", "d_throughput", "d_dup_per_del");
  out << line;
  for (const CellDelta& d : report.deltas) {
    std::snprintf(line, sizeof line, "%-11s %6zu %6zu %6zu %12.3f %12.4f %12.4f %12.4f\n",
                  std::string(to_string(d.baseline)).c_str(), d.node_count, d.flow_count, d.paired_seeds, d.delay_ms,
                  d.delivery_ratio, d.throughput_ratio, d.duplicates_per_delivered);
    out << line;
  }
  out << '\n';
  for (const TrendCheck& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
}

}  // namespace dda
