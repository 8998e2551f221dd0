// Batch experiment driver: scenario configs, sweeps over density and load,
// record files and scheme comparison.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dda/sim.hpp"

namespace dda {

enum class OutputFormat { Csv, Jsonl };

std::string_view to_string(OutputFormat format) noexcept;
/// "csv" or "jsonl". Throws InvalidValue otherwise.
OutputFormat parse_output_format(std::string_view text);

/// Simulation parameters plus the sweep axes. params.node_count and
/// params.cbr_flows are overridden per cell by the axes.
struct ScenarioConfig {
  SimParams params;
  std::vector<std::size_t> node_counts{200};
  std::vector<std::size_t> cbr_flow_counts{60};
  std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir{"ddalab-out"};
  OutputFormat format = OutputFormat::Csv;
};

/// Flat `key = value` lines, `#` comments, comma-separated lists. Integer
/// lists also accept `a..b` ranges. Omitted keys keep their defaults.
/// Throws UnknownKey (with line number), InvalidValue (with key) or
/// MissingField for an empty axis.
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws IoError with the path.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Checks axis non-emptiness and every SimParams invariant for each cell.
void validate(const ScenarioConfig& config);

struct SweepCell {
  Scheme scheme = Scheme::Dda;
  std::size_t node_count = 0;
  std::size_t flow_count = 0;
  std::uint64_t seed = 0;

  friend auto operator<=>(const SweepCell&, const SweepCell&) = default;
};

struct RunRecord {
  SweepCell cell;
  RunMetrics metrics;
  bool failed = false;
  std::string error;
};

/// Full cross product of the axes, sorted.
std::vector<SweepCell> sweep_cells(const ScenarioConfig& config);

/// Builds the cell's world and simulates it. Never throws for simulation
/// errors; the record is flagged instead.
RunRecord run_cell(const ScenarioConfig& config, const SweepCell& cell);

/// Called once per finished cell, in completion order, serialised.
using ProgressSink = std::function<void(const RunRecord& record, std::size_t done, std::size_t total)>;

/// Runs every cell on up to `jobs` threads (0 picks min(cells, hardware
/// threads)). The result is sorted by cell regardless of scheduling.
std::vector<RunRecord> run_sweep(const ScenarioConfig& config, const ProgressSink& progress = {},
                                 std::size_t jobs = 0);

/// Header: scheme,node_count,flow_count,seed,delivery_ratio,mean_e2e_delay_ms,
/// throughput_ratio,duplicates_per_delivered,sent,delivered,total_transmissions.
/// Failed records are skipped.
void write_runs_csv(std::ostream& out, std::span<const RunRecord> records);
void write_runs_jsonl(std::ostream& out, std::span<const RunRecord> records);

/// Means and sample standard deviations per (scheme, node_count, flow_count).
void write_summary_csv(std::ostream& out, std::span<const RunRecord> records);

/// Writes runs.csv or runs.jsonl plus summary.csv, and failures.csv when any
/// record failed. Returns the written paths. Throws IoError with the path.
std::vector<std::filesystem::path> emit_records(std::span<const RunRecord> records, OutputFormat format,
                                                const std::filesystem::path& out_dir);

/// Inverse of write_runs_csv for the columns it carries. Throws ParseError
/// with the line number.
std::vector<RunRecord> read_runs_csv(std::istream& in);
std::vector<RunRecord> load_runs_csv(const std::filesystem::path& path);

/// Paired DDA minus baseline means over the seeds both schemes share.
struct CellDelta {
  std::size_t node_count = 0;
  std::size_t flow_count = 0;
  Scheme baseline = Scheme::Exor;
  std::size_t paired_seeds = 0;
  double delay_ms = 0.0;
  double delivery_ratio = 0.0;
  double throughput_ratio = 0.0;
  double duplicates_per_delivered = 0.0;
};

struct TrendCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ComparisonReport {
  std::vector<CellDelta> deltas;
  std::vector<TrendCheck> checks;

  bool all_passed() const;
  /// 0 when every check holds, 1 otherwise.
  int exit_status() const { return all_passed() ? 0 : 1; }
};

/// Paired deltas plus the density-trend checks:
///   delay_nonincreasing, delivery_nondecreasing (every scheme, per flow count),
///   dda_delay_below_exor, dda_duplicates_below_exor (every density point),
///   dda_throughput_best (at least 80% of density points, rounded up).
/// Throws NoCommonCells when DDA and no baseline share a cell.
ComparisonReport compare_schemes(std::span<const RunRecord> records);

void write_comparison(std::ostream& out, const ComparisonReport& report);

}  // namespace dda
