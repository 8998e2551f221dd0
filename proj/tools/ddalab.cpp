// ddalab: sweep runner, scheme comparison and single-selection inspector.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dda/dda_select.hpp"
#include "dda/error.hpp"
#include "dda/relay_graph.hpp"
#include "dda/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAssertFailed = 1;
constexpr int kUsage = 2;

// node,pdr,base_utility rows; an optional header line starting with "node".
std::vector<dda::RelayProfile> load_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dda::Error(dda::Errc::IoError, "cannot read " + path);
  std::vector<dda::RelayProfile> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("node", 0) == 0) continue;
    dda::RelayProfile p;
    unsigned node = 0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%u , %lf , %lf %c", &node, &p.pdr, &p.base_utility, &tail) != 3) {
      throw dda::Error(dda::Errc::ParseError, path + ": line " + std::to_string(line_no) + ": expected node,pdr,base_utility");
    }
    p.node = node;
    out.push_back(p);
  }
  return out;
}

int cmd_run(const std::string& config_path, std::size_t jobs, const std::string& format, const std::string& out_dir,
            bool quiet) {
  dda::ScenarioConfig config = dda::load_config(config_path);
  if (!format.empty()) config.format = dda::parse_output_format(format);
  if (!out_dir.empty()) config.output_dir = out_dir;

  const auto progress = [quiet](const dda::RunRecord& r, std::size_t done, std::size_t total) {
    if (quiet && !r.failed) return;
    std::cerr << '[' << done << '/' << total << "] " << dda::to_string(r.cell.scheme) << " nodes=" << r.cell.node_count
              << " flows=" << r.cell.flow_count << " seed=" << r.cell.seed;
    if (r.failed) std::cerr << " FAILED: " << r.error;
    std::cerr << '\n';
  };
  const auto records = dda::run_sweep(config, progress, jobs);
  for (const auto& path : dda::emit_records(records, config.format, config.output_dir)) {
    std::cout << path.string() << '\n';
  }
  return kOk;
}

int cmd_compare(const std::string& runs_path, const std::string& assertion) {
  const auto records = dda::load_runs_csv(runs_path);
  const dda::ComparisonReport report = dda::compare_schemes(records);
  dda::write_comparison(std::cout, report);
  if (assertion != "trends") return kOk;
  return report.all_passed() ? kOk : kAssertFailed;
}

int cmd_inspect(const std::string& graph_path, const std::string& pdr_path, double slot_ms,
                dda::SelectionConfig config) {
  const dda::CandidateGraph graph = dda::load_edge_list(graph_path);
  const auto profiles = load_profiles(pdr_path);
  const dda::SelectionResult result = dda::select_relaying_network(graph, profiles, slot_ms, config);

  dda::write_score_csv(std::cout, result.all_scores);
  std::printf("\nweights: v_r_dt=%.6g v_r_u=%.6g xi=%.6g", result.weights.v_r_dt, result.weights.v_r_u,
              result.weights.xi);
  if (result.mode == dda::ScoringMode::LegacyWeighted) {
    std::printf(" w_dt=%.6g w_u=%.6g", result.weights.legacy_w_dt, result.weights.legacy_w_u);
  }
  std::printf("\nchosen: %s\n", dda::format_node_list(result.chosen).c_str());
  std::printf("node,priority,pdr,base_utility,adjusted_utility\n");
  for (const dda::RelayProfile& p : result.profiles) {
    std::printf("%u,%d,%.6g,%.6g,%.6g\n", p.node, p.priority, p.pdr, p.base_utility, p.adjusted_utility);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ddalab: relaying-network selection experiments"};
  app.require_subcommand(1);

  std::string config_path, format, out_dir;
  std::size_t jobs = 0;
  bool quiet = false;
  CLI::App* run = app.add_subcommand("run", "run a scenario sweep and write record files");
  run->add_option("--config", config_path, "scenario config file")->required();
  run->add_option("--jobs", jobs, "worker threads (0 = automatic)");
  run->add_option("--format", format, "csv or jsonl (overrides the config)")->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  run->add_flag("--quiet", quiet, "report failed cells only");

  std::string runs_path, assertion = "none";
  CLI::App* compare = app.add_subcommand("compare", "paired DDA-minus-baseline deltas from runs.csv");
  compare->add_option("--runs", runs_path, "runs.csv from a sweep")->required();
  compare->add_option("--assert", assertion, "trends: exit 1 unless every trend check holds")
      ->check(CLI::IsMember({"none", "trends"}));

  std::string graph_path, pdr_path, scoring = "rank_weighted", priority = "pdr_descending";
  double slot_ms = 45.0;
  dda::SelectionConfig sel;
  CLI::App* inspect = app.add_subcommand("inspect", "score every relaying network of one candidate set");
  inspect->add_option("--graph", graph_path, "candidate edge list")->required();
  inspect->add_option("--pdr", pdr_path, "csv rows node,pdr,base_utility")->required();
  inspect->add_option("--slot-ms", slot_ms, "waiting slot in ms")->check(CLI::PositiveNumber);
  inspect->add_option("--scoring", scoring)->check(CLI::IsMember({"rank_weighted", "legacy_weighted"}));
  inspect->add_option("--priority", priority)->check(CLI::IsMember({"pdr_descending", "adjusted_utility"}));
  inspect->add_flag("--dominance-prune", sel.dominance_prune, "drop networks dominated on both metrics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, jobs, format, out_dir, quiet);
    if (*compare) return cmd_compare(runs_path, assertion);
    sel.scoring = scoring == "legacy_weighted" ? dda::ScoringMode::LegacyWeighted : dda::ScoringMode::RankWeighted;
    sel.priority = priority == "adjusted_utility" ? dda::PriorityMode::AdjustedUtility : dda::PriorityMode::PdrDescending;
    return cmd_inspect(graph_path, pdr_path, slot_ms, sel);
  } catch (const std::exception& e) {
    std::cerr << "ddalab: " << e.what() << '\n';
    return kUsage;
  }
}
