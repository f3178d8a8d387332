// plan: run, tabulate and validate planning scenarios.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "symaut/cli/run.hpp"
#include "symaut/cli/scenario.hpp"
#include "symaut/cli/table.hpp"

using namespace symaut;
using namespace symaut::cli;

namespace {

void configure_logging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("PLAN_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

RunOverrides overrides(const std::string& semiring, const std::string& mode,
                       const std::optional<std::uint64_t>& seed) {
  RunOverrides o;
  if (!semiring.empty()) o.semiring = parse_semiring_or_throw(semiring);
  if (!mode.empty()) {
    o.mode = parse_mode(mode);
    if (!o.mode) throw std::invalid_argument("unknown mode '" + mode + "'");
  }
  o.seed = seed;
  return o;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_report(const RunReport& r) {
  std::cout << r.scenario << " " << r.mode << " " << r.semiring << " seed " << r.seed << ": ";
  std::cout << "t* " << (r.t_star ? std::to_string(*r.t_star) : std::string("--"));
  std::cout << ", rho " << (r.rho ? format_number(*r.rho) : std::string("--"));
  std::cout << ", epochs " << r.epochs_used << ", " << r.wall_clock_s << " s";
  if (r.dead_end) {
    std::cout << ", dead end";
    if (r.violated_at) std::cout << " at step " << *r.violated_at;
  }
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Plan trajectories from symbolic automata specifications"};
  app.require_subcommand(1);

  std::string scenario_path, semiring, mode, out_dir = "out";
  std::optional<std::uint64_t> seed;
  auto* run_cmd = app.add_subcommand("run", "plan or execute one scenario");
  run_cmd->add_option("scenario", scenario_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--semiring", semiring, "boolean|minmax|maxplus|minplus");
  run_cmd->add_option("--mode", mode, "open-loop|mpc");
  run_cmd->add_option("--seed", seed, "planner seed");
  run_cmd->add_option("--out", out_dir, "output directory");

  std::vector<std::string> report_paths;
  std::string table_csv;
  auto* table_cmd = app.add_subcommand("table", "compare run reports");
  table_cmd->add_option("reports", report_paths, "report JSON files")->required()->check(CLI::ExistingFile);
  table_cmd->add_option("--csv", table_csv, "also write the table as CSV");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
  validate_cmd->add_option("scenario", validate_path, "scenario JSON")->required();

  std::vector<std::string> sweep_paths;
  std::string sweep_semirings = "minmax,maxplus", sweep_seeds = "0", sweep_mode;
  std::size_t jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "run (scenario, semiring, seed) combinations");
  sweep_cmd->add_option("scenarios", sweep_paths, "scenario JSON files")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--semirings", sweep_semirings, "comma-separated semirings");
  sweep_cmd->add_option("--seeds", sweep_seeds, "comma-separated seeds");
  sweep_cmd->add_option("--mode", sweep_mode, "open-loop|mpc (default: per scenario)");
  sweep_cmd->add_option("--jobs,-j", jobs, "worker threads");
  sweep_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const Scenario s =
          apply_overrides(load_scenario(scenario_path), overrides(semiring, mode, seed));
      const RunArtifacts art = run(s);
      write_artifacts(art, s, out_dir);
      print_report(art.report);
      if (art.report.dead_end) {
        std::cerr << "violation: the specification can no longer be satisfied";
        if (art.report.violated_at) std::cerr << " (step " << *art.report.violated_at << ")";
        std::cerr << "\n";
      }
      return art.report.exit_code();
    }
    if (*table_cmd) {
      std::vector<RunReport> reports;
      for (const auto& p : report_paths) {
        std::ifstream in(p);
        const auto doc = nlohmann::json::parse(in);
        if (doc.is_array()) {
          for (const auto& r : doc) reports.push_back(report_from_json(r));
        } else {
          reports.push_back(report_from_json(doc));
        }
      }
      const Table t = make_table(std::move(reports));
      std::cout << t.text;
      if (!table_csv.empty()) std::ofstream(table_csv, std::ios::binary) << t.csv;
      return 0;
    }
    if (*validate_cmd) {
      const Scenario s = load_scenario(validate_path);
      std::cout << s.name << ": ok (" << s.automaton->n_locations() << " locations, "
                << to_string(s.model.kind) << ", hash " << scenario_hash(s) << ")\n";
      return 0;
    }
    if (*sweep_cmd) {
      std::vector<SweepJob> list;
      for (const auto& p : sweep_paths) {
        const Scenario base = load_scenario(p);
        for (const auto& sr : split(sweep_semirings)) {
          for (const auto& sd : split(sweep_seeds)) {
            list.push_back({apply_overrides(base, overrides(sr, sweep_mode, std::stoull(sd)))});
          }
        }
      }
      const auto reports = sweep(list, out_dir, jobs);
      nlohmann::json merged = nlohmann::json::array();
      int code = 0;
      for (const auto& r : reports) {
        print_report(r);
        merged.push_back(report_to_json(r));
        code = std::max(code, r.exit_code());
      }
      std::filesystem::create_directories(out_dir);
      std::ofstream(std::filesystem::path(out_dir) / "reports.json") << merged.dump(2) << "\n";
      const Table t = make_table(reports);
      std::ofstream(std::filesystem::path(out_dir) / "table.csv", std::ios::binary) << t.csv;
      std::cout << t.text;
      return code;
    }
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
