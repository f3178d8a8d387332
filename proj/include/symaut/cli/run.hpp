#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symaut/cli/scenario.hpp"

namespace symaut::cli {

struct RunOverrides {
  std::optional<SemiringTag> semiring;
  std::optional<Mode> mode;
  std::optional<std::uint64_t> seed;
};

Scenario apply_overrides(Scenario s, const RunOverrides& o);

struct RunReport {
  std::string scenario;
  std::string semiring;
  std::string mode;
  std::uint64_t seed = 0;
  std::optional<std::size_t> t_star;
  std::optional<double> rho;
  double final_weight = 0.0;
  double wall_clock_s = 0.0;
  std::size_t epochs_used = 0;
  /// Open loop: every epoch was dead. Mpc: the weight vector died.
  bool dead_end = false;
  std::optional<std::size_t> violated_at;
  nlohmann::json config;
  std::string input_hash;

  /// 0 when rho >= 0, 2 on a dead end, 1 otherwise.
  int exit_code() const;
};

nlohmann::json report_to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

struct RunArtifacts {
  RunReport report;
  std::string trajectory_csv;
  nlohmann::json stats;
};

/// Plans or executes the scenario as configured (overrides already applied).
RunArtifacts run(const Scenario& s);

/// Writes the trajectory CSV, stats JSON and report JSON under `out_dir`.
void write_artifacts(const RunArtifacts& a, const Scenario& s, const std::filesystem::path& out_dir);

/// CSV with columns t, x0.., u0.., weight; weight is the trace prefix weight
/// alpha^T Ae(x_0) .. Ae(x_t) beta on the untightened automaton. The last row
/// has no control.
std::string trajectory_csv(const Scenario& s, const Trace& trace, const ControlSequence& controls);

struct SweepJob {
  Scenario scenario;  // overrides already applied
};

/// Runs the jobs on up to `workers` threads. Each run writes its artifacts to
/// out_dir/<scenario>_<mode>_<semiring>_s<seed>; the returned reports are
/// sorted by (scenario, mode, semiring, seed) whatever the completion order.
std::vector<RunReport> sweep(const std::vector<SweepJob>& jobs,
                             const std::filesystem::path& out_dir, std::size_t workers);

std::string run_directory_name(const Scenario& s);

/// Finite values as numbers, infinities as the strings "inf" / "-inf".
nlohmann::json number_json(double v);
double number_from_json(const nlohmann::json& j);

}  // namespace symaut::cli
