#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "symaut/automaton/automaton.hpp"
#include "symaut/dynamics/dynamics.hpp"
#include "symaut/planner/planner.hpp"
#include "symaut/spec_lang/parser.hpp"
#include "symaut/stl/stl.hpp"

namespace symaut::cli {

enum class Mode { open_loop, mpc };

std::string to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view text);

/// One schema problem, located by a JSON pointer into the scenario document.
struct Issue {
  std::string pointer;
  std::string message;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  std::vector<Issue> issues_;
};

/// Horizon, epoch budget and guard tightening used by one execution mode.
struct ModeSettings {
  std::size_t horizon = 50;
  std::size_t epochs = 1400;
  /// Planning uses tightened(automaton, guard_margin); rho is always measured
  /// on the untightened formula.
  double guard_margin = 0.0;
  friend bool operator==(const ModeSettings&, const ModeSettings&) = default;
};

/// Parameters of the cruise-control requirement; the builder turns them into
/// guards over (p_ego, v_ego, d_lead, v_rel).
struct AccSpec {
  double v_ref = 15.0;
  double t_safe = 1.4;
  double d_safe = 5.0;
  std::size_t deadline = 50;
  double epsilon = 1.0;
  friend bool operator==(const AccSpec&, const AccSpec&) = default;
};

struct Outputs {
  std::string trajectory = "trajectory.csv";
  std::string stats = "stats.json";
  std::string report = "report.json";
  friend bool operator==(const Outputs&, const Outputs&) = default;
};

struct Scenario {
  std::string name;
  std::string description;
  RegionTable regions;
  /// The automaton section as written (builder call, inline or file).
  nlohmann::json automaton_spec;
  std::optional<SymbolicAutomaton> automaton;
  std::optional<AccSpec> acc;
  /// Empty in the document only for the acc builder, which derives it.
  std::string stl_text;
  std::optional<stl::Formula> formula;
  DynamicsModel model;
  State x0;
  std::optional<LeadProfile> lead_profile;
  PlannerConfig planner;
  Mode mode = Mode::open_loop;
  ModeSettings open_loop;
  ModeSettings mpc{15, 30, 0.0};
  std::size_t total_steps = 50;
  Outputs outputs;
  /// Directory relative automaton files are resolved against.
  std::filesystem::path base_dir;

  /// Planner config with the active mode's horizon and epochs.
  PlannerConfig effective_config() const;
  const ModeSettings& active() const { return mode == Mode::mpc ? mpc : open_loop; }
};

/// Parses and validates; every problem found is reported in one ScenarioError.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical document; parse_scenario(serialize(s)) reproduces s.
nlohmann::json serialize(const Scenario& s);

/// Git blob hash ("blob <size>\0" + bytes, SHA-1) in lowercase hex.
std::string git_blob_hash(std::string_view bytes);
/// git_blob_hash of the canonical document.
std::string scenario_hash(const Scenario& s);

/// Guards of the cruise-control requirement.
struct AccGuards {
  Predicate invariant, trigger, response;
  std::string formula;
};
AccGuards acc_guards(const AccSpec& spec);

}  // namespace symaut::cli
