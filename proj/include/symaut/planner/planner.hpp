#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "symaut/automaton/automaton.hpp"
#include "symaut/dynamics/dynamics.hpp"
#include "symaut/stl/stl.hpp"

namespace symaut {

struct PlannerConfig {
  std::size_t horizon = 50;
  double learning_rate = 0.05;
  std::size_t epochs = 1400;
  SemiringTag semiring = SemiringTag::maxplus;
  std::uint64_t seed = 0;
  /// Stop at the first epoch whose weight is the semiring one.
  bool early_stop = true;
  /// Extra runs from random controls when the zero start does not satisfy.
  std::size_t restart_count = 0;
  /// Adam steps instead of plain gradient steps.
  bool adaptive = false;
  /// Halve the step and retry whenever an update lowers the weight.
  bool backtracking = false;
  /// Weight of the |u|^2 term subtracted from the objective.
  double control_penalty = 0.0;
  /// MPC: start each solve from the previous plan shifted by one step.
  bool warm_start = true;
  /// MPC: the solve at time t includes Ae(x_t) in its product.
  bool mpc_consumes_current_state = true;

  void validate() const;
  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

struct PlanResult {
  ControlSequence controls;
  Trace trace;
  double final_weight = 0.0;
  /// 1-based epoch at which the weight first reached the semiring one,
  /// counted across restarts.
  std::optional<std::size_t> t_star;
  std::vector<double> weight_history;
  std::optional<double> rho;
  std::size_t epochs_used = 0;
  /// Every epoch evaluated to the semiring zero and the fallback objective
  /// was used.
  bool dead_tape = false;
};

/// Gradient ascent on q_init^T Ae(x_0) ... Ae(x_H) beta over H controls
/// (descent for minplus, where smaller is better). `initial` replaces the
/// zero start when given. `formula`, when set, fills PlanResult::rho.
PlanResult open_loop(const DynamicsModel& model, const SymbolicAutomaton& a, const State& x_init,
                     const std::vector<double>& q_init, const PlannerConfig& cfg,
                     const ControlSequence* initial = nullptr,
                     const stl::Formula* formula = nullptr);

struct MpcStep {
  std::size_t t = 0;
  State x;
  Control u;
  /// q_t before consuming x_t.
  std::vector<double> q;
  std::size_t epochs_used = 0;
  double planned_weight = 0.0;
};

struct MpcResult {
  Trace trace;
  ControlSequence controls;
  std::vector<MpcStep> steps;
  /// (q_T^T Ae(x_T)) beta over the executed trace.
  double final_weight = 0.0;
  std::optional<double> rho;
  /// Every location that can still reach acceptance carries the semiring zero.
  bool violated = false;
  std::optional<std::size_t> violated_at;
};

MpcResult mpc(const DynamicsModel& model, const Environment& env, const SymbolicAutomaton& a,
              const State& x_init, const PlannerConfig& cfg, std::size_t total_steps,
              const stl::Formula* formula = nullptr);

/// q is dead when every co-reachable location holds the semiring zero.
bool weight_vector_dead(const SymbolicAutomaton& a, const std::vector<double>& q, SemiringTag s);

}  // namespace symaut
