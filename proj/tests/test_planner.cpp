#include <doctest.h>

#include "oracles.hpp"
#include "symaut/automaton/builders.hpp"
#include "symaut/planner/planner.hpp"

using namespace symaut;

namespace {

struct Reach {
  RegionTable regions;
  SymbolicAutomaton automaton;
  stl::Formula formula;
};

Reach reach_problem() {
  RegionTable r;
  r["goal"] = Region::box({0.5, 0.5}, {0.9, 0.9});
  r["wall"] = Region::box({0.3, -0.8}, {0.5, -0.4});
  std::vector<Predicate> goals{parse_predicate("in(goal)", r)};
  std::vector<Predicate> avoid{parse_predicate("in(wall)", r)};
  auto a = build_sequence_visit(goals, avoid, 2);
  auto f = stl::parse_formula("F in(goal) & G !in(wall)", r);
  return {r, std::move(a), std::move(f)};
}

PlannerConfig small_config(SemiringTag s) {
  PlannerConfig cfg;
  cfg.horizon = 20;
  cfg.epochs = 1000;
  cfg.learning_rate = 0.05;
  cfg.semiring = s;
  return cfg;
}

std::vector<double> alpha_of(const SymbolicAutomaton& a, SemiringTag s) {
  const WVector alpha = alpha_beta(a, s).first;
  return {alpha.values().begin(), alpha.values().end()};
}

}  // namespace

TEST_CASE("a trivially accepting automaton is satisfied at the first epoch") {
  SymbolicAutomaton a(1, 2, {0}, {0}, {{0, 0, Predicate::top()}});
  const auto m = DynamicsModel::single_integrator();
  for (auto s : {SemiringTag::minmax, SemiringTag::maxplus}) {
    const auto cfg = small_config(s);
    const PlanResult r = open_loop(m, a, {0, 0}, alpha_of(a, s), cfg);
    REQUIRE(r.t_star.has_value());
    CHECK(*r.t_star == 1);
    CHECK(r.epochs_used == 1);
    CHECK(r.final_weight == 0.0);
    CHECK(r.controls.size() == cfg.horizon);
    CHECK(r.trace.size() == cfg.horizon + 1);
  }
}

TEST_CASE("open-loop planning reaches a goal") {
  const Reach p = reach_problem();
  auto m = DynamicsModel::single_integrator();
  m.bounds = ControlBounds{{-2, -2}, {2, 2}};
  const State x0{-0.8, -0.6};
  for (auto s : {SemiringTag::minmax, SemiringTag::maxplus}) {
    const auto cfg = small_config(s);
    const PlanResult r = open_loop(m, p.automaton, x0, alpha_of(p.automaton, s), cfg, nullptr,
                                   &p.formula);
    REQUIRE(r.t_star.has_value());
    CHECK(r.epochs_used == *r.t_star);
    CHECK(r.weight_history.size() == r.epochs_used);
    CHECK(r.weight_history.back() == 0.0);
    for (std::size_t e = 0; e + 1 < r.weight_history.size(); ++e) CHECK(r.weight_history[e] < 0.0);
    REQUIRE(r.rho.has_value());
    CHECK(*r.rho >= 0.0);
    CHECK(r.trace == rollout(m, x0, r.controls));
    CHECK(trajectory_weight(p.automaton, r.trace, s).value() == r.final_weight);
    CHECK(oracle::accepts(p.automaton, r.trace));
    for (const auto& u : r.controls) CHECK(m.within_bounds(u));
  }
}

TEST_CASE("without early stop every epoch runs") {
  const Reach p = reach_problem();
  const auto m = DynamicsModel::single_integrator();
  auto cfg = small_config(SemiringTag::maxplus);
  cfg.early_stop = false;
  cfg.epochs = 50;
  const PlanResult r = open_loop(m, p.automaton, {-0.8, -0.6}, alpha_of(p.automaton, cfg.semiring), cfg);
  CHECK(r.epochs_used == 50);
  CHECK(r.weight_history.size() == 50);
}

TEST_CASE("planning is deterministic") {
  const Reach p = reach_problem();
  const auto m = DynamicsModel::unicycle();
  auto cfg = small_config(SemiringTag::maxplus);
  cfg.restart_count = 2;
  cfg.epochs = 60;
  const State x0{-0.8, -0.6, 0.3, 0, 0};
  RegionTable r = p.regions;
  for (auto& [name, reg] : r) reg.proj = {0, 1};
  const auto a = build_sequence_visit(std::vector<Predicate>{parse_predicate("in(goal)", r)},
                                      std::vector<Predicate>{parse_predicate("in(wall)", r)}, 5);
  const auto q = alpha_of(a, cfg.semiring);
  const PlanResult r1 = open_loop(m, a, x0, q, cfg);
  const PlanResult r2 = open_loop(m, a, x0, q, cfg);
  CHECK(r1.controls == r2.controls);
  CHECK(r1.weight_history == r2.weight_history);
  CHECK(r1.t_star == r2.t_star);
}

TEST_CASE("invalid configurations are rejected") {
  PlannerConfig cfg;
  cfg.horizon = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.learning_rate = -1;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.epochs = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.control_penalty = -0.5;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("dead weight vectors") {
  const Reach p = reach_problem();
  const auto s = SemiringTag::maxplus;
  const double z = semiring::zero(s);
  CHECK(weight_vector_dead(p.automaton, {z, z, 0.0}, s));
  CHECK_FALSE(weight_vector_dead(p.automaton, {-3.0, z, 0.0}, s));
  CHECK_FALSE(weight_vector_dead(p.automaton, {z, -1.0, z}, s));
}

TEST_CASE("receding horizon tracks the automaton state") {
  const Reach p = reach_problem();
  const auto m = DynamicsModel::single_integrator();
  const ModelEnvironment env(m);
  auto cfg = small_config(SemiringTag::maxplus);
  cfg.horizon = 10;
  cfg.epochs = 30;
  const std::size_t steps = 25;
  const MpcResult r = mpc(m, env, p.automaton, {-0.8, -0.6}, cfg, steps, &p.formula);
  REQUIRE(r.steps.size() == steps);
  REQUIRE(r.trace.size() == steps + 1);
  WVector q = alpha_beta(p.automaton, cfg.semiring).first;
  for (std::size_t t = 0; t < steps; ++t) {
    const auto& st = r.steps[t];
    CHECK(st.t == t);
    CHECK(st.x == r.trace[t]);
    const auto v = q.values();
    REQUIRE(st.q == std::vector<double>(v.begin(), v.end()));
    CHECK(r.trace[t + 1] == m.step(r.trace[t], st.u));
    q = step_weight_vector(q, r.trace[t], p.automaton, cfg.semiring);
  }
  CHECK(r.final_weight == trajectory_weight(p.automaton, r.trace, cfg.semiring).value());
  REQUIRE(r.rho.has_value());
  CHECK(*r.rho >= 0.0);
  CHECK_FALSE(r.violated);
}

TEST_CASE("receding horizon notices violations") {
  // accepting location 1 has no successor, so the weight dies after two steps
  SymbolicAutomaton a(2, 2, {0}, {1}, {{0, 1, Predicate::top()}});
  const auto m = DynamicsModel::single_integrator();
  const ModelEnvironment env(m);
  auto cfg = small_config(SemiringTag::maxplus);
  cfg.horizon = 5;
  cfg.epochs = 5;
  const MpcResult r = mpc(m, env, a, {0, 0}, cfg, 6);
  CHECK(r.violated);
  REQUIRE(r.violated_at.has_value());
  CHECK(*r.violated_at == 2);
  CHECK(r.steps.size() == 2);
  CHECK(r.final_weight == semiring::zero(cfg.semiring));
}
