#include "symaut/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace symaut {

void PlannerConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("planning horizon must be at least 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (epochs < 1) throw std::invalid_argument("epoch count must be at least 1");
  if (control_penalty < 0.0) throw std::invalid_argument("control penalty must be non-negative");
}

bool weight_vector_dead(const SymbolicAutomaton& a, const std::vector<double>& q, SemiringTag s) {
  const auto live = coreachable(a);
  const double zero = semiring::zero(s);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (live[i] && q[i] != zero) return false;
  }
  return true;
}

namespace {

/// The weight of a horizon recorded once; replayed for every epoch.
struct WeightTape {
  ad::Tape tape;
  ad::Var weight;
  ad::Var fallback;  // (+) over co-reachable entries of the final vector
  std::size_t n_controls = 0;
};

WeightTape record(const DynamicsModel& model, const SymbolicAutomaton& a, const State& x_init,
                  const std::vector<double>& q_init, const PlannerConfig& cfg) {
  const SemiringTag s = cfg.semiring;
  WeightTape wt;
  const std::size_t m = model.control_dim();
  wt.n_controls = cfg.horizon * m;
  ad::Tape& tape = wt.tape;
  Recorder rec{&tape};
  std::vector<ad::Var> us;
  us.reserve(wt.n_controls);
  for (std::size_t k = 0; k < wt.n_controls; ++k) us.push_back(tape.input(0.0));
  const auto trace = rollout(rec, model, x_init, std::span<const ad::Var>(us));

  std::vector<ad::Var> q;
  for (double v : q_init) q.push_back(tape.constant(v));
  const std::size_t first = cfg.mpc_consumes_current_state ? 0 : 1;
  for (std::size_t t = first; t < trace.size(); ++t) {
    q = a.step(rec, std::span<const ad::Var>(q), std::span<const ad::Var>(trace[t]), s);
  }
  const ad::Var one = tape.constant(semiring::one(s));
  std::vector<ad::Var> lhs, rhs, live_lhs, live_rhs;
  const auto live = coreachable(a);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (a.is_accepting(i)) {
      lhs.push_back(q[i]);
      rhs.push_back(one);
    }
    if (live[i]) {
      live_lhs.push_back(q[i]);
      live_rhs.push_back(one);
    }
  }
  wt.weight = tape.semiring_dot(s, lhs, rhs);
  wt.fallback = tape.semiring_dot(s, live_lhs, live_rhs);
  tape.set_output(wt.weight);
  return wt;
}

std::vector<double> flatten(const ControlSequence& us, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (const auto& u : us) out.insert(out.end(), u.begin(), u.end());
  out.resize(n, 0.0);
  return out;
}

ControlSequence unflatten(const std::vector<double>& u, std::size_t m) {
  ControlSequence out;
  for (std::size_t k = 0; k + m <= u.size(); k += m) out.emplace_back(u.begin() + k, u.begin() + k + m);
  return out;
}

void apply_bounds(const DynamicsModel& model, std::vector<double>& u,
                  const std::vector<double>& previous) {
  if (!model.bounds || model.bounds_mode == BoundsMode::none) return;
  const std::size_t m = model.control_dim();
  const auto& b = *model.bounds;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const std::size_t d = k % m;
    if (d >= b.lo.size()) continue;
    if (model.bounds_mode == BoundsMode::project) {
      u[k] = std::clamp(u[k], b.lo[d], b.hi[d]);
    } else if (u[k] < b.lo[d] || u[k] > b.hi[d]) {
      u[k] = previous[k];
    }
  }
}

struct Adam {
  std::vector<double> m, v;
  std::size_t t = 0;
  void step(std::vector<double>& u, const std::vector<double>& g, double lr, double sign) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    if (m.empty()) {
      m.assign(u.size(), 0.0);
      v.assign(u.size(), 0.0);
    }
    ++t;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (std::size_t k = 0; k < u.size(); ++k) {
      m[k] = b1 * m[k] + (1 - b1) * g[k];
      v[k] = b2 * v[k] + (1 - b2) * g[k] * g[k];
      u[k] += sign * lr * (m[k] / c1) / (std::sqrt(v[k] / c2) + eps);
    }
  }
};

struct Attempt {
  std::vector<double> u;
  double weight;
  std::optional<std::size_t> t_star;
  std::vector<double> history;
  std::size_t epochs = 0;
  bool dead = true;
};

// Objective better-than in the semiring's order.
bool better(SemiringTag s, double a, double b) {
  return semiring::plus_is_max(s) ? a > b : a < b;
}

Attempt descend(WeightTape& wt, const DynamicsModel& model, const PlannerConfig& cfg,
                std::vector<double> u, std::size_t epoch_offset) {
  const SemiringTag s = cfg.semiring;
  const double one = semiring::one(s);
  const double sign = semiring::plus_is_max(s) ? 1.0 : -1.0;
  ad::Tape& tape = wt.tape;
  Attempt out;
  double lr = cfg.learning_rate;
  Adam adam;

  auto evaluate = [&](const std::vector<double>& x) {
    tape.set_inputs(x);
    tape.forward();
    return wt.weight.value();
  };
  auto gradient = [&](const std::vector<double>& x) {
    std::vector<double> g;
    if (std::isfinite(wt.weight.value())) {
      out.dead = false;
      g = tape.gradient(wt.weight);
    } else if (std::isfinite(wt.fallback.value())) {
      g = tape.gradient(wt.fallback);
    } else {
      g.assign(x.size(), 0.0);
    }
    if (cfg.control_penalty > 0.0) {
      for (std::size_t k = 0; k < x.size(); ++k) g[k] -= sign * 2.0 * cfg.control_penalty * x[k];
    }
    return g;
  };

  double w = evaluate(u);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    out.history.push_back(w);
    out.epochs = epoch;
    if (w == one && !out.t_star) {
      out.t_star = epoch_offset + epoch;
      if (cfg.early_stop) break;
    }
    const std::vector<double> g = gradient(u);
    const std::vector<double> previous = u;
    if (cfg.adaptive) {
      adam.step(u, g, lr, sign);
    } else {
      for (std::size_t k = 0; k < u.size(); ++k) u[k] += sign * lr * g[k];
    }
    apply_bounds(model, u, previous);
    double next = evaluate(u);
    if (cfg.backtracking) {
      while (better(s, w, next) && lr > cfg.learning_rate * 1e-6) {
        lr *= 0.5;
        u = previous;
        for (std::size_t k = 0; k < u.size(); ++k) u[k] += sign * lr * g[k];
        apply_bounds(model, u, previous);
        next = evaluate(u);
      }
      if (better(s, w, next)) {
        u = previous;
        next = evaluate(u);
      }
    }
    w = next;
  }
  out.weight = evaluate(u);
  out.u = std::move(u);
  return out;
}

}  // namespace

PlanResult open_loop(const DynamicsModel& model, const SymbolicAutomaton& a, const State& x_init,
                     const std::vector<double>& q_init, const PlannerConfig& cfg,
                     const ControlSequence* initial, const stl::Formula* formula) {
  cfg.validate();
  if (q_init.size() != a.n_locations()) {
    throw ShapeError("initial weight vector has " + std::to_string(q_init.size()) +
                     " entries, automaton has " + std::to_string(a.n_locations()));
  }
  if (x_init.size() != model.state_dim() || a.state_dim() != model.state_dim()) {
    throw ShapeError("state dimension mismatch between model, automaton and initial state");
  }
  WeightTape wt = record(model, a, x_init, q_init, cfg);
  const std::size_t m = model.control_dim();
  std::vector<double> u0 =
      initial ? flatten(*initial, wt.n_controls) : std::vector<double>(wt.n_controls, 0.0);

  Attempt best = descend(wt, model, cfg, u0, 0);
  std::size_t used = best.epochs;
  std::vector<double> history = best.history;
  bool any_live = !best.dead;
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t r = 0; r < cfg.restart_count && !best.t_star; ++r) {
    std::vector<double> u(wt.n_controls);
    for (std::size_t k = 0; k < u.size(); ++k) {
      double lo = -1.0, hi = 1.0;
      if (model.bounds && k % m < model.bounds->lo.size()) {
        lo = model.bounds->lo[k % m];
        hi = model.bounds->hi[k % m];
      }
      u[k] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    Attempt next = descend(wt, model, cfg, u, used);
    used += next.epochs;
    history.insert(history.end(), next.history.begin(), next.history.end());
    any_live = any_live || !next.dead;
    if (next.t_star || better(cfg.semiring, next.weight, best.weight)) best = std::move(next);
  }

  PlanResult res;
  res.controls = unflatten(best.u, m);
  res.trace = rollout(model, x_init, res.controls);
  res.final_weight = best.weight;
  res.t_star = best.t_star;
  res.weight_history = std::move(history);
  res.epochs_used = used;
  res.dead_tape = !any_live;
  if (formula) res.rho = stl::robustness(*formula, res.trace);
  return res;
}

MpcResult mpc(const DynamicsModel& model, const Environment& env, const SymbolicAutomaton& a,
              const State& x_init, const PlannerConfig& cfg, std::size_t total_steps,
              const stl::Formula* formula) {
  cfg.validate();
  const SemiringTag s = cfg.semiring;
  const auto [alpha, beta] = alpha_beta(a, s);
  std::vector<double> q(alpha.values().begin(), alpha.values().end());

  MpcResult res;
  res.trace.push_back(x_init);
  ControlSequence warm;
  for (std::size_t t = 0; t < total_steps; ++t) {
    const State x = res.trace.back();
    if (weight_vector_dead(a, q, s)) {
      res.violated = true;
      res.violated_at = t;
      spdlog::info("mpc: specification violated irrecoverably at step {}", t);
      break;
    }
    const PlanResult plan = open_loop(model, a, x, q, cfg, warm.empty() ? nullptr : &warm);
    const Control u = plan.controls.front();
    MpcStep step{t, x, u, q, plan.epochs_used, plan.final_weight};
    res.steps.push_back(std::move(step));
    res.controls.push_back(u);
    q = a.step(Real{}, std::span<const double>(q), std::span<const double>(x), s);
    res.trace.push_back(env.next(t, x, u));
    if (cfg.warm_start) {
      warm.assign(plan.controls.begin() + 1, plan.controls.end());
      warm.push_back(plan.controls.back());
    }
    spdlog::debug("mpc step {}: planned weight {}", t, plan.final_weight);
  }
  if (!res.violated) {
    const auto qT = a.step(Real{}, std::span<const double>(q),
                           std::span<const double>(res.trace.back()), s);
    double w = semiring::zero(s);
    for (std::size_t i = 0; i < qT.size(); ++i) {
      if (a.is_accepting(i)) w = semiring::plus(s, w, qT[i]);
    }
    res.final_weight = w;
  } else {
    res.final_weight = semiring::zero(s);
  }
  if (formula) res.rho = stl::robustness(*formula, res.trace);
  return res;
}

}  // namespace symaut
