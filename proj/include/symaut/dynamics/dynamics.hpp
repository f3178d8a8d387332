#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "symaut/algebra/numeric.hpp"
#include "symaut/automaton/automaton.hpp"

namespace symaut {

enum class ModelKind { single_integrator, unicycle, acc };

std::string to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view text);

enum class BoundsMode { project, reject, none };

std::string to_string(BoundsMode m);
std::optional<BoundsMode> parse_bounds_mode(std::string_view text);

class ControlBoundsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ControlBounds {
  std::vector<double> lo, hi;
  friend bool operator==(const ControlBounds&, const ControlBounds&) = default;
};

using Control = std::vector<double>;
using ControlSequence = std::vector<Control>;

/// Discrete-time model x_{t+1} = f(x_t, u_t).
///
///   single_integrator  x = (x, y)                        u = (vx, vy)
///   unicycle           x = (x, y, theta, v, omega)       u = (u_a, u_omega)
///   acc                x = (p_ego, v_ego, d_lead, v_rel)  u = (a_ego)
///
/// The acc model is the predictive one: the lead car keeps its current speed.
struct DynamicsModel {
  ModelKind kind = ModelKind::single_integrator;
  double dt = 0.1;
  std::optional<ControlBounds> bounds;
  BoundsMode bounds_mode = BoundsMode::project;

  static DynamicsModel single_integrator(double dt = 0.1);
  static DynamicsModel unicycle(double dt = 0.1);
  static DynamicsModel acc(double dt = 0.01);

  std::size_t state_dim() const;
  std::size_t control_dim() const;

  template <class T>
  std::vector<T> step(std::span<const T> x, std::span<const T> u) const;

  State step(const State& x, const Control& u) const;

  /// Clips u into the bounds (no-op without bounds).
  void project(Control& u) const;
  bool within_bounds(const Control& u) const;
  /// Throws ControlBoundsError for out-of-bounds controls in reject mode.
  void check_control(const Control& u) const;

  friend bool operator==(const DynamicsModel&, const DynamicsModel&) = default;
};

/// (x0, f(x0, u0), ...), H+1 states.
Trace rollout(const DynamicsModel& m, const State& x0, const ControlSequence& us);

/// Generic rollout; `us` holds H*m controls flattened by time.
template <class Ctx, class T = typename Ctx::value_type>
std::vector<std::vector<T>> rollout(const Ctx& ctx, const DynamicsModel& m,
                                    std::span<const double> x0, std::span<const T> us);

/// Piecewise-constant lead speed: speeds[i] holds from starts[i] (seconds)
/// until the next start.
struct LeadProfile {
  std::vector<double> starts;
  std::vector<double> speeds;

  double speed_at(double time) const;
  static LeadProfile standard();
  friend bool operator==(const LeadProfile&, const LeadProfile&) = default;
};

/// Source of true next states for closed-loop runs.
class Environment {
 public:
  virtual ~Environment() = default;
  /// State after applying u at step t from x.
  virtual State next(std::size_t t, const State& x, const Control& u) const = 0;
};

/// The planning model itself is the plant.
class ModelEnvironment : public Environment {
 public:
  explicit ModelEnvironment(DynamicsModel m) : model_(std::move(m)) {}
  State next(std::size_t t, const State& x, const Control& u) const override;

 private:
  DynamicsModel model_;
};

/// Ego integrates as in the acc model; the lead follows `profile`, and
/// d_lead / v_rel are measured from the true lead motion.
class LeadCarEnvironment : public Environment {
 public:
  LeadCarEnvironment(double dt, LeadProfile profile) : dt_(dt), profile_(std::move(profile)) {}
  State next(std::size_t t, const State& x, const Control& u) const override;

 private:
  double dt_;
  LeadProfile profile_;
};

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> DynamicsModel::step(std::span<const T> x, std::span<const T> u) const {
  using num::cos;
  using num::sin;
  if (x.size() != state_dim() || u.size() != control_dim()) {
    throw ShapeError(to_string(kind) + " step expects a state of dimension " +
                     std::to_string(state_dim()) + " and a control of dimension " +
                     std::to_string(control_dim()));
  }
  switch (kind) {
    case ModelKind::single_integrator:
      return {x[0] + u[0] * dt, x[1] + u[1] * dt};
    case ModelKind::unicycle: {
      const T& theta = x[2];
      const T& v = x[3];
      const T& w = x[4];
      return {x[0] + v * cos(theta) * dt, x[1] + v * sin(theta) * dt, theta + w * dt,
              v + u[0] * dt, w + u[1] * dt};
    }
    case ModelKind::acc: {
      const double half_dt2 = 0.5 * dt * dt;
      const T& a = u[0];
      return {x[0] + x[1] * dt + a * half_dt2, x[1] + a * dt, x[2] + x[3] * dt - a * half_dt2,
              x[3] - a * dt};
    }
  }
  return {x.begin(), x.end()};
}

template <class Ctx, class T>
std::vector<std::vector<T>> rollout(const Ctx& ctx, const DynamicsModel& m,
                                    std::span<const double> x0, std::span<const T> us) {
  const std::size_t md = m.control_dim();
  if (us.size() % md != 0) throw ShapeError("control vector is not a whole number of steps");
  if (x0.size() != m.state_dim()) throw ShapeError("initial state has the wrong dimension");
  std::vector<std::vector<T>> trace;
  trace.reserve(us.size() / md + 1);
  std::vector<T> x;
  for (double v : x0) x.push_back(ctx.constant(v));
  trace.push_back(x);
  for (std::size_t t = 0; t * md < us.size(); ++t) {
    trace.push_back(m.step<T>(trace.back(), us.subspan(t * md, md)));
  }
  return trace;
}

}  // namespace symaut
