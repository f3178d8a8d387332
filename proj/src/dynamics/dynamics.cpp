#include "symaut/dynamics/dynamics.hpp"

#include <algorithm>

namespace symaut {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::single_integrator:
      return "single_integrator";
    case ModelKind::unicycle:
      return "unicycle";
    case ModelKind::acc:
      return "acc";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  for (auto k : {ModelKind::single_integrator, ModelKind::unicycle, ModelKind::acc}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string to_string(BoundsMode m) {
  switch (m) {
    case BoundsMode::project:
      return "project";
    case BoundsMode::reject:
      return "reject";
    case BoundsMode::none:
      return "none";
  }
  return "?";
}

std::optional<BoundsMode> parse_bounds_mode(std::string_view text) {
  for (auto m : {BoundsMode::project, BoundsMode::reject, BoundsMode::none}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

DynamicsModel DynamicsModel::single_integrator(double dt) {
  return {ModelKind::single_integrator, dt, std::nullopt, BoundsMode::project};
}

DynamicsModel DynamicsModel::unicycle(double dt) {
  return {ModelKind::unicycle, dt, std::nullopt, BoundsMode::project};
}

DynamicsModel DynamicsModel::acc(double dt) {
  return {ModelKind::acc, dt, std::nullopt, BoundsMode::project};
}

std::size_t DynamicsModel::state_dim() const {
  switch (kind) {
    case ModelKind::single_integrator:
      return 2;
    case ModelKind::unicycle:
      return 5;
    case ModelKind::acc:
      return 4;
  }
  return 0;
}

std::size_t DynamicsModel::control_dim() const {
  return kind == ModelKind::acc ? 1 : 2;
}

State DynamicsModel::step(const State& x, const Control& u) const {
  check_control(u);
  return step<double>(std::span<const double>(x), std::span<const double>(u));
}

void DynamicsModel::project(Control& u) const {
  if (!bounds || bounds_mode == BoundsMode::none) return;
  for (std::size_t i = 0; i < u.size() && i < bounds->lo.size(); ++i) {
    u[i] = std::clamp(u[i], bounds->lo[i], bounds->hi[i]);
  }
}

bool DynamicsModel::within_bounds(const Control& u) const {
  if (!bounds) return true;
  for (std::size_t i = 0; i < u.size() && i < bounds->lo.size(); ++i) {
    if (u[i] < bounds->lo[i] || u[i] > bounds->hi[i]) return false;
  }
  return true;
}

void DynamicsModel::check_control(const Control& u) const {
  if (bounds_mode == BoundsMode::reject && !within_bounds(u)) {
    throw ControlBoundsError("control outside the configured bounds");
  }
}

Trace rollout(const DynamicsModel& m, const State& x0, const ControlSequence& us) {
  Trace trace{x0};
  trace.reserve(us.size() + 1);
  for (const auto& u : us) trace.push_back(m.step(trace.back(), u));
  return trace;
}

double LeadProfile::speed_at(double time) const {
  double v = speeds.empty() ? 0.0 : speeds.front();
  for (std::size_t i = 0; i < starts.size() && i < speeds.size(); ++i) {
    if (time >= starts[i]) v = speeds[i];
  }
  return v;
}

LeadProfile LeadProfile::standard() { return {{0.0, 10.0, 20.0}, {12.0, 6.0, 14.0}}; }

State ModelEnvironment::next(std::size_t, const State& x, const Control& u) const {
  return model_.step(x, u);
}

State LeadCarEnvironment::next(std::size_t t, const State& x, const Control& u) const {
  if (x.size() != 4 || u.size() != 1) throw ShapeError("lead-car environment expects acc states");
  const double a = u[0];
  const double v_lead = profile_.speed_at(static_cast<double>(t) * dt_);
  const double v_lead_next = profile_.speed_at(static_cast<double>(t + 1) * dt_);
  const double p_ego = x[0] + x[1] * dt_ + 0.5 * a * dt_ * dt_;
  const double v_ego = x[1] + a * dt_;
  const double d_lead = x[2] + v_lead * dt_ - (p_ego - x[0]);
  return {p_ego, v_ego, d_lead, v_lead_next - v_ego};
}

}  // namespace symaut
