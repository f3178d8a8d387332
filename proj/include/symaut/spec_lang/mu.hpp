#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symaut/algebra/matrix.hpp"
#include "symaut/algebra/numeric.hpp"

namespace symaut {

/// Scalar atom functions: an atom holds at x iff mu(x) >= 0.
class MuFunction {
 public:
  /// mu(x) = w . x + b over the full state.
  struct Affine {
    std::vector<double> w;
    double b = 0.0;
  };
  /// Signed distance to an axis-aligned box over the projected coordinates:
  /// min_d min(x_d - lo_d, hi_d - x_d). Positive inside, negative outside.
  struct Box {
    std::string name;
    std::vector<double> lo, hi;
    std::vector<std::size_t> proj;
  };
  /// radius - |proj(x) - center|.
  struct Ball {
    std::string name;
    std::vector<double> center;
    double radius = 0.0;
    std::vector<std::size_t> proj;
  };
  struct Negated {
    std::shared_ptr<const MuFunction> inner;
  };
  using Variant = std::variant<Affine, Box, Ball, Negated>;

  explicit MuFunction(Variant v);

  static MuFunction affine(std::vector<double> w, double b);
  static MuFunction box(std::string name, std::vector<double> lo, std::vector<double> hi,
                        std::vector<std::size_t> proj);
  static MuFunction ball(std::string name, std::vector<double> center, double radius,
                         std::vector<std::size_t> proj);
  /// -inner(x). Negating an affine function folds into its coefficients and
  /// double negation cancels.
  static MuFunction negated(const MuFunction& inner);

  /// mu(x) - margin, kept in closed form: boxes shrink, balls lose radius,
  /// negated regions grow.
  MuFunction tightened(double margin) const;

  const Variant& variant() const { return v_; }

  /// Smallest state dimension this function can read.
  std::size_t min_state_dim() const;

  /// Evaluates mu at x; throws ShapeError when x is too short.
  template <class Ctx, class T = typename Ctx::value_type>
  T eval(const Ctx& ctx, std::span<const T> x) const;

  double operator()(std::span<const double> x) const { return eval(Real{}, x); }

 private:
  Variant v_;
};

template <class Ctx, class T>
T MuFunction::eval(const Ctx& ctx, std::span<const T> x) const {
  using num::min;
  using num::sqrt;
  if (x.size() < min_state_dim()) {
    throw ShapeError("state has dimension " + std::to_string(x.size()) + ", atom needs " +
                     std::to_string(min_state_dim()));
  }
  if (const auto* f = std::get_if<Affine>(&v_)) {
    T acc = ctx.constant(f->b);
    for (std::size_t d = 0; d < f->w.size(); ++d) {
      if (f->w[d] != 0.0) acc = acc + x[d] * f->w[d];
    }
    return acc;
  }
  if (const auto* f = std::get_if<Box>(&v_)) {
    T acc = ctx.constant(semiring::kInf);
    bool first = true;
    for (std::size_t k = 0; k < f->proj.size(); ++k) {
      const T& xd = x[f->proj[k]];
      T lo_gap = xd - f->lo[k];
      T hi_gap = f->hi[k] - xd;
      T m = min(lo_gap, hi_gap);
      acc = first ? m : min(acc, m);
      first = false;
    }
    return acc;
  }
  if (const auto* f = std::get_if<Ball>(&v_)) {
    T sq = ctx.constant(0.0);
    for (std::size_t k = 0; k < f->proj.size(); ++k) {
      T diff = x[f->proj[k]] - f->center[k];
      sq = sq + diff * diff;
    }
    return f->radius - sqrt(sq);
  }
  const auto& neg = std::get<Negated>(v_);
  return -neg.inner->eval(ctx, x);
}

}  // namespace symaut
