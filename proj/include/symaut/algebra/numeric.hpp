#pragma once

// Shared vocabulary for code that runs both on plain doubles and on the tape.
//
// Generic evaluators take a context object: Real evaluates directly, Recorder
// records onto an ad::Tape. Both expose `value_type` and `constant(v)`; the
// free functions below resolve for double and ad::Var alike.

#include <cmath>

#include "symaut/algebra/semiring.hpp"
#include "symaut/algebra/tape.hpp"

namespace symaut {

struct Real {
  using value_type = double;
  double constant(double v) const { return v; }
};

struct Recorder {
  using value_type = ad::Var;
  ad::Tape* tape;
  ad::Var constant(double v) const { return tape->constant(v); }
};

namespace num {

inline double max(double a, double b) { return a < b ? b : a; }
inline double min(double a, double b) { return b < a ? b : a; }
inline double step(double a) { return a >= 0.0 ? 1.0 : 0.0; }
inline double sqrt(double a) { return std::sqrt(a); }
inline double sin(double a) { return std::sin(a); }
inline double cos(double a) { return std::cos(a); }
inline double abs(double a) { return std::fabs(a); }

using ad::abs;
using ad::cos;
using ad::max;
using ad::min;
using ad::sin;
using ad::sqrt;
using ad::step;

template <class T>
T sr_plus(SemiringTag s, const T& a, const T& b) {
  return semiring::plus_is_max(s) ? max(a, b) : min(a, b);
}

template <class T>
T sr_times(SemiringTag s, const T& a, const T& b) {
  if (semiring::times_is_add(s)) return a + b;
  return min(a, b);
}

/// Generic counterpart of semiring::from_margin.
template <class T>
T lift_margin(SemiringTag s, const T& mu) {
  switch (s) {
    case SemiringTag::boolean:
      return step(mu);
    case SemiringTag::minmax:
    case SemiringTag::maxplus:
      return min(mu, 0.0);
    case SemiringTag::minplus:
      return max(-mu, 0.0);
  }
  return mu;
}

}  // namespace num
}  // namespace symaut
