#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symaut {

/// Semirings supported by the weight algebra.
///
/// Every tag fixes a carrier and the tuple (plus, times, zero, one):
///
///   boolean  {0,1}          or   and  0    1
///   minmax   R<=0 u {bot}   max  min  bot  0
///   maxplus  R<=0 u {bot}   max  +    bot  0
///   minplus  R>=0 u {top}   min  +    top  0
///
/// The absorbing element (bot or top) is stored as an IEEE infinity so that
/// annihilation is exact: -inf + x == -inf and min(-inf, x) == -inf for every
/// finite x in the carrier.
enum class SemiringTag { boolean, minmax, maxplus, minplus };

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

std::string_view to_string(SemiringTag s);
std::optional<SemiringTag> parse_semiring(std::string_view name);
SemiringTag parse_semiring_or_throw(std::string_view name);

namespace semiring {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Compile-time semiring descriptions used by the kernels and the tape.
struct Boolean {
  static constexpr SemiringTag tag = SemiringTag::boolean;
  static constexpr double zero() { return 0.0; }
  static constexpr double one() { return 1.0; }
  static constexpr double plus(double a, double b) { return a < b ? b : a; }
  static constexpr double times(double a, double b) { return b < a ? b : a; }
};

struct MinMax {
  static constexpr SemiringTag tag = SemiringTag::minmax;
  static constexpr double zero() { return -kInf; }
  static constexpr double one() { return 0.0; }
  static constexpr double plus(double a, double b) { return a < b ? b : a; }
  static constexpr double times(double a, double b) { return b < a ? b : a; }
};

struct MaxPlus {
  static constexpr SemiringTag tag = SemiringTag::maxplus;
  static constexpr double zero() { return -kInf; }
  static constexpr double one() { return 0.0; }
  static constexpr double plus(double a, double b) { return a < b ? b : a; }
  static constexpr double times(double a, double b) { return a + b; }
};

struct MinPlus {
  static constexpr SemiringTag tag = SemiringTag::minplus;
  static constexpr double zero() { return kInf; }
  static constexpr double one() { return 0.0; }
  static constexpr double plus(double a, double b) { return b < a ? b : a; }
  static constexpr double times(double a, double b) { return a + b; }
};

/// Calls `fn(Traits{})` with the traits type matching the runtime tag.
template <class Fn>
decltype(auto) visit(SemiringTag s, Fn&& fn) {
  switch (s) {
    case SemiringTag::boolean:
      return fn(Boolean{});
    case SemiringTag::minmax:
      return fn(MinMax{});
    case SemiringTag::maxplus:
      return fn(MaxPlus{});
    case SemiringTag::minplus:
      return fn(MinPlus{});
  }
  throw DomainError("unknown semiring tag");
}

constexpr double zero(SemiringTag s) {
  return s == SemiringTag::boolean ? 0.0 : (s == SemiringTag::minplus ? kInf : -kInf);
}
constexpr double one(SemiringTag s) { return s == SemiringTag::boolean ? 1.0 : 0.0; }

/// True when the plus operation of `s` selects the larger operand.
constexpr bool plus_is_max(SemiringTag s) { return s != SemiringTag::minplus; }
/// True when times is real addition (maxplus and minplus).
constexpr bool times_is_add(SemiringTag s) {
  return s == SemiringTag::maxplus || s == SemiringTag::minplus;
}

/// Unchecked operations on raw carrier values.
inline double plus(SemiringTag s, double a, double b) {
  return plus_is_max(s) ? (a < b ? b : a) : (b < a ? b : a);
}
inline double times(SemiringTag s, double a, double b) {
  return times_is_add(s) ? a + b : (b < a ? b : a);
}

bool in_carrier(SemiringTag s, double v);

/// Maps a signed atom margin mu (>= 0 means satisfied) into the carrier.
///
/// Satisfied atoms map to one; violated atoms keep their (negative) margin in
/// the minmax and maxplus carriers, become the positive cost -mu in minplus,
/// and map to zero (false) in the boolean semiring.
inline double from_margin(SemiringTag s, double mu) {
  switch (s) {
    case SemiringTag::boolean:
      return mu >= 0.0 ? 1.0 : 0.0;
    case SemiringTag::minmax:
    case SemiringTag::maxplus:
      return mu >= 0.0 ? 0.0 : mu;
    case SemiringTag::minplus:
      return mu >= 0.0 ? 0.0 : -mu;
  }
  return 0.0;
}

}  // namespace semiring

/// A carrier element of some semiring. The semiring itself is not stored;
/// operations take it explicitly.
class Weight {
 public:
  constexpr Weight() = default;
  constexpr explicit Weight(double v) : value_(v) {}

  static constexpr Weight zero(SemiringTag s) { return Weight(semiring::zero(s)); }
  static constexpr Weight one(SemiringTag s) { return Weight(semiring::one(s)); }

  constexpr double value() const { return value_; }
  /// True for the absorbing element (bot in minmax/maxplus, top in minplus).
  bool is_absorbing() const { return std::isinf(value_); }
  constexpr bool is_zero(SemiringTag s) const { return value_ == semiring::zero(s); }
  constexpr bool is_one(SemiringTag s) const { return value_ == semiring::one(s); }

  friend constexpr bool operator==(Weight a, Weight b) { return a.value_ == b.value_; }

 private:
  double value_ = 0.0;
};

/// Semiring addition. Throws DomainError when an operand is not in the carrier.
Weight sr_add(Weight a, Weight b, SemiringTag s);
/// Semiring multiplication. Throws DomainError when an operand is not in the carrier.
Weight sr_mul(Weight a, Weight b, SemiringTag s);

std::string format_weight(double v);

}  // namespace symaut
