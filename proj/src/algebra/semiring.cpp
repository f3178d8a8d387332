#include "symaut/algebra/semiring.hpp"

#include <array>
#include <charconv>

namespace symaut {

std::string_view to_string(SemiringTag s) {
  switch (s) {
    case SemiringTag::boolean:
      return "boolean";
    case SemiringTag::minmax:
      return "minmax";
    case SemiringTag::maxplus:
      return "maxplus";
    case SemiringTag::minplus:
      return "minplus";
  }
  return "?";
}

std::optional<SemiringTag> parse_semiring(std::string_view name) {
  for (auto s : {SemiringTag::boolean, SemiringTag::minmax, SemiringTag::maxplus,
                 SemiringTag::minplus}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

SemiringTag parse_semiring_or_throw(std::string_view name) {
  if (auto s = parse_semiring(name)) return *s;
  throw DomainError("unknown semiring '" + std::string(name) +
                    "' (expected boolean, minmax, maxplus or minplus)");
}

namespace semiring {

bool in_carrier(SemiringTag s, double v) {
  if (std::isnan(v)) return false;
  switch (s) {
    case SemiringTag::boolean:
      return v == 0.0 || v == 1.0;
    case SemiringTag::minmax:
    case SemiringTag::maxplus:
      return v <= 0.0;  // includes -inf
    case SemiringTag::minplus:
      return v >= 0.0;  // includes +inf
  }
  return false;
}

}  // namespace semiring

namespace {

void check(SemiringTag s, Weight w) {
  if (!semiring::in_carrier(s, w.value())) {
    throw DomainError("value " + format_weight(w.value()) + " is outside the " +
                      std::string(to_string(s)) + " carrier");
  }
}

}  // namespace

Weight sr_add(Weight a, Weight b, SemiringTag s) {
  check(s, a);
  check(s, b);
  return Weight(semiring::plus(s, a.value(), b.value()));
}

Weight sr_mul(Weight a, Weight b, SemiringTag s) {
  check(s, a);
  check(s, b);
  return Weight(semiring::times(s, a.value(), b.value()));
}

std::string format_weight(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (v == 0.0) return "0";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

}  // namespace symaut
