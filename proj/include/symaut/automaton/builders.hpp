#pragma once

#include <cstddef>
#include <span>

#include "symaut/automaton/automaton.hpp"

namespace symaut {

/// A goal that must hold for `dwell` consecutive states.
struct DwellGoal {
  Predicate goal;
  std::size_t dwell = 1;
};

inline constexpr std::size_t kMaxBuiltLocations = 10000;

/// Visit goals[0], goals[1], ... in order while never satisfying any `avoid`
/// predicate. Locations: 0..k-1 waiting for goal i, k accepting, k+1 rejecting
/// sink entered on an avoid violation.
SymbolicAutomaton build_sequence_visit(std::span<const Predicate> goals,
                                       std::span<const Predicate> avoid, std::size_t state_dim);

/// Every goal held for its dwell count, in any order, while avoiding. Location
/// 0 is the empty visited set; then one location per (visited set, active goal,
/// counter), followed by the accepting full set and the rejecting sink. Goals
/// are tried in list order when several hold at once. Throws AutomatonError
/// above kMaxBuiltLocations.
SymbolicAutomaton build_any_order_visit(std::span<const DwellGoal> goals,
                                        std::span<const Predicate> avoid, std::size_t state_dim);

/// G(invariant) & G(trigger -> F[0,deadline] response) over finite traces.
/// Location 0 has no pending obligation, location c in 1..deadline means the
/// oldest open obligation has seen c states without a response, and location
/// deadline+1 is the rejecting sink. Only location 0 accepts, since an
/// obligation still open when the trace ends is violated.
SymbolicAutomaton build_bounded_response(const Predicate& invariant, const Predicate& trigger,
                                         const Predicate& response, std::size_t deadline,
                                         std::size_t state_dim);

}  // namespace symaut
