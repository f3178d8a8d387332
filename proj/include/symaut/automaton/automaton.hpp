#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symaut/algebra/matrix.hpp"
#include "symaut/spec_lang/predicate.hpp"

namespace symaut {

using State = std::vector<double>;
/// Finite input word over R^n.
using Trace = std::vector<State>;

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  Predicate guard = Predicate::top();
};

/// Location sequence q0 ... q_l+1 induced by a trace of length l+1.
using Run = std::vector<std::size_t>;

class AutomatonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AutomatonFlags {
  bool deterministic = false;
  bool complete = false;
};

/// Symbolic automaton over the alphabet R^state_dim.
///
/// Guards are stored per (from, to) pair; a missing pair is the guard false and
/// contributes the semiring zero to the operator matrix. Repeated pairs passed
/// to the constructor are joined by disjunction.
class SymbolicAutomaton {
 public:
  using Flags = AutomatonFlags;

  SymbolicAutomaton(std::size_t n_locations, std::size_t state_dim,
                    std::vector<std::size_t> initial, std::vector<std::size_t> accepting,
                    std::vector<Transition> transitions, Flags flags = {});

  std::size_t n_locations() const { return n_; }
  std::size_t state_dim() const { return state_dim_; }
  const std::vector<std::size_t>& initial() const { return initial_; }
  const std::vector<std::size_t>& accepting() const { return accepting_; }
  bool is_initial(std::size_t q) const;
  bool is_accepting(std::size_t q) const;
  Flags flags() const { return flags_; }
  bool deterministic() const { return flags_.deterministic; }
  bool complete() const { return flags_.complete; }

  /// Transitions ordered by (from, to).
  std::vector<Transition> transitions() const;
  std::optional<Predicate> guard(std::size_t from, std::size_t to) const;

  /// Distinct guard predicates; every edge refers to one by index.
  const std::vector<Predicate>& guard_table() const { return guards_; }
  struct Edge {
    std::size_t from, to, guard;
  };
  /// Edges grouped by destination (sorted by to, then from).
  const std::vector<Edge>& edges_by_target() const { return edges_; }

  /// lambda(x, guard) for every entry of guard_table().
  template <class Ctx, class T = typename Ctx::value_type>
  std::vector<T> guard_weights(const Ctx& ctx, std::span<const T> x, SemiringTag s) const;

  /// q' = q^T Ae(x) computed sparsely over the edge list.
  template <class Ctx, class T = typename Ctx::value_type>
  std::vector<T> step(const Ctx& ctx, std::span<const T> q, std::span<const T> x,
                      SemiringTag s) const;

  /// Copy with a different accepting set.
  SymbolicAutomaton with_accepting(std::vector<std::size_t> accepting, Flags flags) const;

 private:
  void check_state(std::size_t dim) const;

  std::size_t n_;
  std::size_t state_dim_;
  std::vector<std::size_t> initial_;
  std::vector<std::size_t> accepting_;
  std::vector<Predicate> guards_;
  std::vector<Edge> edges_;
  Flags flags_;
};

/// alpha_i = one iff q_i is initial, beta_i = one iff q_i is accepting.
std::pair<WVector, WVector> alpha_beta(const SymbolicAutomaton& a, SemiringTag s);

/// Ae(x)_ij = lambda(x, Delta(q_i, q_j)); absent guards give zero.
WMatrix operator_matrix(const SymbolicAutomaton& a, std::span<const double> x, SemiringTag s);

/// vec_mat(q, operator_matrix(a, x, s)).
WVector step_weight_vector(const WVector& q, std::span<const double> x,
                           const SymbolicAutomaton& a, SemiringTag s);

/// alpha^T Ae(x_0) ... Ae(x_l) beta. Throws AutomatonError for an empty trace.
Weight trajectory_weight(const SymbolicAutomaton& a, const Trace& trace, SemiringTag s);

inline constexpr double kDefaultEnumerationCap = 1e7;

/// All runs (starting in an initial location) induced by `trace`. Throws
/// EnumerationCapExceeded when |Q|^(|trace|+1) exceeds `cap`.
std::vector<Run> enumerate_runs(const SymbolicAutomaton& a, const Trace& trace,
                                double cap = kDefaultEnumerationCap);

/// Some run ends in an accepting location (run-enumeration oracle).
bool accepts(const SymbolicAutomaton& a, const Trace& trace,
             double cap = kDefaultEnumerationCap);

/// Acceptance by forward reachable-set simulation; no size cap.
bool accepts_by_simulation(const SymbolicAutomaton& a, const Trace& trace);

/// Axis-aligned box that sampling-based checks draw states from.
struct SamplingBox {
  std::vector<double> lo, hi;
  std::size_t samples_per_location = 10000;
  std::uint64_t seed = 0;
};

struct SpotCheck {
  bool deterministic = true;
  bool complete = true;
  std::string detail;
};

/// Samples states per location and counts enabled successors.
SpotCheck spot_check(const SymbolicAutomaton& a, const SamplingBox& box);
SamplingBox default_sampling_box(std::size_t state_dim, double half_width = 3.0);

/// Same automaton with accepting set Q \ Q_F. Requires the deterministic and
/// complete flags and a passing spot check; throws AutomatonError otherwise.
SymbolicAutomaton complement(const SymbolicAutomaton& a, const SamplingBox& box);
SymbolicAutomaton complement(const SymbolicAutomaton& a);

/// Same automaton with every guard passed through tighten(guard, margin).
SymbolicAutomaton tightened(const SymbolicAutomaton& a, double margin);

/// Locations with a transition path (ignoring guard satisfiability) to an
/// accepting location.
std::vector<bool> coreachable(const SymbolicAutomaton& a);

/// Synchronous product; location (i, j) has index i * |Q2| + j.
SymbolicAutomaton product(const SymbolicAutomaton& a, const SymbolicAutomaton& b);

// ---------------------------------------------------------------------------

template <class Ctx, class T>
std::vector<T> SymbolicAutomaton::guard_weights(const Ctx& ctx, std::span<const T> x,
                                                SemiringTag s) const {
  check_state(x.size());
  std::vector<T> out;
  out.reserve(guards_.size());
  for (const Predicate& g : guards_) out.push_back(eval_weight(ctx, g, x, s));
  return out;
}

template <class Ctx, class T>
std::vector<T> SymbolicAutomaton::step(const Ctx& ctx, std::span<const T> q,
                                       std::span<const T> x, SemiringTag s) const {
  if (q.size() != n_) {
    throw ShapeError("weight vector has " + std::to_string(q.size()) + " entries, automaton has " +
                     std::to_string(n_) + " locations");
  }
  const std::vector<T> w = guard_weights(ctx, x, s);
  std::vector<T> out;
  out.reserve(n_);
  std::vector<T> lhs, rhs;
  std::size_t e = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    lhs.clear();
    rhs.clear();
    for (; e < edges_.size() && edges_[e].to == j; ++e) {
      lhs.push_back(q[edges_[e].from]);
      rhs.push_back(w[edges_[e].guard]);
    }
    if constexpr (std::is_same_v<T, double>) {
      double acc = semiring::zero(s);
      for (std::size_t k = 0; k < lhs.size(); ++k) {
        acc = semiring::plus(s, acc, semiring::times(s, lhs[k], rhs[k]));
      }
      out.push_back(acc);
    } else {
      out.push_back(ctx.tape->semiring_dot(s, lhs, rhs));
    }
  }
  return out;
}

}  // namespace symaut
