#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symaut/automaton/automaton.hpp"
#include "symaut/spec_lang/parser.hpp"

namespace symaut::stl {

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

struct Interval {
  std::size_t a = 0;
  std::size_t b = kUnbounded;
  friend bool operator==(const Interval&, const Interval&) = default;
};

class WindowError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Discrete-time STL formula.
class Formula {
 public:
  enum class Kind { top, bottom, pred, not_, and_, or_, implies, alw, ev };

  static Formula top();
  static Formula bottom();
  static Formula pred(MuFunction mu);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula always(Interval i, Formula f);
  static Formula eventually(Interval i, Formula f);

  Kind kind() const { return node_->kind; }
  const MuFunction& mu() const { return *node_->mu; }
  const Formula& left() const { return *node_->left; }
  const Formula& right() const { return *node_->right; }
  /// Operand of not, alw and ev.
  const Formula& child() const { return *node_->left; }
  Interval interval() const { return node_->interval; }

  std::size_t depth() const;

 private:
  struct Node {
    Kind kind;
    std::shared_ptr<const MuFunction> mu;
    std::shared_ptr<const Formula> left, right;
    Interval interval;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

/// Formula grammar (guard atoms plus temporal operators):
///   formula := disj ['->' formula]
///   disj    := conj ('|' conj)*
///   conj    := unary ('&' unary)*
///   unary   := '!' unary | ('G' | 'F') ['[' N ',' (N | 'inf') ']'] unary
///            | 'true' | 'false' | atom | '(' formula ')'
/// G and F without an interval mean [0, inf].
Formula parse_formula(std::string_view text, const RegionTable& regions);
std::string to_string(const Formula& f);

struct MonitorOptions {
  /// Reject bounded windows that do not fit inside the trace.
  bool strict = false;
};

/// rho(f, xi, t) for every t in [0, |xi|). Windows are truncated at the end of
/// the trace; an empty window gives +inf for G and -inf for F.
std::vector<double> robustness_signal(const Formula& f, const Trace& xi,
                                      MonitorOptions opt = {});
double robustness(const Formula& f, const Trace& xi, std::size_t t = 0, MonitorOptions opt = {});

/// robustness(f, xi, 0) >= 0.
bool stl_accepts(const Formula& f, const Trace& xi, MonitorOptions opt = {});

/// Boolean semantics by direct recursion at a single time index.
bool satisfies(const Formula& f, const Trace& xi, std::size_t t = 0);

}  // namespace symaut::stl
