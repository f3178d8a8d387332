#pragma once

#include <memory>
#include <span>
#include <string>

#include "symaut/spec_lang/mu.hpp"

namespace symaut {

/// Guard predicate: true | false | mu(x) >= 0 | p & p | p | p.
/// There is no negation node; see negate().
class Predicate {
 public:
  enum class Kind { top, bottom, atom, conj, disj };

  static Predicate top();
  static Predicate bottom();
  static Predicate atom(MuFunction mu);
  static Predicate conj(Predicate a, Predicate b);
  static Predicate disj(Predicate a, Predicate b);

  Kind kind() const { return node_->kind; }
  /// Atom payload; only valid for Kind::atom.
  const MuFunction& mu() const { return *node_->mu; }
  /// Children; only valid for conj and disj.
  const Predicate& left() const { return *node_->left; }
  const Predicate& right() const { return *node_->right; }

  /// Smallest state dimension any atom reads.
  std::size_t min_state_dim() const;

 private:
  struct Node {
    Kind kind;
    std::shared_ptr<const MuFunction> mu;
    std::shared_ptr<const Predicate> left, right;
  };
  explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Lowers a logical negation: De Morgan on the tree, atoms become
/// -mu(x) >= 0. Boundary points (mu == 0) satisfy both p and negate(p).
Predicate negate(const Predicate& p);

/// Every atom mu(x) >= 0 replaced by mu(x) - margin >= 0.
Predicate tighten(const Predicate& p, double margin);

/// Conjunction of a nonempty list, folded left.
Predicate conj_all(std::span<const Predicate> ps);

/// s |= p.
bool eval_bool(const Predicate& p, std::span<const double> x);

/// Generalized weight lambda(x, p) in semiring s.
template <class Ctx, class T = typename Ctx::value_type>
T eval_weight(const Ctx& ctx, const Predicate& p, std::span<const T> x, SemiringTag s) {
  switch (p.kind()) {
    case Predicate::Kind::top:
      return ctx.constant(semiring::one(s));
    case Predicate::Kind::bottom:
      return ctx.constant(semiring::zero(s));
    case Predicate::Kind::atom:
      return num::lift_margin(s, p.mu().eval(ctx, x));
    case Predicate::Kind::conj:
      return num::sr_times(s, eval_weight(ctx, p.left(), x, s), eval_weight(ctx, p.right(), x, s));
    case Predicate::Kind::disj:
      return num::sr_plus(s, eval_weight(ctx, p.left(), x, s), eval_weight(ctx, p.right(), x, s));
  }
  return ctx.constant(semiring::zero(s));
}

inline Weight eval_weight(const Predicate& p, std::span<const double> x, SemiringTag s) {
  return Weight(eval_weight(Real{}, p, x, s));
}

}  // namespace symaut
