#include "symaut/spec_lang/predicate.hpp"

#include <algorithm>

namespace symaut {

Predicate Predicate::top() {
  static const auto node = std::make_shared<const Node>(Node{Kind::top, nullptr, nullptr, nullptr});
  return Predicate(node);
}

Predicate Predicate::bottom() {
  static const auto node =
      std::make_shared<const Node>(Node{Kind::bottom, nullptr, nullptr, nullptr});
  return Predicate(node);
}

Predicate Predicate::atom(MuFunction mu) {
  return Predicate(std::make_shared<const Node>(
      Node{Kind::atom, std::make_shared<const MuFunction>(std::move(mu)), nullptr, nullptr}));
}

Predicate Predicate::conj(Predicate a, Predicate b) {
  return Predicate(std::make_shared<const Node>(
      Node{Kind::conj, nullptr, std::make_shared<const Predicate>(std::move(a)),
           std::make_shared<const Predicate>(std::move(b))}));
}

Predicate Predicate::disj(Predicate a, Predicate b) {
  return Predicate(std::make_shared<const Node>(
      Node{Kind::disj, nullptr, std::make_shared<const Predicate>(std::move(a)),
           std::make_shared<const Predicate>(std::move(b))}));
}

std::size_t Predicate::min_state_dim() const {
  switch (kind()) {
    case Kind::top:
    case Kind::bottom:
      return 0;
    case Kind::atom:
      return mu().min_state_dim();
    case Kind::conj:
    case Kind::disj:
      return std::max(left().min_state_dim(), right().min_state_dim());
  }
  return 0;
}

Predicate negate(const Predicate& p) {
  switch (p.kind()) {
    case Predicate::Kind::top:
      return Predicate::bottom();
    case Predicate::Kind::bottom:
      return Predicate::top();
    case Predicate::Kind::atom:
      return Predicate::atom(MuFunction::negated(p.mu()));
    case Predicate::Kind::conj:
      return Predicate::disj(negate(p.left()), negate(p.right()));
    case Predicate::Kind::disj:
      return Predicate::conj(negate(p.left()), negate(p.right()));
  }
  return p;
}

Predicate tighten(const Predicate& p, double margin) {
  switch (p.kind()) {
    case Predicate::Kind::top:
    case Predicate::Kind::bottom:
      return p;
    case Predicate::Kind::atom:
      return Predicate::atom(p.mu().tightened(margin));
    case Predicate::Kind::conj:
      return Predicate::conj(tighten(p.left(), margin), tighten(p.right(), margin));
    case Predicate::Kind::disj:
      return Predicate::disj(tighten(p.left(), margin), tighten(p.right(), margin));
  }
  return p;
}

Predicate conj_all(std::span<const Predicate> ps) {
  if (ps.empty()) return Predicate::top();
  Predicate acc = ps[0];
  for (std::size_t i = 1; i < ps.size(); ++i) acc = Predicate::conj(acc, ps[i]);
  return acc;
}

bool eval_bool(const Predicate& p, std::span<const double> x) {
  switch (p.kind()) {
    case Predicate::Kind::top:
      return true;
    case Predicate::Kind::bottom:
      return false;
    case Predicate::Kind::atom:
      return p.mu()(x) >= 0.0;
    case Predicate::Kind::conj:
      return eval_bool(p.left(), x) && eval_bool(p.right(), x);
    case Predicate::Kind::disj:
      return eval_bool(p.left(), x) || eval_bool(p.right(), x);
  }
  return false;
}

}  // namespace symaut
