#include "symaut/automaton/builders.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace symaut {

namespace {

struct Safety {
  Predicate safe;
  std::optional<Predicate> violation;
};

Safety safety_of(std::span<const Predicate> avoid) {
  if (avoid.empty()) return {Predicate::top(), std::nullopt};
  std::vector<Predicate> outside;
  for (const auto& a : avoid) outside.push_back(negate(a));
  Predicate violation = avoid[0];
  for (std::size_t i = 1; i < avoid.size(); ++i) violation = Predicate::disj(violation, avoid[i]);
  return {conj_all(outside), violation};
}

Predicate with_safety(const Predicate& p, const Safety& s) {
  if (!s.violation) return p;
  return Predicate::conj(p, s.safe);
}

}  // namespace

SymbolicAutomaton build_sequence_visit(std::span<const Predicate> goals,
                                       std::span<const Predicate> avoid, std::size_t state_dim) {
  if (goals.empty()) throw AutomatonError("sequence visit needs at least one goal");
  const std::size_t k = goals.size();
  const std::size_t accept = k;
  const std::size_t sink = k + 1;
  const Safety safety = safety_of(avoid);
  std::vector<Transition> ts;
  for (std::size_t i = 0; i < k; ++i) {
    ts.push_back({i, i + 1, with_safety(goals[i], safety)});
    ts.push_back({i, i, with_safety(negate(goals[i]), safety)});
    if (safety.violation) ts.push_back({i, sink, *safety.violation});
  }
  ts.push_back({accept, accept, safety.safe});
  if (safety.violation) ts.push_back({accept, sink, *safety.violation});
  ts.push_back({sink, sink, Predicate::top()});
  return SymbolicAutomaton(k + 2, state_dim, {0}, {accept}, std::move(ts), {true, true});
}

SymbolicAutomaton build_any_order_visit(std::span<const DwellGoal> goals,
                                        std::span<const Predicate> avoid, std::size_t state_dim) {
  const std::size_t n_goals = goals.size();
  if (n_goals == 0) throw AutomatonError("any-order visit needs at least one goal");
  if (n_goals > 16) throw AutomatonError("any-order visit supports at most 16 goals");
  for (const auto& g : goals) {
    if (g.dwell == 0) throw AutomatonError("dwell must be at least 1 step");
  }
  const std::size_t full = (std::size_t{1} << n_goals) - 1;

  // (visited mask, active goal or n_goals for none, counter)
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;
  std::map<Key, std::size_t> index;
  std::vector<Key> keys;
  auto add = [&](Key key) {
    index.emplace(key, keys.size());
    keys.push_back(key);
    if (keys.size() > kMaxBuiltLocations) {
      throw AutomatonError("any-order visit automaton exceeds " +
                           std::to_string(kMaxBuiltLocations) + " locations");
    }
  };
  for (std::size_t mask = 0; mask < full; ++mask) {
    add({mask, n_goals, 0});
    for (std::size_t g = 0; g < n_goals; ++g) {
      if (mask & (std::size_t{1} << g)) continue;
      for (std::size_t c = 1; c < goals[g].dwell; ++c) add({mask, g, c});
    }
  }
  const std::size_t accept = keys.size();
  const std::size_t sink = accept + 1;
  auto idle = [&](std::size_t mask) {
    return mask == full ? accept : index.at({mask, n_goals, 0});
  };
  // location reached once goal g has held for c consecutive states
  auto progress = [&](std::size_t mask, std::size_t g, std::size_t c) {
    if (c >= goals[g].dwell) return idle(mask | (std::size_t{1} << g));
    return index.at({mask, g, c});
  };

  const Safety safety = safety_of(avoid);
  std::vector<Transition> ts;
  // Transitions of an idle location, optionally conjoined with `pre`.
  auto idle_edges = [&](std::size_t from, std::size_t mask, const std::optional<Predicate>& pre) {
    std::vector<Predicate> none_before;
    for (std::size_t g = 0; g < n_goals; ++g) {
      if (mask & (std::size_t{1} << g)) continue;
      std::vector<Predicate> parts = none_before;
      parts.push_back(goals[g].goal);
      if (pre) parts.insert(parts.begin(), *pre);
      ts.push_back({from, progress(mask, g, 1), with_safety(conj_all(parts), safety)});
      none_before.push_back(negate(goals[g].goal));
    }
    std::vector<Predicate> parts = none_before;
    if (pre) parts.insert(parts.begin(), *pre);
    ts.push_back({from, idle(mask), with_safety(conj_all(parts), safety)});
    if (safety.violation) ts.push_back({from, sink, *safety.violation});
  };

  for (std::size_t loc = 0; loc < keys.size(); ++loc) {
    const auto [mask, active, count] = keys[loc];
    if (active == n_goals) {
      idle_edges(loc, mask, std::nullopt);
      continue;
    }
    const Predicate& g = goals[active].goal;
    ts.push_back({loc, progress(mask, active, count + 1), with_safety(g, safety)});
    idle_edges(loc, mask, negate(g));
  }
  ts.push_back({accept, accept, safety.safe});
  if (safety.violation) ts.push_back({accept, sink, *safety.violation});
  ts.push_back({sink, sink, Predicate::top()});
  return SymbolicAutomaton(sink + 1, state_dim, {0}, {accept}, std::move(ts), {true, true});
}

SymbolicAutomaton build_bounded_response(const Predicate& invariant, const Predicate& trigger,
                                         const Predicate& response, std::size_t deadline,
                                         std::size_t state_dim) {
  if (deadline + 2 > kMaxBuiltLocations) throw AutomatonError("response deadline too long");
  const std::size_t sink = deadline + 1;
  const Predicate violation = negate(invariant);
  const Predicate unanswered = negate(response);
  auto guarded = [&](const Predicate& p) { return Predicate::conj(p, invariant); };
  std::vector<Transition> ts;
  ts.push_back({0, 0, guarded(Predicate::disj(response, negate(trigger)))});
  if (deadline == 0) {
    ts.push_back({0, sink, guarded(Predicate::conj(unanswered, trigger))});
  } else {
    ts.push_back({0, 1, guarded(Predicate::conj(unanswered, trigger))});
  }
  ts.push_back({0, sink, violation});
  for (std::size_t c = 1; c <= deadline; ++c) {
    ts.push_back({c, 0, guarded(response)});
    ts.push_back({c, c < deadline ? c + 1 : sink, guarded(unanswered)});
    ts.push_back({c, sink, violation});
  }
  ts.push_back({sink, sink, Predicate::top()});
  return SymbolicAutomaton(deadline + 2, state_dim, {0}, {0}, std::move(ts), {true, true});
}

}  // namespace symaut
