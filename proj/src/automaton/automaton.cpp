#include "symaut/automaton/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "symaut/spec_lang/parser.hpp"

namespace symaut {

namespace {

std::vector<std::size_t> normalized(std::vector<std::size_t> v, std::size_t n, const char* what,
                                    bool allow_empty) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (!allow_empty && v.empty()) throw AutomatonError(std::string(what) + " set is empty");
  for (auto q : v) {
    if (q >= n) {
      throw AutomatonError(std::string(what) + " location " + std::to_string(q) +
                           " is out of range");
    }
  }
  return v;
}

}  // namespace

SymbolicAutomaton::SymbolicAutomaton(std::size_t n_locations, std::size_t state_dim,
                                     std::vector<std::size_t> initial,
                                     std::vector<std::size_t> accepting,
                                     std::vector<Transition> transitions, Flags flags)
    : n_(n_locations),
      state_dim_(state_dim),
      initial_(normalized(std::move(initial), n_locations, "initial", false)),
      accepting_(normalized(std::move(accepting), n_locations, "accepting", true)),
      flags_(flags) {
  if (n_ == 0) throw AutomatonError("automaton needs at least one location");
  std::map<std::pair<std::size_t, std::size_t>, Predicate> merged;
  for (auto& t : transitions) {
    if (t.from >= n_ || t.to >= n_) {
      throw AutomatonError("transition " + std::to_string(t.from) + " -> " +
                           std::to_string(t.to) + " references a missing location");
    }
    if (t.guard.min_state_dim() > state_dim_) {
      throw AutomatonError("guard of " + std::to_string(t.from) + " -> " + std::to_string(t.to) +
                           " reads beyond state dimension " + std::to_string(state_dim_));
    }
    if (t.guard.kind() == Predicate::Kind::bottom) continue;
    auto key = std::make_pair(t.from, t.to);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(key, t.guard);
    } else {
      it->second = Predicate::disj(it->second, t.guard);
    }
  }
  std::map<std::string, std::size_t> ids;
  for (const auto& [key, guard] : merged) {
    const std::string text = structural_key(guard);
    auto [it, fresh] = ids.emplace(text, guards_.size());
    if (fresh) guards_.push_back(guard);
    edges_.push_back({key.first, key.second, it->second});
  }
  std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.to != b.to ? a.to < b.to : a.from < b.from;
  });
}

bool SymbolicAutomaton::is_initial(std::size_t q) const {
  return std::binary_search(initial_.begin(), initial_.end(), q);
}

bool SymbolicAutomaton::is_accepting(std::size_t q) const {
  return std::binary_search(accepting_.begin(), accepting_.end(), q);
}

std::vector<Transition> SymbolicAutomaton::transitions() const {
  std::vector<Transition> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.push_back({e.from, e.to, guards_[e.guard]});
  std::sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  return out;
}

std::optional<Predicate> SymbolicAutomaton::guard(std::size_t from, std::size_t to) const {
  for (const Edge& e : edges_) {
    if (e.from == from && e.to == to) return guards_[e.guard];
  }
  return std::nullopt;
}

SymbolicAutomaton SymbolicAutomaton::with_accepting(std::vector<std::size_t> accepting,
                                                    Flags flags) const {
  SymbolicAutomaton copy = *this;
  copy.accepting_ = normalized(std::move(accepting), n_, "accepting", true);
  copy.flags_ = flags;
  return copy;
}

void SymbolicAutomaton::check_state(std::size_t dim) const {
  if (dim != state_dim_) {
    throw ShapeError("state has dimension " + std::to_string(dim) + ", automaton expects " +
                     std::to_string(state_dim_));
  }
}

std::pair<WVector, WVector> alpha_beta(const SymbolicAutomaton& a, SemiringTag s) {
  WVector alpha(a.n_locations(), s);
  WVector beta(a.n_locations(), s);
  for (auto q : a.initial()) alpha.set(q, Weight::one(s));
  for (auto q : a.accepting()) beta.set(q, Weight::one(s));
  return {std::move(alpha), std::move(beta)};
}

WMatrix operator_matrix(const SymbolicAutomaton& a, std::span<const double> x, SemiringTag s) {
  const std::vector<double> w = a.guard_weights(Real{}, x, s);
  const std::size_t n = a.n_locations();
  std::vector<double> m(n * n, semiring::zero(s));
  for (const auto& e : a.edges_by_target()) m[e.from * n + e.to] = w[e.guard];
  return WMatrix(n, std::move(m), s);
}

WVector step_weight_vector(const WVector& q, std::span<const double> x,
                           const SymbolicAutomaton& a, SemiringTag s) {
  if (q.semiring() != s) throw DomainError("weight vector belongs to a different semiring");
  return vec_mat(q, operator_matrix(a, x, s));
}

Weight trajectory_weight(const SymbolicAutomaton& a, const Trace& trace, SemiringTag s) {
  if (trace.empty()) throw AutomatonError("trajectory weight of an empty trace");
  auto [q, beta] = alpha_beta(a, s);
  for (const State& x : trace) q = step_weight_vector(q, x, a, s);
  return dot(q, beta);
}

std::vector<Run> enumerate_runs(const SymbolicAutomaton& a, const Trace& trace, double cap) {
  const double size = (static_cast<double>(trace.size()) + 1.0) *
                      std::log(static_cast<double>(a.n_locations()));
  if (size > std::log(cap)) {
    throw EnumerationCapExceeded("run enumeration over " + std::to_string(a.n_locations()) +
                                 "^" + std::to_string(trace.size() + 1) +
                                 " location sequences exceeds the cap");
  }
  // enabled[t][i] lists successors of i on trace[t]
  std::vector<std::vector<std::vector<std::size_t>>> enabled(trace.size());
  const auto transitions = a.transitions();
  for (std::size_t t = 0; t < trace.size(); ++t) {
    enabled[t].resize(a.n_locations());
    for (const auto& tr : transitions) {
      if (eval_bool(tr.guard, trace[t])) enabled[t][tr.from].push_back(tr.to);
    }
  }
  std::vector<Run> runs;
  Run current;
  auto dfs = [&](auto&& self, std::size_t t) -> void {
    if (t == trace.size()) {
      runs.push_back(current);
      return;
    }
    for (std::size_t next : enabled[t][current.back()]) {
      current.push_back(next);
      self(self, t + 1);
      current.pop_back();
    }
  };
  for (std::size_t q0 : a.initial()) {
    current.assign(1, q0);
    dfs(dfs, 0);
  }
  return runs;
}

bool accepts(const SymbolicAutomaton& a, const Trace& trace, double cap) {
  for (const Run& r : enumerate_runs(a, trace, cap)) {
    if (a.is_accepting(r.back())) return true;
  }
  return false;
}

bool accepts_by_simulation(const SymbolicAutomaton& a, const Trace& trace) {
  std::vector<char> live(a.n_locations(), 0);
  for (auto q : a.initial()) live[q] = 1;
  const auto transitions = a.transitions();
  for (const State& x : trace) {
    std::vector<char> next(a.n_locations(), 0);
    for (const auto& tr : transitions) {
      if (live[tr.from] && !next[tr.to] && eval_bool(tr.guard, x)) next[tr.to] = 1;
    }
    live.swap(next);
  }
  for (auto q : a.accepting()) {
    if (live[q]) return true;
  }
  return false;
}

SamplingBox default_sampling_box(std::size_t state_dim, double half_width) {
  return {std::vector<double>(state_dim, -half_width), std::vector<double>(state_dim, half_width)};
}

SpotCheck spot_check(const SymbolicAutomaton& a, const SamplingBox& box) {
  if (box.lo.size() != a.state_dim() || box.hi.size() != a.state_dim()) {
    throw ShapeError("sampling box dimension does not match the automaton");
  }
  SpotCheck result;
  std::mt19937_64 rng(box.seed);
  std::vector<std::uniform_real_distribution<double>> dists;
  for (std::size_t d = 0; d < a.state_dim(); ++d) dists.emplace_back(box.lo[d], box.hi[d]);
  const auto transitions = a.transitions();
  State x(a.state_dim());
  for (std::size_t q = 0; q < a.n_locations(); ++q) {
    for (std::size_t k = 0; k < box.samples_per_location; ++k) {
      for (std::size_t d = 0; d < x.size(); ++d) x[d] = dists[d](rng);
      std::size_t enabled = 0;
      for (const auto& tr : transitions) {
        if (tr.from == q && eval_bool(tr.guard, x)) ++enabled;
      }
      if (enabled > 1 && result.deterministic) {
        result.deterministic = false;
        result.detail += "location " + std::to_string(q) + " has " + std::to_string(enabled) +
                         " enabled successors on a sampled state; ";
      }
      if (enabled == 0 && result.complete) {
        result.complete = false;
        result.detail += "location " + std::to_string(q) +
                         " has no enabled successor on a sampled state; ";
      }
      if (!result.deterministic && !result.complete) return result;
    }
  }
  return result;
}

SymbolicAutomaton complement(const SymbolicAutomaton& a, const SamplingBox& box) {
  if (!a.deterministic() || !a.complete()) {
    throw AutomatonError(
        "complement requires an automaton flagged deterministic and complete; swapping the "
        "accepting set of any other automaton does not negate its language");
  }
  const SpotCheck check = spot_check(a, box);
  if (!check.deterministic || !check.complete) {
    throw AutomatonError("complement precondition failed the sampling check: " + check.detail);
  }
  std::vector<std::size_t> rest;
  for (std::size_t q = 0; q < a.n_locations(); ++q) {
    if (!a.is_accepting(q)) rest.push_back(q);
  }
  return a.with_accepting(std::move(rest), a.flags());
}

SymbolicAutomaton complement(const SymbolicAutomaton& a) {
  return complement(a, default_sampling_box(a.state_dim()));
}

SymbolicAutomaton tightened(const SymbolicAutomaton& a, double margin) {
  auto ts = a.transitions();
  for (auto& t : ts) t.guard = tighten(t.guard, margin);
  return SymbolicAutomaton(a.n_locations(), a.state_dim(), a.initial(), a.accepting(),
                           std::move(ts), a.flags());
}

std::vector<bool> coreachable(const SymbolicAutomaton& a) {
  std::vector<bool> live(a.n_locations(), false);
  for (auto q : a.accepting()) live[q] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : a.edges_by_target()) {
      if (live[e.to] && !live[e.from]) {
        live[e.from] = true;
        changed = true;
      }
    }
  }
  return live;
}

SymbolicAutomaton product(const SymbolicAutomaton& a, const SymbolicAutomaton& b) {
  if (a.state_dim() != b.state_dim()) {
    throw AutomatonError("product of automata over different state dimensions");
  }
  const std::size_t nb = b.n_locations();
  auto index = [nb](std::size_t i, std::size_t j) { return i * nb + j; };
  std::vector<std::size_t> initial, accepting;
  for (auto i : a.initial()) {
    for (auto j : b.initial()) initial.push_back(index(i, j));
  }
  for (auto i : a.accepting()) {
    for (auto j : b.accepting()) accepting.push_back(index(i, j));
  }
  std::vector<Transition> transitions;
  const auto ta = a.transitions();
  const auto tb = b.transitions();
  for (const auto& x : ta) {
    for (const auto& y : tb) {
      transitions.push_back(
          {index(x.from, y.from), index(x.to, y.to), Predicate::conj(x.guard, y.guard)});
    }
  }
  return SymbolicAutomaton(a.n_locations() * nb, a.state_dim(), std::move(initial),
                           std::move(accepting), std::move(transitions),
                           {a.deterministic() && b.deterministic(), a.complete() && b.complete()});
}

}  // namespace symaut
