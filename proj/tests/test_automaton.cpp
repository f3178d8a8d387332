#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "symaut/automaton/builders.hpp"
#include "symaut/automaton/io.hpp"
#include "symaut/spec_lang/parser.hpp"

using namespace symaut;

namespace {

constexpr double bot = -semiring::kInf;

RegionTable layout() {
  RegionTable r;
  r["red"] = Region::box({-1.2, -0.6}, {-0.4, 0.2});
  r["green"] = Region::box({-0.3, 0.2}, {0.5, 1.0});
  r["orange"] = Region::box({0.6, -0.6}, {1.4, 0.2});
  r["blue"] = Region::box({-0.2, -0.9}, {0.4, -0.3});
  return r;
}

SymbolicAutomaton sequence_automaton() {
  const auto r = layout();
  std::vector<Predicate> goals{parse_predicate("in(red)", r), parse_predicate("in(green)", r),
                               parse_predicate("in(orange)", r)};
  std::vector<Predicate> avoid{parse_predicate("in(blue)", r)};
  return build_sequence_visit(goals, avoid, 2);
}

State centre(const RegionTable& r, const char* name) { return r.at(name).centre(); }

/// Straight-line samples from a to b (excluding a), `n` of them.
void segment(Trace& xi, const State& a, const State& b, int n) {
  for (int k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    xi.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
  }
}

}  // namespace

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(SymbolicAutomaton(0, 1, {0}, {0}, {}), AutomatonError);
  CHECK_THROWS_AS(SymbolicAutomaton(2, 1, {}, {0}, {}), AutomatonError);
  CHECK_THROWS_AS(SymbolicAutomaton(2, 1, {2}, {0}, {}), AutomatonError);
  CHECK_THROWS_AS(SymbolicAutomaton(2, 1, {0}, {0}, {{0, 5, Predicate::top()}}), AutomatonError);
  CHECK_THROWS_AS(SymbolicAutomaton(1, 1, {0}, {0},
                                    {{0, 0, Predicate::atom(MuFunction::affine({1, 1}, 0))}}),
                  AutomatonError);
  // repeated pairs are joined by disjunction
  const auto a1 = Predicate::atom(MuFunction::affine({1}, 0));
  const auto a2 = Predicate::atom(MuFunction::affine({-1}, -2));
  SymbolicAutomaton a(1, 1, {0}, {0}, {{0, 0, a1}, {0, 0, a2}});
  CHECK(a.guard(0, 0)->kind() == Predicate::Kind::disj);
  SymbolicAutomaton b(2, 1, {0}, {1}, {{0, 1, a1}});
  CHECK_FALSE(b.guard(1, 0).has_value());
}

TEST_CASE("initial and final weights") {
  const SymbolicAutomaton a = sequence_automaton();
  REQUIRE(a.n_locations() == 5);
  auto [alpha, beta] = alpha_beta(a, SemiringTag::maxplus);
  CHECK(alpha == WVector({0, bot, bot, bot, bot}, SemiringTag::maxplus));
  CHECK(beta == WVector({bot, bot, bot, 0, bot}, SemiringTag::maxplus));
  auto [ab, bb] = alpha_beta(a, SemiringTag::boolean);
  CHECK(ab == WVector({1, 0, 0, 0, 0}, SemiringTag::boolean));
  CHECK(bb == WVector({0, 0, 0, 1, 0}, SemiringTag::boolean));
  SymbolicAutomaton all(3, 1, {0, 1, 2}, {0}, {});
  auto [a3, b3] = alpha_beta(all, SemiringTag::minmax);
  CHECK(a3 == WVector({0, 0, 0}, SemiringTag::minmax));
}

TEST_CASE("operator matrix") {
  std::vector<Transition> loops;
  for (std::size_t i = 0; i < 3; ++i) loops.push_back({i, i, Predicate::top()});
  SymbolicAutomaton id(3, 1, {0}, {2}, loops);
  for (auto s : {SemiringTag::boolean, SemiringTag::maxplus, SemiringTag::minplus}) {
    CHECK(operator_matrix(id, std::vector<double>{0.3}, s) == WMatrix::identity(3, s));
    WVector q = alpha_beta(id, s).first;
    CHECK(step_weight_vector(q, std::vector<double>{0.3}, id, s) == q);
  }

  const SymbolicAutomaton a = sequence_automaton();
  const State in_blue{0.1, -0.6};
  const WMatrix m = operator_matrix(a, in_blue, SemiringTag::maxplus);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      if (j == 4 && a.guard(i, j)) {
        CHECK(m(i, j).value() == 0.0);
      } else {
        CHECK(m(i, j).value() < 0.0);
      }
    }
  }
  const State x{-0.8, -0.2};
  const WMatrix mb = operator_matrix(a, x, SemiringTag::boolean);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const auto g = a.guard(i, j);
      CHECK(mb(i, j).value() == (g && oracle::holds(*g, x) ? 1.0 : 0.0));
    }
  }
  CHECK_THROWS_AS(operator_matrix(a, std::vector<double>{0}, SemiringTag::maxplus), ShapeError);
}

TEST_CASE("run enumeration") {
  SymbolicAutomaton toy(2, 1, {0}, {1},
                        {{0, 0, Predicate::top()}, {0, 1, Predicate::top()},
                         {1, 0, Predicate::top()}, {1, 1, Predicate::top()}});
  CHECK(enumerate_runs(toy, Trace{{0}, {0}}).size() == 4);
  const auto empty = enumerate_runs(toy, Trace{});
  REQUIRE(empty.size() == 1);
  CHECK(empty[0] == Run{0});
  SymbolicAutomaton none(2, 1, {0}, {0, 1}, {});
  CHECK_FALSE(accepts(none, Trace{{0}}));
  const SymbolicAutomaton seq = sequence_automaton();
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) CHECK(enumerate_runs(seq, oracle::random_trace(rng)).size() <= 1);
  SymbolicAutomaton big(10, 1, {0}, {0}, {});
  CHECK_THROWS_AS(enumerate_runs(big, Trace(10, State{0})), EnumerationCapExceeded);
}

TEST_CASE("weights agree with the run oracles on random automata") {
  std::mt19937_64 rng(43);
  int tested = 0;
  for (int i = 0; i < 400; ++i) {
    const SymbolicAutomaton a = oracle::random_automaton(rng);
    const Trace xi = oracle::random_trace(rng);
    if (oracle::trace_margin(a, xi) <= 1e-9) continue;
    ++tested;
    const bool acc = oracle::accepts(a, xi);
    REQUIRE(accepts(a, xi) == acc);
    REQUIRE(accepts_by_simulation(a, xi) == acc);
    REQUIRE(trajectory_weight(a, xi, SemiringTag::boolean).value() == (acc ? 1.0 : 0.0));
    REQUIRE((trajectory_weight(a, xi, SemiringTag::maxplus).value() == 0.0) == acc);
    for (auto s : {SemiringTag::boolean, SemiringTag::minmax, SemiringTag::maxplus,
                   SemiringTag::minplus}) {
      REQUIRE(trajectory_weight(a, xi, s).value() == oracle::run_sum_weight(a, xi, s));
    }
  }
  CHECK(tested > 300);
}

TEST_CASE("folding weight vectors equals the matrix product prefix") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 100; ++i) {
    const SymbolicAutomaton a = oracle::random_automaton(rng);
    const Trace xi = oracle::random_trace(rng);
    for (auto s : {SemiringTag::minmax, SemiringTag::maxplus, SemiringTag::minplus}) {
      auto [q, beta] = alpha_beta(a, s);
      WMatrix prod = WMatrix::identity(a.n_locations(), s);
      const WVector alpha = q;
      for (const auto& x : xi) {
        q = step_weight_vector(q, x, a, s);
        prod = mat_mul(prod, operator_matrix(a, x, s));
        REQUIRE(q == vec_mat(alpha, prod));
      }
      REQUIRE(dot(q, beta) == trajectory_weight(a, xi, s));
    }
  }
}

TEST_CASE("minplus with a sink-indicator weighting counts the steps before the sink") {
  const SymbolicAutomaton a = sequence_automaton();
  const auto r = layout();
  const auto s = SemiringTag::minplus;
  auto matrix = [&](const State& x) {
    WMatrix m(5, s);
    for (const auto& t : a.transitions()) {
      if (oracle::holds(t.guard, x)) m.set(t.from, t.to, Weight(t.to == 4 ? 0.0 : 1.0));
    }
    return m;
  };
  Trace xi;
  segment(xi, {-1, -1}, centre(r, "red"), 4);
  segment(xi, centre(r, "red"), centre(r, "blue"), 6);
  segment(xi, centre(r, "blue"), {1, 1}, 5);
  std::size_t before_sink = xi.size();
  {
    std::size_t loc = 0;
    for (std::size_t t = 0; t < xi.size(); ++t) {
      for (const auto& tr : a.transitions()) {
        if (tr.from == loc && oracle::holds(tr.guard, xi[t])) {
          loc = tr.to;
          break;
        }
      }
      if (loc == 4) {
        before_sink = t;
        break;
      }
    }
  }
  REQUIRE(before_sink < xi.size());
  WVector q({0, semiring::kInf, semiring::kInf, semiring::kInf, semiring::kInf}, s);
  for (const auto& x : xi) q = vec_mat(q, matrix(x));
  WVector all(std::vector<double>(5, 0.0), s);
  CHECK(dot(q, all).value() == static_cast<double>(before_sink));
}

TEST_CASE("sequence visit builder") {
  const auto r = layout();
  const SymbolicAutomaton a = sequence_automaton();
  CHECK(a.n_locations() == 5);
  CHECK(a.initial() == std::vector<std::size_t>{0});
  CHECK(a.accepting() == std::vector<std::size_t>{3});
  CHECK(a.deterministic());
  CHECK(a.complete());
  const SpotCheck sc = spot_check(a, default_sampling_box(2, 2.0));
  CHECK(sc.deterministic);
  CHECK(sc.complete);

  Trace good{{-1, -1}};
  segment(good, {-1, -1}, centre(r, "red"), 5);
  segment(good, centre(r, "red"), centre(r, "green"), 8);
  segment(good, centre(r, "green"), {0.55, 0.5}, 3);
  segment(good, {0.55, 0.5}, centre(r, "orange"), 8);
  CHECK(oracle::accepts(a, good));
  CHECK(trajectory_weight(a, good, SemiringTag::maxplus).value() == 0.0);

  Trace wrong{{0.1, 0.6}};
  segment(wrong, {0.1, 0.6}, centre(r, "red"), 6);
  segment(wrong, centre(r, "red"), {-0.8, 1.5}, 4);
  segment(wrong, {-0.8, 1.5}, {1.0, 1.5}, 8);
  segment(wrong, {1.0, 1.5}, centre(r, "orange"), 6);
  CHECK_FALSE(oracle::accepts(a, wrong));
  CHECK(trajectory_weight(a, wrong, SemiringTag::maxplus).value() < 0.0);

  Trace blue = good;
  blue.insert(blue.begin() + 2, centre(r, "blue"));
  CHECK_FALSE(oracle::accepts(a, blue));
}

TEST_CASE("any-order visit builder") {
  RegionTable r;
  r["red"] = Region::box({-1.3, -0.5}, {-0.5, 0.3});
  r["green"] = Region::box({-0.4, -0.5}, {0.4, 0.3});
  r["blue"] = Region::box({-0.45, -1.1}, {-0.05, -0.65});
  r["goal"] = Region::ball({-0.45, 0.75}, 0.4);
  const std::vector<std::size_t> dwell{5, 5, 1};
  std::vector<DwellGoal> goals{{parse_predicate("in(red)", r), dwell[0]},
                               {parse_predicate("in(green)", r), dwell[1]},
                               {parse_predicate("in(goal)", r), dwell[2]}};
  std::vector<Predicate> avoid{parse_predicate("in(blue)", r)};
  const SymbolicAutomaton a = build_any_order_visit(goals, avoid, 2);

  // One idle location per proper visited set, a counter chain of dwell-1
  // locations per (proper set, missing goal), the full set, and the sink.
  std::size_t expected = 2;
  for (unsigned mask = 0; mask < 7; ++mask) {
    expected += 1;
    for (unsigned g = 0; g < 3; ++g) {
      if (!(mask & (1u << g))) expected += dwell[g] - 1;
    }
  }
  CHECK(expected == 41);
  CHECK(a.n_locations() == expected);
  const SpotCheck sc = spot_check(a, default_sampling_box(2, 2.0));
  CHECK(sc.deterministic);
  CHECK(sc.complete);

  const State start{-1, 1.5};
  const State in_red = centre(r, "red"), in_green = centre(r, "green"), in_goal = centre(r, "goal");
  const std::vector<State> spots{in_red, in_green, in_goal};
  std::vector<int> order{0, 1, 2};
  do {
    Trace xi{start};
    for (int g : order) {
      for (std::size_t k = 0; k < dwell[g]; ++k) xi.push_back(spots[g]);
      xi.push_back(start);
    }
    CHECK(oracle::accepts(a, xi));
    xi.push_back(centre(r, "blue"));
    CHECK_FALSE(oracle::accepts(a, xi));
  } while (std::next_permutation(order.begin(), order.end()));

  Trace short_red{start, in_red, in_red, in_red, start};
  for (int k = 0; k < 5; ++k) short_red.push_back(in_green);
  short_red.push_back(in_goal);
  short_red.push_back(start);
  CHECK_FALSE(oracle::accepts(a, short_red));
  short_red.insert(short_red.end(), 5, in_red);
  CHECK(oracle::accepts(a, short_red));

  std::vector<DwellGoal> many(14, DwellGoal{Predicate::top(), 3});
  CHECK_THROWS_AS(build_any_order_visit(many, {}, 2), AutomatonError);
}

TEST_CASE("bounded response builder") {
  // state (x): invariant x >= -10, trigger x >= 1, response x <= 0
  const auto inv = Predicate::atom(MuFunction::affine({1}, 10));
  const auto trig = Predicate::atom(MuFunction::affine({1}, -1));
  const auto resp = Predicate::atom(MuFunction::affine({-1}, 0));
  const SymbolicAutomaton a = build_bounded_response(inv, trig, resp, 3, 1);
  CHECK(a.n_locations() == 5);
  auto tr = [](std::initializer_list<double> v) {
    Trace xi;
    for (double x : v) xi.push_back({x});
    return xi;
  };
  CHECK(oracle::accepts(a, tr({-1, -1})));
  CHECK(oracle::accepts(a, tr({2, 0.5, 0.5, -1})));
  CHECK_FALSE(oracle::accepts(a, tr({2, 0.5, 0.5, 0.5, -1})));
  CHECK_FALSE(oracle::accepts(a, tr({2, 0.5})));
  CHECK_FALSE(oracle::accepts(a, tr({-1, -11, -1})));
  CHECK(oracle::accepts(a, tr({2, -1, 2, 0.5, -1})));
  const SpotCheck sc = spot_check(a, default_sampling_box(1, 12.0));
  CHECK(sc.deterministic);
  CHECK(sc.complete);
}

TEST_CASE("complement") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 60; ++i) {
    const SymbolicAutomaton a = oracle::random_dc_automaton(rng);
    const SymbolicAutomaton c = complement(a);
    CHECK(complement(c).accepting() == a.accepting());
    for (int k = 0; k < 10; ++k) {
      const Trace xi = oracle::random_trace(rng);
      if (oracle::trace_margin(a, xi) <= 1e-9) continue;
      REQUIRE(oracle::accepts(c, xi) == !oracle::accepts(a, xi));
    }
  }
  SymbolicAutomaton flagged_wrongly(2, 1, {0}, {1},
                                    {{0, 0, Predicate::top()}, {0, 1, Predicate::top()},
                                     {1, 1, Predicate::top()}},
                                    {true, true});
  CHECK_THROWS_AS(complement(flagged_wrongly), AutomatonError);
  SymbolicAutomaton unflagged(1, 1, {0}, {0}, {{0, 0, Predicate::top()}});
  CHECK_THROWS_AS(complement(unflagged), AutomatonError);

  // the sequence automaton already has its sink, so the blue-entering trace
  // is accepted by the complement
  const auto r = layout();
  const SymbolicAutomaton seq = sequence_automaton();
  Trace xi{{-1, -1}};
  segment(xi, {-1, -1}, centre(r, "blue"), 6);
  CHECK(oracle::accepts(complement(seq, default_sampling_box(2, 2.0)), xi));
}

TEST_CASE("product") {
  std::mt19937_64 rng(59);
  SymbolicAutomaton unit(1, 2, {0}, {0}, {{0, 0, Predicate::top()}});
  for (int i = 0; i < 60; ++i) {
    const SymbolicAutomaton a = oracle::random_automaton(rng, 4);
    const SymbolicAutomaton b = oracle::random_automaton(rng, 4);
    const SymbolicAutomaton p = product(a, b);
    CHECK(p.n_locations() == a.n_locations() * b.n_locations());
    const SymbolicAutomaton pu = product(a, unit);
    CHECK(pu.n_locations() == a.n_locations());
    for (int k = 0; k < 5; ++k) {
      const Trace xi = oracle::random_trace(rng, 6);
      if (std::min(oracle::trace_margin(a, xi), oracle::trace_margin(b, xi)) <= 1e-9) continue;
      REQUIRE(oracle::accepts(p, xi) == (oracle::accepts(a, xi) && oracle::accepts(b, xi)));
      REQUIRE(oracle::accepts(pu, xi) == oracle::accepts(a, xi));
      REQUIRE(trajectory_weight(pu, xi, SemiringTag::maxplus) ==
              trajectory_weight(a, xi, SemiringTag::maxplus));
    }
  }
  CHECK_THROWS_AS(product(unit, SymbolicAutomaton(1, 3, {0}, {0}, {})), AutomatonError);
}

TEST_CASE("tightened automata and co-reachability") {
  const SymbolicAutomaton a = sequence_automaton();
  const SymbolicAutomaton t = tightened(a, 0.05);
  const auto live = coreachable(a);
  CHECK(live == std::vector<bool>{true, true, true, true, false});
  // a state 0.01 inside red satisfies the original guard but not the tightened one
  const State edge{-0.41, -0.2};
  CHECK(oracle::holds(*a.guard(0, 1), edge));
  CHECK_FALSE(oracle::holds(*t.guard(0, 1), edge));
}

TEST_CASE("automaton files round-trip") {
  const auto r = layout();
  const SymbolicAutomaton a = sequence_automaton();
  const auto j = automaton_to_json(a);
  CHECK(j["locations"] == 5);
  const SymbolicAutomaton b = automaton_from_json(j, r);
  CHECK(structurally_equal(a, b));
  CHECK(automaton_to_json(b) == j);
  auto broken = j;
  broken["transitions"][0]["guard"] = "in(nowhere)";
  CHECK_THROWS_AS(automaton_from_json(broken, r), UnknownRegion);
  broken = j;
  broken.erase("initial");
  CHECK_THROWS_AS(automaton_from_json(broken, r), AutomatonError);
}
