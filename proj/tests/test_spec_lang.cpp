#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "symaut/spec_lang/parser.hpp"

using namespace symaut;

namespace {

RegionTable regions() {
  RegionTable r;
  r["red"] = Region::box({-1, -1}, {1, 1});
  r["blue"] = Region::box({2, 2}, {3, 3});
  r["green"] = Region::box({0, 0}, {0.5, 0.5});
  r["goal"] = Region::ball({0, 0}, 1.0);
  return r;
}

Predicate random_predicate(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 5 : 3);
  std::uniform_real_distribution<double> u(-1, 1);
  switch (kind(rng)) {
    case 0: {
      double a = u(rng), b = u(rng);
      return Predicate::atom(
          MuFunction::box("b", {std::min(a, b), -0.5}, {std::max(a, b), 0.5}, {0, 1}));
    }
    case 1:
      return Predicate::atom(MuFunction::ball("c", {u(rng), u(rng)}, 0.6, {0, 1}));
    case 2:
      return Predicate::atom(MuFunction::affine({u(rng), u(rng)}, u(rng)));
    case 3:
      return Predicate::atom(
          MuFunction::negated(MuFunction::ball("c", {u(rng), u(rng)}, 0.5, {0, 1})));
    case 4:
      return Predicate::conj(random_predicate(rng, depth - 1), random_predicate(rng, depth - 1));
    default:
      return Predicate::disj(random_predicate(rng, depth - 1), random_predicate(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("guard parsing") {
  const auto r = regions();
  CHECK(parse_predicate("true", r).kind() == Predicate::Kind::top);
  CHECK(parse_predicate("false", r).kind() == Predicate::Kind::bottom);

  const Predicate p = parse_predicate("in(red) & !in(blue)", r);
  REQUIRE(p.kind() == Predicate::Kind::conj);
  CHECK(std::holds_alternative<MuFunction::Box>(p.left().mu().variant()));
  CHECK(std::holds_alternative<MuFunction::Negated>(p.right().mu().variant()));

  const Predicate q = parse_predicate("in(red) | in(green)", r);
  CHECK(q.kind() == Predicate::Kind::disj);

  const Predicate a = parse_predicate("affine(1, -2; 0.5) >= 0", r);
  CHECK(a.mu()(std::vector<double>{1, 1}) == doctest::Approx(-0.5));
  const Predicate d = parse_predicate("dist(red) <= 2", r);
  CHECK(d.mu()(std::vector<double>{0, 0}) == 2.0);
}

TEST_CASE("guard parse errors carry positions and names") {
  const auto r = regions();
  try {
    parse_predicate("in(red) & in(purple)", r);
    FAIL("expected UnknownRegion");
  } catch (const UnknownRegion& e) {
    CHECK(e.name() == "purple");
    CHECK(e.position() == 13);
  }
  CHECK_THROWS_AS(parse_predicate("in(red) &", r), ParseError);
  CHECK_THROWS_AS(parse_predicate("in(red))", r), ParseError);
  CHECK_THROWS_AS(parse_predicate("affine(1; 0) >= 1", r), ParseError);
  CHECK_THROWS_AS(parse_predicate("in red", r), ParseError);
}

TEST_CASE("print then parse is a fixed point") {
  const auto r = regions();
  for (const char* text :
       {"true", "in(red) & !in(blue)", "(in(red) | in(green)) & !in(blue)",
        "in(red) | in(green) & in(blue)", "in(red) & (in(green) & in(blue))",
        "dist(goal) <= 0.25 | affine(1, 0; -0.5) >= 0", "!dist(red) <= 2"}) {
    const Predicate p = parse_predicate(text, r);
    const std::string once = to_string(p);
    const Predicate p2 = parse_predicate(once, r);
    CHECK(to_string(p2) == once);
    CHECK(structural_key(p2) == structural_key(p));
  }
}

TEST_CASE("boolean evaluation") {
  const auto r = regions();
  const Predicate box = parse_predicate("in(red)", r);
  CHECK(eval_bool(Predicate::top(), std::vector<double>{9, 9}));
  CHECK(eval_bool(box, std::vector<double>{0, 0}));
  CHECK(box.mu()(std::vector<double>{0, 0}) == 1.0);
  CHECK_FALSE(eval_bool(box, std::vector<double>{2, 0}));
  CHECK(box.mu()(std::vector<double>{2, 0}) == -1.0);
  // boundaries belong to both the region and its complement
  CHECK(eval_bool(box, std::vector<double>{1, 0}));
  CHECK(eval_bool(parse_predicate("!in(red)", r), std::vector<double>{1, 0}));
  CHECK_THROWS_AS(eval_bool(box, std::vector<double>{0}), ShapeError);
}

TEST_CASE("generalized weights") {
  const auto mp = SemiringTag::maxplus;
  const std::vector<double> x{0.0};
  CHECK(eval_weight(Predicate::bottom(), x, mp).is_zero(mp));
  CHECK(eval_weight(Predicate::top(), x, mp).is_one(mp));
  const Predicate a1 = Predicate::atom(MuFunction::affine({1}, -0.5));
  const Predicate a2 = Predicate::atom(MuFunction::affine({1}, -0.25));
  CHECK(eval_weight(a1, x, mp).value() == -0.5);
  const Predicate both = Predicate::conj(a1, a2);
  CHECK(eval_weight(both, x, mp).value() == -0.75);
  CHECK(eval_weight(both, x, SemiringTag::minmax).value() == -0.5);
  CHECK(eval_weight(both, x, SemiringTag::minplus).value() == 0.75);
  CHECK(eval_weight(Predicate::disj(a1, a2), x, mp).value() == -0.25);
  CHECK(eval_weight(both, x, SemiringTag::boolean).value() == 0.0);
}

TEST_CASE("satisfaction and weight agree on random predicates") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int tested = 0;
  for (int i = 0; i < 3000 && tested < 1000; ++i) {
    const Predicate p = random_predicate(rng, 3);
    const std::vector<double> x{u(rng), u(rng)};
    if (oracle::atom_margin(p, x) <= 1e-9) continue;
    ++tested;
    const bool sat = eval_bool(p, x);
    REQUIRE(sat == oracle::holds(p, x));
    const double w = eval_weight(p, x, SemiringTag::maxplus).value();
    REQUIRE((w == 0.0) == sat);
    REQUIRE((w < 0.0) == !sat);
    REQUIRE(eval_weight(p, x, SemiringTag::boolean).value() == (sat ? 1.0 : 0.0));
    for (auto s : {SemiringTag::minmax, SemiringTag::maxplus, SemiringTag::minplus}) {
      REQUIRE(eval_weight(p, x, s).value() == oracle::weight_of(p, x, s));
    }
  }
  CHECK(tested == 1000);
}

TEST_CASE("box signed distance has the right sign") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  const MuFunction box = MuFunction::box("b", {-0.5, -1}, {1, 0.25}, {0, 1});
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    const bool inside = x[0] > -0.5 && x[0] < 1 && x[1] > -1 && x[1] < 0.25;
    const double mu = box(x);
    if (std::fabs(mu) < 1e-6) continue;
    REQUIRE((mu > 0) == inside);
  }
}

TEST_CASE("raising one atom never lowers the weight") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 500; ++i) {
    const double c = u(rng), d = u(rng);
    const Predicate other = random_predicate(rng, 2);
    for (auto s : {SemiringTag::minmax, SemiringTag::maxplus}) {
      const auto lo = Predicate::atom(MuFunction::affine({0, 0}, c));
      const auto hi = Predicate::atom(MuFunction::affine({0, 0}, c + std::fabs(d)));
      const std::vector<double> x{u(rng), u(rng)};
      REQUIRE(eval_weight(Predicate::conj(hi, other), x, s).value() >=
              eval_weight(Predicate::conj(lo, other), x, s).value());
      REQUIRE(eval_weight(Predicate::disj(hi, other), x, s).value() >=
              eval_weight(Predicate::disj(lo, other), x, s).value());
    }
  }
}

TEST_CASE("tightening shifts every atom by the margin") {
  const auto r = regions();
  const Predicate p = parse_predicate("in(red) & !in(blue) & dist(goal) <= 1 | affine(1, 0; 0) >= 0", r);
  const Predicate t = tighten(p, 0.1);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-3, 3);
  std::function<void(const Predicate&, const Predicate&, const std::vector<double>&)> walk =
      [&](const Predicate& a, const Predicate& b, const std::vector<double>& x) {
        if (a.kind() == Predicate::Kind::atom) {
          CHECK(b.mu()(x) <= a.mu()(x) - 0.1 + 1e-12);
          return;
        }
        if (a.kind() == Predicate::Kind::conj || a.kind() == Predicate::Kind::disj) {
          walk(a.left(), b.left(), x);
          walk(a.right(), b.right(), x);
        }
      };
  for (int i = 0; i < 200; ++i) walk(p, t, {u(rng), u(rng)});
  // affine and ball atoms shift exactly
  CHECK(tighten(parse_predicate("affine(1, 0; 0) >= 0", r), 0.1).mu()(std::vector<double>{0.5, 0}) ==
        doctest::Approx(0.4));
  CHECK(tighten(parse_predicate("dist(goal) <= 1", r), 0.1).mu()(std::vector<double>{0.5, 0}) ==
        doctest::Approx(0.4));
}
