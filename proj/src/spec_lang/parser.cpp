#include "symaut/spec_lang/parser.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <numeric>

namespace symaut {

Region Region::box(std::vector<double> lo, std::vector<double> hi, std::vector<std::size_t> proj) {
  Region r;
  r.shape = Shape::box;
  r.lo = std::move(lo);
  r.hi = std::move(hi);
  r.proj = std::move(proj);
  return r;
}

Region Region::ball(std::vector<double> center, double radius, std::vector<std::size_t> proj) {
  Region r;
  r.shape = Shape::ball;
  r.center = std::move(center);
  r.radius = radius;
  r.proj = std::move(proj);
  return r;
}

std::vector<std::size_t> Region::projection() const {
  if (!proj.empty()) return proj;
  std::vector<std::size_t> p(dim());
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

std::vector<double> Region::centre() const {
  if (shape == Shape::ball) return center;
  std::vector<double> c(lo.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

MuFunction region_mu(const RegionTable& regions, std::string_view name) {
  auto it = regions.find(name);
  if (it == regions.end()) throw UnknownRegion(std::string(name), 0);
  const Region& r = it->second;
  if (r.shape == Region::Shape::box) {
    return MuFunction::box(it->first, r.lo, r.hi, r.projection());
  }
  return MuFunction::ball(it->first, r.center, r.radius, r.projection());
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

namespace detail {

Lexer::Lexer(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      tokens_.push_back({Kind::ident, std::string(text.substr(i, j - i)), 0.0, i});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
      if (ec != std::errc{}) throw ParseError("malformed number", i);
      const std::size_t j = static_cast<std::size_t>(ptr - text.data());
      tokens_.push_back({Kind::number, std::string(text.substr(i, j - i)), v, i});
      i = j;
      continue;
    }
    static constexpr std::array<std::string_view, 3> two{"<=", ">=", "->"};
    bool matched = false;
    for (auto op : two) {
      if (text.substr(i, 2) == op) {
        tokens_.push_back({Kind::punct, std::string(op), 0.0, i});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("&|!(),;[]-").find(c) != std::string_view::npos) {
      tokens_.push_back({Kind::punct, std::string(1, c), 0.0, i});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  tokens_.push_back({Kind::end, "", 0.0, text.size()});
}

bool Lexer::accept(std::string_view s) {
  const Token& t = peek();
  if (t.kind != Kind::end && t.kind != Kind::number && t.text == s) {
    ++index_;
    return true;
  }
  return false;
}

void Lexer::expect(std::string_view s) {
  if (!accept(s)) {
    fail("expected '" + std::string(s) + "'");
  }
}

double Lexer::expect_number() {
  const bool negative = accept("-");
  const Token& t = peek();
  if (t.kind == Kind::ident && t.text == "inf") {
    ++index_;
    return negative ? -semiring::kInf : semiring::kInf;
  }
  if (t.kind != Kind::number) fail("expected a number");
  ++index_;
  return negative ? -t.number : t.number;
}

std::string Lexer::expect_ident() {
  const Token& t = peek();
  if (t.kind != Kind::ident) fail("expected an identifier");
  ++index_;
  return t.text;
}

void Lexer::fail(const std::string& msg) const {
  const Token& t = peek();
  const std::string found = t.kind == Kind::end ? "end of input" : "'" + t.text + "'";
  throw ParseError(msg + ", found " + found, t.pos);
}

std::optional<MuFunction> parse_atom(Lexer& lex, const RegionTable& regions) {
  const bool bang = lex.peek().text == "!" && lex.peek().kind == Lexer::Kind::punct;
  const auto& head = lex.peek(bang ? 1 : 0);
  if (head.kind != Lexer::Kind::ident) return std::nullopt;
  if (head.text != "in" && head.text != "dist" && (bang || head.text != "affine")) {
    return std::nullopt;
  }
  if (bang) lex.next();
  const std::string kw = lex.expect_ident();
  lex.expect("(");
  if (kw == "affine") {
    std::vector<double> w{lex.expect_number()};
    while (lex.accept(",")) w.push_back(lex.expect_number());
    lex.expect(";");
    const double b = lex.expect_number();
    lex.expect(")");
    lex.expect(">=");
    const auto pos = lex.peek().pos;
    if (lex.expect_number() != 0.0) throw ParseError("affine atoms compare against 0", pos);
    return MuFunction::affine(std::move(w), b);
  }
  const auto name_pos = lex.peek().pos;
  const std::string name = lex.expect_ident();
  lex.expect(")");
  auto it = regions.find(name);
  if (it == regions.end()) throw UnknownRegion(name, name_pos);
  MuFunction mu = region_mu(regions, name);
  if (kw == "dist") {
    lex.expect("<=");
    const double radius = lex.expect_number();
    mu = MuFunction::ball(name, it->second.centre(), radius, it->second.projection());
  }
  return bang ? MuFunction::negated(mu) : mu;
}

}  // namespace detail

namespace {

using detail::Lexer;

Predicate parse_expr(Lexer& lex, const RegionTable& regions);

Predicate parse_factor(Lexer& lex, const RegionTable& regions) {
  if (lex.accept("true")) return Predicate::top();
  if (lex.accept("false")) return Predicate::bottom();
  if (lex.accept("(")) {
    Predicate p = parse_expr(lex, regions);
    lex.expect(")");
    return p;
  }
  if (auto mu = detail::parse_atom(lex, regions)) return Predicate::atom(std::move(*mu));
  lex.fail("expected a guard term");
}

Predicate parse_term(Lexer& lex, const RegionTable& regions) {
  Predicate p = parse_factor(lex, regions);
  while (lex.accept("&")) p = Predicate::conj(p, parse_factor(lex, regions));
  return p;
}

Predicate parse_expr(Lexer& lex, const RegionTable& regions) {
  Predicate p = parse_term(lex, regions);
  while (lex.accept("|")) p = Predicate::disj(p, parse_term(lex, regions));
  return p;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

std::string print(const Predicate& p, Predicate::Kind parent, bool right_child) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::top:
      return "true";
    case K::bottom:
      return "false";
    case K::atom:
      return to_string(p.mu());
    case K::conj:
    case K::disj: {
      const std::string op = p.kind() == K::conj ? " & " : " | ";
      std::string s = print(p.left(), p.kind(), false) + op + print(p.right(), p.kind(), true);
      const bool wrap = (parent == K::conj && p.kind() == K::disj) ||
                        (right_child && parent == p.kind());
      return wrap ? "(" + s + ")" : s;
    }
  }
  return "";
}

}  // namespace

Predicate parse_predicate(std::string_view text, const RegionTable& regions) {
  Lexer lex(text);
  Predicate p = parse_expr(lex, regions);
  if (lex.peek().kind != Lexer::Kind::end) lex.fail("unexpected trailing input");
  return p;
}

std::string to_string(const MuFunction& mu) {
  using M = MuFunction;
  const auto& v = mu.variant();
  if (const auto* f = std::get_if<M::Affine>(&v)) {
    return "affine(" + join_numbers(f->w) + "; " + format_number(f->b) + ") >= 0";
  }
  if (const auto* f = std::get_if<M::Box>(&v)) return "in(" + f->name + ")";
  if (const auto* f = std::get_if<M::Ball>(&v)) {
    return "dist(" + f->name + ") <= " + format_number(f->radius);
  }
  const auto& inner = *std::get<M::Negated>(v).inner;
  return "!" + to_string(inner);
}

namespace {

std::string mu_key(const MuFunction& mu) {
  using M = MuFunction;
  const auto& v = mu.variant();
  auto nums = [](const auto& xs) {
    std::string out;
    for (const auto& x : xs) out += format_number(static_cast<double>(x)) + ",";
    return out;
  };
  if (const auto* f = std::get_if<M::Affine>(&v)) return "A(" + nums(f->w) + ";" + format_number(f->b) + ")";
  if (const auto* f = std::get_if<M::Box>(&v)) {
    return "B(" + f->name + ";" + nums(f->lo) + ";" + nums(f->hi) + ";" + nums(f->proj) + ")";
  }
  if (const auto* f = std::get_if<M::Ball>(&v)) {
    return "S(" + f->name + ";" + nums(f->center) + ";" + format_number(f->radius) + ";" +
           nums(f->proj) + ")";
  }
  return "N(" + mu_key(*std::get<M::Negated>(v).inner) + ")";
}

}  // namespace

std::string structural_key(const Predicate& p) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::top:
      return "T";
    case K::bottom:
      return "F";
    case K::atom:
      return mu_key(p.mu());
    case K::conj:
      return "&(" + structural_key(p.left()) + "," + structural_key(p.right()) + ")";
    case K::disj:
      return "|(" + structural_key(p.left()) + "," + structural_key(p.right()) + ")";
  }
  return "";
}

std::string to_string(const Predicate& p) {
  return print(p, Predicate::Kind::top, false);
}

}  // namespace symaut
