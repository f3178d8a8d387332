#include "symaut/stl/stl.hpp"

#include <algorithm>
#include <cmath>

namespace symaut::stl {

Formula Formula::make(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

Formula Formula::top() { return make({Kind::top, nullptr, nullptr, nullptr, {}}); }
Formula Formula::bottom() { return make({Kind::bottom, nullptr, nullptr, nullptr, {}}); }

Formula Formula::pred(MuFunction mu) {
  return make({Kind::pred, std::make_shared<const MuFunction>(std::move(mu)), nullptr, nullptr, {}});
}

Formula Formula::negation(Formula f) {
  return make({Kind::not_, nullptr, std::make_shared<const Formula>(std::move(f)), nullptr, {}});
}

Formula Formula::conj(Formula a, Formula b) {
  return make({Kind::and_, nullptr, std::make_shared<const Formula>(std::move(a)),
               std::make_shared<const Formula>(std::move(b)), {}});
}

Formula Formula::disj(Formula a, Formula b) {
  return make({Kind::or_, nullptr, std::make_shared<const Formula>(std::move(a)),
               std::make_shared<const Formula>(std::move(b)), {}});
}

Formula Formula::implies(Formula a, Formula b) {
  return make({Kind::implies, nullptr, std::make_shared<const Formula>(std::move(a)),
               std::make_shared<const Formula>(std::move(b)), {}});
}

Formula Formula::always(Interval i, Formula f) {
  if (i.a > i.b) throw std::invalid_argument("interval lower bound exceeds upper bound");
  return make({Kind::alw, nullptr, std::make_shared<const Formula>(std::move(f)), nullptr, i});
}

Formula Formula::eventually(Interval i, Formula f) {
  if (i.a > i.b) throw std::invalid_argument("interval lower bound exceeds upper bound");
  return make({Kind::ev, nullptr, std::make_shared<const Formula>(std::move(f)), nullptr, i});
}

std::size_t Formula::depth() const {
  switch (kind()) {
    case Kind::top:
    case Kind::bottom:
    case Kind::pred:
      return 0;
    case Kind::not_:
    case Kind::alw:
    case Kind::ev:
      return 1 + child().depth();
    case Kind::and_:
    case Kind::or_:
    case Kind::implies:
      return 1 + std::max(left().depth(), right().depth());
  }
  return 0;
}

namespace {

using detail::Lexer;

Formula parse_formula_rule(Lexer& lex, const RegionTable& regions);

std::size_t parse_bound(Lexer& lex) {
  const auto pos = lex.peek().pos;
  const double v = lex.expect_number();
  if (std::isinf(v) && v > 0) return kUnbounded;
  if (!(v >= 0) || v != std::floor(v)) throw ParseError("interval bounds are natural numbers", pos);
  return static_cast<std::size_t>(v);
}

Formula parse_unary(Lexer& lex, const RegionTable& regions) {
  const auto& t = lex.peek();
  if (t.kind == Lexer::Kind::punct && t.text == "!") {
    // "!in(...)" and "!dist(...)" are atoms; both readings agree.
    if (auto mu = detail::parse_atom(lex, regions)) return Formula::pred(std::move(*mu));
    lex.next();
    return Formula::negation(parse_unary(lex, regions));
  }
  if (t.kind == Lexer::Kind::ident && (t.text == "G" || t.text == "F")) {
    const bool alw = t.text == "G";
    lex.next();
    Interval iv;
    if (lex.accept("[")) {
      const auto pos = lex.peek().pos;
      iv.a = parse_bound(lex);
      lex.expect(",");
      iv.b = parse_bound(lex);
      lex.expect("]");
      if (iv.a > iv.b) throw ParseError("empty interval", pos);
    }
    Formula f = parse_unary(lex, regions);
    return alw ? Formula::always(iv, std::move(f)) : Formula::eventually(iv, std::move(f));
  }
  if (lex.accept("true")) return Formula::top();
  if (lex.accept("false")) return Formula::bottom();
  if (lex.accept("(")) {
    Formula f = parse_formula_rule(lex, regions);
    lex.expect(")");
    return f;
  }
  if (auto mu = detail::parse_atom(lex, regions)) return Formula::pred(std::move(*mu));
  lex.fail("expected a formula");
}

Formula parse_conj(Lexer& lex, const RegionTable& regions) {
  Formula f = parse_unary(lex, regions);
  while (lex.accept("&")) f = Formula::conj(f, parse_unary(lex, regions));
  return f;
}

Formula parse_disj(Lexer& lex, const RegionTable& regions) {
  Formula f = parse_conj(lex, regions);
  while (lex.accept("|")) f = Formula::disj(f, parse_conj(lex, regions));
  return f;
}

Formula parse_formula_rule(Lexer& lex, const RegionTable& regions) {
  Formula f = parse_disj(lex, regions);
  if (lex.accept("->")) return Formula::implies(f, parse_formula_rule(lex, regions));
  return f;
}

std::string bound_text(std::size_t b) { return b == kUnbounded ? "inf" : std::to_string(b); }

// Every binary node is parenthesized; unary operators bind tightest.
std::string print(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::top:
      return "true";
    case K::bottom:
      return "false";
    case K::pred:
      return to_string(f.mu());
    case K::not_:
      return "!" + print(f.child());
    case K::alw:
    case K::ev: {
      const auto iv = f.interval();
      return std::string(f.kind() == K::alw ? "G" : "F") + "[" + bound_text(iv.a) + ", " +
             bound_text(iv.b) + "] " + print(f.child());
    }
    case K::and_:
      return "(" + print(f.left()) + " & " + print(f.right()) + ")";
    case K::or_:
      return "(" + print(f.left()) + " | " + print(f.right()) + ")";
    case K::implies:
      return "(" + print(f.left()) + " -> " + print(f.right()) + ")";
  }
  return "";
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// The window [t+a, t+b] clipped to the trace.
struct Window {
  std::size_t lo, hi;
  bool empty;
};

Window window(Interval iv, std::size_t t, std::size_t n) {
  const std::size_t lo = t + iv.a;
  if (lo >= n) return {0, 0, true};
  const std::size_t hi = iv.b >= n - t ? n - 1 : t + iv.b;
  return {lo, hi, false};
}

std::vector<double> signal(const Formula& f, const Trace& xi, const MonitorOptions& opt) {
  using K = Formula::Kind;
  const std::size_t n = xi.size();
  std::vector<double> out(n);
  switch (f.kind()) {
    case K::top:
      std::fill(out.begin(), out.end(), kInf);
      return out;
    case K::bottom:
      std::fill(out.begin(), out.end(), -kInf);
      return out;
    case K::pred:
      for (std::size_t t = 0; t < n; ++t) out[t] = f.mu()(xi[t]);
      return out;
    case K::not_: {
      out = signal(f.child(), xi, opt);
      for (auto& v : out) v = -v;
      return out;
    }
    case K::and_:
    case K::or_:
    case K::implies: {
      auto a = signal(f.left(), xi, opt);
      const auto b = signal(f.right(), xi, opt);
      for (std::size_t t = 0; t < n; ++t) {
        if (f.kind() == K::and_) out[t] = std::min(a[t], b[t]);
        if (f.kind() == K::or_) out[t] = std::max(a[t], b[t]);
        if (f.kind() == K::implies) out[t] = std::max(-a[t], b[t]);
      }
      return out;
    }
    case K::alw:
    case K::ev: {
      const bool alw = f.kind() == K::alw;
      const auto c = signal(f.child(), xi, opt);
      const auto iv = f.interval();
      if (opt.strict && iv.b != kUnbounded && iv.b >= n) {
        throw WindowError("window [" + std::to_string(iv.a) + ", " + std::to_string(iv.b) +
                          "] does not fit a trace of length " + std::to_string(n));
      }
      if (iv.b == kUnbounded) {
        // suffix extremum, shifted by a
        std::vector<double> suffix(n + 1, alw ? kInf : -kInf);
        for (std::size_t t = n; t-- > 0;) {
          suffix[t] = alw ? std::min(c[t], suffix[t + 1]) : std::max(c[t], suffix[t + 1]);
        }
        for (std::size_t t = 0; t < n; ++t) {
          out[t] = t + iv.a < n ? suffix[t + iv.a] : suffix[n];
        }
        return out;
      }
      for (std::size_t t = 0; t < n; ++t) {
        const Window w = window(iv, t, n);
        double acc = alw ? kInf : -kInf;
        if (!w.empty) {
          for (std::size_t k = w.lo; k <= w.hi; ++k) {
            acc = alw ? std::min(acc, c[k]) : std::max(acc, c[k]);
          }
        }
        out[t] = acc;
      }
      return out;
    }
  }
  return out;
}

}  // namespace

Formula parse_formula(std::string_view text, const RegionTable& regions) {
  Lexer lex(text);
  Formula f = parse_formula_rule(lex, regions);
  if (lex.peek().kind != Lexer::Kind::end) lex.fail("unexpected trailing input");
  return f;
}

std::string to_string(const Formula& f) { return print(f); }

std::vector<double> robustness_signal(const Formula& f, const Trace& xi, MonitorOptions opt) {
  if (xi.empty()) throw std::invalid_argument("robustness of an empty trace");
  return signal(f, xi, opt);
}

double robustness(const Formula& f, const Trace& xi, std::size_t t, MonitorOptions opt) {
  if (t >= xi.size()) throw std::out_of_range("time index past the end of the trace");
  return robustness_signal(f, xi, opt)[t];
}

bool stl_accepts(const Formula& f, const Trace& xi, MonitorOptions opt) {
  return robustness(f, xi, 0, opt) >= 0.0;
}

bool satisfies(const Formula& f, const Trace& xi, std::size_t t) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::top:
      return true;
    case K::bottom:
      return false;
    case K::pred:
      return f.mu()(xi[t]) >= 0.0;
    case K::not_:
      return !satisfies(f.child(), xi, t);
    case K::and_:
      return satisfies(f.left(), xi, t) && satisfies(f.right(), xi, t);
    case K::or_:
      return satisfies(f.left(), xi, t) || satisfies(f.right(), xi, t);
    case K::implies:
      return !satisfies(f.left(), xi, t) || satisfies(f.right(), xi, t);
    case K::alw:
    case K::ev: {
      const bool alw = f.kind() == K::alw;
      const auto iv = f.interval();
      for (std::size_t k = t + iv.a; k < xi.size() && k - t <= iv.b; ++k) {
        if (satisfies(f.child(), xi, k) != alw) return !alw;
      }
      return alw;
    }
  }
  return false;
}

}  // namespace symaut::stl
