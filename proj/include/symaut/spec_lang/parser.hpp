#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symaut/spec_lang/predicate.hpp"

namespace symaut {

/// Named workspace region referenced by guards as in(NAME) or dist(NAME).
struct Region {
  enum class Shape { box, ball };
  Shape shape = Shape::box;
  std::vector<double> lo, hi;    // box
  std::vector<double> center;    // ball (also the box centre for dist())
  double radius = 0.0;           // ball
  std::vector<std::size_t> proj; // state coordinates the region lives in

  static Region box(std::vector<double> lo, std::vector<double> hi,
                    std::vector<std::size_t> proj = {});
  static Region ball(std::vector<double> center, double radius,
                     std::vector<std::size_t> proj = {});

  std::size_t dim() const { return shape == Shape::box ? lo.size() : center.size(); }
  /// proj, or 0..dim-1 when unset.
  std::vector<std::size_t> projection() const;
  std::vector<double> centre() const;

  friend bool operator==(const Region&, const Region&) = default;
};

using RegionTable = std::map<std::string, Region, std::less<>>;

/// Atom for x in region `name`; throws UnknownRegion.
MuFunction region_mu(const RegionTable& regions, std::string_view name);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownRegion : public ParseError {
 public:
  UnknownRegion(std::string name, std::size_t position)
      : ParseError("unknown region '" + name + "'", position), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Guard grammar:
///   expr   := term ('|' term)*
///   term   := factor ('&' factor)*
///   factor := 'true' | 'false' | atom | '(' expr ')'
///   atom   := ['!'] 'in' '(' IDENT ')'
///           | ['!'] 'dist' '(' IDENT ')' '<=' NUMBER
///           | 'affine' '(' NUMBER (',' NUMBER)* ';' NUMBER ')' '>=' '0'
Predicate parse_predicate(std::string_view text, const RegionTable& regions);

/// Canonical text; parse_predicate(to_string(p)) reproduces p.
std::string to_string(const Predicate& p);
std::string to_string(const MuFunction& mu);

std::string format_number(double v);

/// Text that identifies a predicate structurally, including the geometry of
/// every atom (unlike to_string, which names regions).
std::string structural_key(const Predicate& p);

namespace detail {

/// Tokenizer shared by the guard and STL parsers.
class Lexer {
 public:
  enum class Kind { ident, number, punct, end };
  struct Token {
    Kind kind;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;
  };

  explicit Lexer(std::string_view text);

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(index_ + ahead, tokens_.size() - 1)];
  }
  Token next() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }
  bool accept(std::string_view punct_or_ident);
  void expect(std::string_view punct_or_ident);
  double expect_number();
  std::string expect_ident();
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

/// Parses one atom (the caller has not consumed any of it). Returns nullopt
/// when the next token does not start an atom.
std::optional<MuFunction> parse_atom(Lexer& lex, const RegionTable& regions);

}  // namespace detail
}  // namespace symaut
