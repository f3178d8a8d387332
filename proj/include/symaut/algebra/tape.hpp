#pragma once

// Reverse-mode differentiation over a flat, topologically ordered tape.
//
// A Tape is recorded once by running generic code with ad::Var in place of
// double. Because the graph shape depends only on which operands are the
// semiring zero (a structural property), the same tape can be replayed with
// new input values via forward() and differentiated with gradient(). This is
// how the planner reuses one recording across all optimization epochs.
//
// Subgradient conventions:
//   max/min route the adjoint to the winning operand; exact ties go to the
//   operand with the lower node id.
//   semiring_dot routes to the first winning term, then through its times
//   operation (both operands for +, the smaller for min).
//   Operands whose value is infinite (a semiring zero) never receive adjoint.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "symaut/algebra/semiring.hpp"

namespace symaut::ad {

class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The output is an absorbing semiring element, so no gradient exists.
class GradientUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Op : std::uint8_t {
  constant,
  input,
  add,
  sub,
  mul,
  div,
  neg,
  sin,
  cos,
  sqrt,
  abs,
  max,
  min,
  step,  // 1 if operand >= 0 else 0
  sr_dot,
};

using NodeId = std::uint32_t;

class Tape;

/// Handle to a tape node. Cheap to copy; valid while its tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, NodeId id) : tape_(tape), id_(id) {}

  NodeId id() const { return id_; }
  Tape* tape() const { return tape_; }
  double value() const;
  bool is_constant() const;

 private:
  Tape* tape_ = nullptr;
  NodeId id_ = 0;
};

/// Description of one node for building a tape from external data.
struct NodeSpec {
  Op op = Op::constant;
  std::vector<NodeId> operands;  // sr_dot: a0, b0, a1, b1, ...
  double value = 0.0;            // constants and inputs
  SemiringTag semiring = SemiringTag::maxplus;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  /// Builds and validates a tape from specs; rejects forward references,
  /// missing operands and malformed arity with StructuralError.
  static Tape from_specs(std::span<const NodeSpec> specs);

  void reserve(std::size_t nodes);

  Var constant(double v);
  Var input(double v);
  Var unary(Op op, Var a);
  Var binary(Op op, Var a, Var b);
  /// (+)_k a[k] (x) b[k] as one node. Terms with an operand that is the zero
  /// constant are dropped; an empty sum folds to the zero constant.
  Var semiring_dot(SemiringTag s, std::span<const Var> a, std::span<const Var> b);

  std::size_t size() const { return nodes_.size(); }
  double value(NodeId id) const { return values_[id]; }
  Op op(NodeId id) const { return nodes_[id].op; }
  bool is_constant(NodeId id) const { return nodes_[id].op == Op::constant; }

  std::span<const NodeId> inputs() const { return inputs_; }
  void set_input(std::size_t k, double v);
  void set_inputs(std::span<const double> v);

  void set_output(Var out) { output_ = out.id(); has_output_ = true; }
  Var output() const;

  /// Recomputes every node from the current inputs.
  void forward();
  /// forward() and return the output value.
  double evaluate();
  double evaluate(Var out);

  /// Reverse pass from `out` using the cached values; returns d out / d wrt[i].
  /// Throws GradientUndefined when the output value is infinite.
  std::vector<double> gradient(Var out, std::span<const NodeId> wrt);
  std::vector<double> gradient(Var out) { return gradient(out, inputs_); }

  /// Smallest gap between the winner and runner-up over all max, min and
  /// semiring_dot nodes (infinity when there are none). Gradients are
  /// locally exact in a neighbourhood of this radius.
  double branch_margin() const;

  /// Throws StructuralError unless every operand precedes its consumer.
  void validate() const;

 private:
  struct Node {
    Op op;
    SemiringTag semiring;
    NodeId a;
    NodeId b;  // sr_dot: a = offset into terms_, b = term count
  };

  NodeId push(Node n, double value);
  double compute(const Node& n);

  std::vector<Node> nodes_;
  std::vector<double> values_;
  std::vector<NodeId> terms_;
  std::vector<NodeId> inputs_;
  std::vector<double> adjoint_;
  std::vector<double> scratch_a_, scratch_b_;
  NodeId output_ = 0;
  bool has_output_ = false;
};

inline double Var::value() const { return tape_->value(id_); }
inline bool Var::is_constant() const { return tape_->is_constant(id_); }

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator/(Var a, Var b);
Var operator-(Var a);
Var operator+(Var a, double b);
Var operator+(double a, Var b);
Var operator-(Var a, double b);
Var operator-(double a, Var b);
Var operator*(Var a, double b);
Var operator*(double a, Var b);
Var operator/(Var a, double b);

Var max(Var a, Var b);
Var min(Var a, Var b);
Var max(Var a, double b);
Var min(Var a, double b);
Var sqrt(Var a);
Var sin(Var a);
Var cos(Var a);
Var abs(Var a);
Var step(Var a);

}  // namespace symaut::ad
