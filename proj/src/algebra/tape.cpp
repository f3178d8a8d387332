#include "symaut/algebra/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symaut/algebra/kernels.hpp"

namespace symaut::ad {

namespace {

constexpr double kInf = semiring::kInf;

int arity(Op op) {
  switch (op) {
    case Op::constant:
    case Op::input:
      return 0;
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::sqrt:
    case Op::abs:
    case Op::step:
      return 1;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::max:
    case Op::min:
      return 2;
    case Op::sr_dot:
      return -1;
  }
  return -2;
}

double apply_unary(Op op, double a) {
  switch (op) {
    case Op::neg:
      return -a;
    case Op::sin:
      return std::sin(a);
    case Op::cos:
      return std::cos(a);
    case Op::sqrt:
      return std::sqrt(a);
    case Op::abs:
      return std::fabs(a);
    case Op::step:
      return a >= 0.0 ? 1.0 : 0.0;
    default:
      throw StructuralError("not a unary op");
  }
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::add:
      return a + b;
    case Op::sub:
      return a - b;
    case Op::mul:
      return a * b;
    case Op::div:
      return a / b;
    case Op::max:
      return a < b ? b : a;
    case Op::min:
      return b < a ? b : a;
    default:
      throw StructuralError("not a binary op");
  }
}

Tape* tape_of(Var a, Var b) {
  if (a.tape() != b.tape() || a.tape() == nullptr) {
    throw StructuralError("operands recorded on different tapes");
  }
  return a.tape();
}

}  // namespace

void Tape::reserve(std::size_t nodes) {
  nodes_.reserve(nodes);
  values_.reserve(nodes);
}

NodeId Tape::push(Node n, double value) {
  nodes_.push_back(n);
  values_.push_back(value);
  return static_cast<NodeId>(nodes_.size() - 1);
}

Var Tape::constant(double v) {
  return {this, push({Op::constant, SemiringTag::maxplus, 0, 0}, v)};
}

Var Tape::input(double v) {
  const NodeId id = push({Op::input, SemiringTag::maxplus, 0, 0}, v);
  inputs_.push_back(id);
  return {this, id};
}

Var Tape::unary(Op op, Var a) {
  const double v = apply_unary(op, a.value());
  if (a.is_constant()) return constant(v);
  return {this, push({op, SemiringTag::maxplus, a.id(), 0}, v)};
}

Var Tape::binary(Op op, Var a, Var b) {
  const double va = a.value();
  const double vb = b.value();
  const bool ca = a.is_constant();
  const bool cb = b.is_constant();
  const double v = apply_binary(op, va, vb);
  if (ca && cb) return constant(v);
  // Infinite constants are semiring zeros; fold them so that they never
  // appear as operands of recorded nodes.
  const bool ia = ca && std::isinf(va);
  const bool ib = cb && std::isinf(vb);
  if (ia || ib) {
    switch (op) {
      case Op::add:
      case Op::sub:
        return constant(v);
      case Op::max:
        if (ia && va < 0) return b;
        if (ib && vb < 0) return a;
        return constant(kInf);
      case Op::min:
        if (ia && va > 0) return b;
        if (ib && vb > 0) return a;
        return constant(-kInf);
      default:
        break;
    }
  }
  return {this, push({op, SemiringTag::maxplus, a.id(), b.id()}, v)};
}

Var Tape::semiring_dot(SemiringTag s, std::span<const Var> a, std::span<const Var> b) {
  if (a.size() != b.size()) throw StructuralError("semiring_dot operand count mismatch");
  const double zero = semiring::zero(s);
  std::vector<Var> keep_a, keep_b;
  keep_a.reserve(a.size());
  keep_b.reserve(b.size());
  bool all_const = true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if ((a[k].is_constant() && a[k].value() == zero) ||
        (b[k].is_constant() && b[k].value() == zero)) {
      continue;
    }
    all_const = all_const && a[k].is_constant() && b[k].is_constant();
    keep_a.push_back(a[k]);
    keep_b.push_back(b[k]);
  }
  if (keep_a.empty()) return constant(zero);
  if (keep_a.size() == 1) {
    const Op times = semiring::times_is_add(s) ? Op::add : Op::min;
    return binary(times, keep_a[0], keep_b[0]);
  }
  scratch_a_.resize(keep_a.size());
  scratch_b_.resize(keep_a.size());
  for (std::size_t k = 0; k < keep_a.size(); ++k) {
    scratch_a_[k] = keep_a[k].value();
    scratch_b_[k] = keep_b[k].value();
  }
  const double v = kernels::dot(s, scratch_a_, scratch_b_).value;
  if (all_const) return constant(v);
  const auto offset = static_cast<NodeId>(terms_.size());
  for (std::size_t k = 0; k < keep_a.size(); ++k) {
    terms_.push_back(keep_a[k].id());
    terms_.push_back(keep_b[k].id());
  }
  return {this, push({Op::sr_dot, s, offset, static_cast<NodeId>(keep_a.size())}, v)};
}

void Tape::set_input(std::size_t k, double v) { values_.at(inputs_.at(k)) = v; }

void Tape::set_inputs(std::span<const double> v) {
  if (v.size() != inputs_.size()) {
    throw StructuralError("expected " + std::to_string(inputs_.size()) + " input values, got " +
                          std::to_string(v.size()));
  }
  for (std::size_t k = 0; k < v.size(); ++k) values_[inputs_[k]] = v[k];
}

Var Tape::output() const {
  if (!has_output_) throw StructuralError("tape has no output node");
  return {const_cast<Tape*>(this), output_};
}

double Tape::compute(const Node& n) {
  switch (n.op) {
    case Op::constant:
    case Op::input:
      return 0.0;  // not recomputed
    case Op::sr_dot: {
      scratch_a_.resize(n.b);
      scratch_b_.resize(n.b);
      const NodeId* t = terms_.data() + n.a;
      for (NodeId k = 0; k < n.b; ++k) {
        scratch_a_[k] = values_[t[2 * k]];
        scratch_b_[k] = values_[t[2 * k + 1]];
      }
      return kernels::dot(n.semiring, scratch_a_, scratch_b_).value;
    }
    default:
      if (arity(n.op) == 1) return apply_unary(n.op, values_[n.a]);
      return apply_binary(n.op, values_[n.a], values_[n.b]);
  }
}

void Tape::forward() {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.op == Op::constant || n.op == Op::input) continue;
    values_[i] = compute(n);
  }
}

double Tape::evaluate() { return evaluate(output()); }

double Tape::evaluate(Var out) {
  forward();
  return values_.at(out.id());
}

std::vector<double> Tape::gradient(Var out, std::span<const NodeId> wrt) {
  const NodeId root = out.id();
  if (root >= nodes_.size()) throw StructuralError("output node does not exist");
  if (!std::isfinite(values_[root])) {
    throw GradientUndefined("output is " + format_weight(values_[root]) +
                            "; the weight carries no gradient");
  }
  adjoint_.assign(root + 1, 0.0);
  adjoint_[root] = 1.0;
  auto send = [this](NodeId id, double g) {
    if (std::isfinite(values_[id])) adjoint_[id] += g;
  };
  for (NodeId i = root + 1; i-- > 0;) {
    const double g = adjoint_[i];
    if (g == 0.0) continue;
    const Node& n = nodes_[i];
    const double va = n.op == Op::sr_dot || arity(n.op) < 1 ? 0.0 : values_[n.a];
    const double vb = arity(n.op) == 2 ? values_[n.b] : 0.0;
    switch (n.op) {
      case Op::constant:
      case Op::input:
      case Op::step:
        break;
      case Op::add:
        send(n.a, g);
        send(n.b, g);
        break;
      case Op::sub:
        send(n.a, g);
        send(n.b, -g);
        break;
      case Op::mul:
        send(n.a, g * vb);
        send(n.b, g * va);
        break;
      case Op::div:
        send(n.a, g / vb);
        send(n.b, -g * va / (vb * vb));
        break;
      case Op::neg:
        send(n.a, -g);
        break;
      case Op::sin:
        send(n.a, g * std::cos(va));
        break;
      case Op::cos:
        send(n.a, -g * std::sin(va));
        break;
      case Op::sqrt:
        if (values_[i] > 0.0) send(n.a, g * 0.5 / values_[i]);
        break;
      case Op::abs:
        if (va != 0.0) send(n.a, va > 0.0 ? g : -g);
        break;
      case Op::max:
      case Op::min: {
        NodeId win;
        const bool a_wins = n.op == Op::max ? va > vb : va < vb;
        const bool b_wins = n.op == Op::max ? vb > va : vb < va;
        if (a_wins) {
          win = n.a;
        } else if (b_wins) {
          win = n.b;
        } else {
          win = std::min(n.a, n.b);
        }
        send(win, g);
        break;
      }
      case Op::sr_dot: {
        const NodeId* t = terms_.data() + n.a;
        const double target = values_[i];
        for (NodeId k = 0; k < n.b; ++k) {
          const NodeId ia = t[2 * k];
          const NodeId ib = t[2 * k + 1];
          const double x = values_[ia];
          const double y = values_[ib];
          if (semiring::times(n.semiring, x, y) != target) continue;
          if (semiring::times_is_add(n.semiring)) {
            send(ia, g);
            send(ib, g);
          } else if (x < y) {
            send(ia, g);
          } else if (y < x) {
            send(ib, g);
          } else {
            send(std::min(ia, ib), g);
          }
          break;
        }
        break;
      }
    }
  }
  std::vector<double> grad;
  grad.reserve(wrt.size());
  for (NodeId id : wrt) grad.push_back(id <= root ? adjoint_[id] : 0.0);
  return grad;
}

double Tape::branch_margin() const {
  double margin = kInf;
  auto gap = [&margin](double x, double y) {
    if (std::isfinite(x) && std::isfinite(y)) margin = std::min(margin, std::fabs(x - y));
  };
  for (const Node& n : nodes_) {
    if (n.op == Op::max || n.op == Op::min) {
      gap(values_[n.a], values_[n.b]);
    } else if (n.op == Op::sr_dot) {
      const NodeId* t = terms_.data() + n.a;
      double best = semiring::zero(n.semiring);
      double second = best;
      std::size_t best_k = 0;
      for (NodeId k = 0; k < n.b; ++k) {
        const double term = semiring::times(n.semiring, values_[t[2 * k]], values_[t[2 * k + 1]]);
        if (semiring::plus(n.semiring, best, term) != best) {
          second = best;
          best = term;
          best_k = k;
        } else if (semiring::plus(n.semiring, second, term) != second) {
          second = term;
        }
      }
      gap(best, second);
      if (!semiring::times_is_add(n.semiring)) {
        gap(values_[t[2 * best_k]], values_[t[2 * best_k + 1]]);
      }
    }
  }
  return margin;
}

void Tape::validate() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    auto check = [&](NodeId id) {
      if (id >= i) {
        throw StructuralError("node " + std::to_string(i) + " references node " +
                              std::to_string(id) + " which does not precede it");
      }
    };
    const int ar = arity(n.op);
    if (ar >= 1) check(n.a);
    if (ar == 2) check(n.b);
    if (n.op == Op::sr_dot) {
      if (n.a + 2ull * n.b > terms_.size()) throw StructuralError("sr_dot terms out of range");
      for (NodeId k = 0; k < 2 * n.b; ++k) check(terms_[n.a + k]);
    }
  }
  if (has_output_ && output_ >= nodes_.size()) throw StructuralError("output node missing");
}

Tape Tape::from_specs(std::span<const NodeSpec> specs) {
  Tape tape;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const NodeSpec& s = specs[i];
    const int ar = arity(s.op);
    const std::string where = "node " + std::to_string(i);
    if (ar == -2) throw StructuralError(where + ": unknown op");
    if (ar >= 0 && s.operands.size() != static_cast<std::size_t>(ar)) {
      throw StructuralError(where + ": expected " + std::to_string(ar) + " operands");
    }
    if (ar == -1 && (s.operands.empty() || s.operands.size() % 2 != 0)) {
      throw StructuralError(where + ": sr_dot needs a nonempty list of operand pairs");
    }
    for (NodeId id : s.operands) {
      if (id >= i) {
        throw StructuralError(where + " references node " + std::to_string(id) +
                              (id < specs.size() ? " (cycle or forward reference)"
                                                 : " (missing operand)"));
      }
    }
    Node n{s.op, s.semiring, 0, 0};
    if (s.op == Op::input) {
      tape.inputs_.push_back(static_cast<NodeId>(i));
    } else if (s.op == Op::sr_dot) {
      n.a = static_cast<NodeId>(tape.terms_.size());
      n.b = static_cast<NodeId>(s.operands.size() / 2);
      tape.terms_.insert(tape.terms_.end(), s.operands.begin(), s.operands.end());
    } else if (ar >= 1) {
      n.a = s.operands[0];
      if (ar == 2) n.b = s.operands[1];
    }
    tape.nodes_.push_back(n);
    tape.values_.push_back(s.op == Op::constant || s.op == Op::input ? s.value : 0.0);
  }
  tape.forward();
  if (!specs.empty()) tape.set_output({&tape, static_cast<NodeId>(specs.size() - 1)});
  return tape;
}

Var operator+(Var a, Var b) { return tape_of(a, b)->binary(Op::add, a, b); }
Var operator-(Var a, Var b) { return tape_of(a, b)->binary(Op::sub, a, b); }
Var operator*(Var a, Var b) { return tape_of(a, b)->binary(Op::mul, a, b); }
Var operator/(Var a, Var b) { return tape_of(a, b)->binary(Op::div, a, b); }
Var operator-(Var a) { return a.tape()->unary(Op::neg, a); }
Var operator+(Var a, double b) { return a + a.tape()->constant(b); }
Var operator+(double a, Var b) { return b.tape()->constant(a) + b; }
Var operator-(Var a, double b) { return a - a.tape()->constant(b); }
Var operator-(double a, Var b) { return b.tape()->constant(a) - b; }
Var operator*(Var a, double b) { return a * a.tape()->constant(b); }
Var operator*(double a, Var b) { return b.tape()->constant(a) * b; }
Var operator/(Var a, double b) { return a / a.tape()->constant(b); }

Var max(Var a, Var b) { return tape_of(a, b)->binary(Op::max, a, b); }
Var min(Var a, Var b) { return tape_of(a, b)->binary(Op::min, a, b); }
Var max(Var a, double b) { return max(a, a.tape()->constant(b)); }
Var min(Var a, double b) { return min(a, a.tape()->constant(b)); }
Var sqrt(Var a) { return a.tape()->unary(Op::sqrt, a); }
Var sin(Var a) { return a.tape()->unary(Op::sin, a); }
Var cos(Var a) { return a.tape()->unary(Op::cos, a); }
Var abs(Var a) { return a.tape()->unary(Op::abs, a); }
Var step(Var a) { return a.tape()->unary(Op::step, a); }

}  // namespace symaut::ad
