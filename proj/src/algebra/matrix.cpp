#include "symaut/algebra/matrix.hpp"

#include <algorithm>
#include <string>

#include "symaut/algebra/kernels.hpp"

namespace symaut {

namespace {

void check_carrier(std::span<const double> values, SemiringTag s) {
  for (double v : values) {
    if (!semiring::in_carrier(s, v)) {
      throw DomainError("entry " + format_weight(v) + " is outside the " +
                        std::string(to_string(s)) + " carrier");
    }
  }
}

void check_same(SemiringTag a, SemiringTag b) {
  if (a != b) throw DomainError("operands belong to different semirings");
}

void check_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ShapeError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

WVector::WVector(std::size_t n, SemiringTag s)
    : values_(n, semiring::zero(s)), semiring_(s) {}

WVector::WVector(std::vector<double> values, SemiringTag s)
    : values_(std::move(values)), semiring_(s) {
  check_carrier(values_, s);
}

void WVector::set(std::size_t i, Weight w) {
  if (!semiring::in_carrier(semiring_, w.value())) {
    throw DomainError("entry " + format_weight(w.value()) + " is outside the carrier");
  }
  values_.at(i) = w.value();
}

bool WVector::all_zero() const {
  const double z = semiring::zero(semiring_);
  return std::all_of(values_.begin(), values_.end(), [z](double v) { return v == z; });
}

WMatrix::WMatrix(std::size_t n, SemiringTag s)
    : n_(n), values_(n * n, semiring::zero(s)), semiring_(s) {}

WMatrix::WMatrix(std::size_t n, std::vector<double> row_major, SemiringTag s)
    : n_(n), values_(std::move(row_major)), semiring_(s) {
  check_dim(values_.size(), n * n);
  check_carrier(values_, s);
}

WMatrix WMatrix::identity(std::size_t n, SemiringTag s) {
  WMatrix m(n, s);
  for (std::size_t i = 0; i < n; ++i) m.values_[i * n + i] = semiring::one(s);
  return m;
}

void WMatrix::set(std::size_t row, std::size_t col, Weight w) {
  if (row >= n_ || col >= n_) throw ShapeError("matrix index out of range");
  if (!semiring::in_carrier(semiring_, w.value())) {
    throw DomainError("entry " + format_weight(w.value()) + " is outside the carrier");
  }
  values_[row * n_ + col] = w.value();
}

WMatrix mat_mul(const WMatrix& a, const WMatrix& b) {
  check_dim(a.dim(), b.dim());
  check_same(a.semiring(), b.semiring());
  std::vector<double> out(a.dim() * a.dim());
  kernels::mat_mul(a.semiring(), a.values(), b.values(), a.dim(), out);
  return WMatrix(a.dim(), std::move(out), a.semiring());
}

WMatrix mat_add(const WMatrix& a, const WMatrix& b) {
  check_dim(a.dim(), b.dim());
  check_same(a.semiring(), b.semiring());
  std::vector<double> out(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = semiring::plus(a.semiring(), out[i], b.values()[i]);
  }
  return WMatrix(a.dim(), std::move(out), a.semiring());
}

WVector vec_mat(const WVector& q, const WMatrix& a) {
  check_dim(q.size(), a.dim());
  check_same(q.semiring(), a.semiring());
  std::vector<double> out(q.size());
  kernels::vec_mat(q.semiring(), q.values(), a.values(), a.dim(), out);
  return WVector(std::move(out), q.semiring());
}

Weight dot(const WVector& a, const WVector& b) {
  check_dim(a.size(), b.size());
  check_same(a.semiring(), b.semiring());
  return Weight(kernels::dot(a.semiring(), a.values(), b.values()).value);
}

}  // namespace symaut
