#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "symaut/algebra/semiring.hpp"

namespace symaut {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Weight vector indexed by automaton location.
class WVector {
 public:
  WVector() = default;
  /// n entries, all equal to the zero of `s`.
  WVector(std::size_t n, SemiringTag s);
  WVector(std::vector<double> values, SemiringTag s);

  std::size_t size() const { return values_.size(); }
  SemiringTag semiring() const { return semiring_; }

  Weight operator[](std::size_t i) const { return Weight(values_[i]); }
  void set(std::size_t i, Weight w);

  std::span<const double> values() const { return values_; }
  /// True when every entry is the semiring zero.
  bool all_zero() const;

  friend bool operator==(const WVector& a, const WVector& b) {
    return a.semiring_ == b.semiring_ && a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
  SemiringTag semiring_ = SemiringTag::maxplus;
};

/// Square row-major weight matrix; rows and columns are locations.
class WMatrix {
 public:
  WMatrix() = default;
  /// n x n matrix filled with the zero of `s`.
  WMatrix(std::size_t n, SemiringTag s);
  WMatrix(std::size_t n, std::vector<double> row_major, SemiringTag s);

  static WMatrix identity(std::size_t n, SemiringTag s);

  std::size_t dim() const { return n_; }
  SemiringTag semiring() const { return semiring_; }

  Weight operator()(std::size_t row, std::size_t col) const {
    return Weight(values_[row * n_ + col]);
  }
  void set(std::size_t row, std::size_t col, Weight w);

  std::span<const double> values() const { return values_; }

  friend bool operator==(const WMatrix& a, const WMatrix& b) {
    return a.n_ == b.n_ && a.semiring_ == b.semiring_ && a.values_ == b.values_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  SemiringTag semiring_ = SemiringTag::maxplus;
};

/// C_ij = (+)_k A_ik (x) B_kj. Throws ShapeError when dimensions differ.
WMatrix mat_mul(const WMatrix& a, const WMatrix& b);
/// Element-wise semiring addition.
WMatrix mat_add(const WMatrix& a, const WMatrix& b);
/// q'_j = (+)_i q_i (x) A_ij.
WVector vec_mat(const WVector& q, const WMatrix& a);
/// (+)_i a_i (x) b_i.
Weight dot(const WVector& a, const WVector& b);

}  // namespace symaut
