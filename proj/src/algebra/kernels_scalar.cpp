#include "symaut/algebra/kernels.hpp"

namespace symaut::kernels::scalar {

namespace {

template <class S>
DotResult dot_impl(const double* a, const double* b, std::size_t len) {
  double acc = S::zero();
  std::size_t arg = npos;
  for (std::size_t k = 0; k < len; ++k) {
    const double term = S::times(a[k], b[k]);
    const double next = S::plus(acc, term);
    // strict improvement keeps the lowest index on ties
    if (next != acc) {
      acc = next;
      arg = k;
    }
  }
  return {acc, arg};
}

template <class S>
void vec_mat_impl(const double* q, const double* m, std::size_t n, double* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = S::zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double qi = q[i];
    if (qi == S::zero()) continue;
    const double* row = m + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] = S::plus(out[j], S::times(qi, row[j]));
  }
}

template <class S>
void mat_mul_impl(const double* a, const double* b, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) vec_mat_impl<S>(a + i * n, b, n, out + i * n);
}

}  // namespace

DotResult dot(SemiringTag s, const double* a, const double* b, std::size_t len) {
  return semiring::visit(s, [&](auto traits) {
    return dot_impl<decltype(traits)>(a, b, len);
  });
}

void vec_mat(SemiringTag s, const double* q, const double* m, std::size_t n, double* out) {
  semiring::visit(s, [&](auto traits) { vec_mat_impl<decltype(traits)>(q, m, n, out); });
}

void mat_mul(SemiringTag s, const double* a, const double* b, std::size_t n, double* out) {
  semiring::visit(s, [&](auto traits) { mat_mul_impl<decltype(traits)>(a, b, n, out); });
}

}  // namespace symaut::kernels::scalar
