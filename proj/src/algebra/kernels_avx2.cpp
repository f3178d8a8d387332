// AVX2 variants of the dense semiring kernels.
// Only reached through dispatch after a CPU feature check.

#include "symaut/algebra/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SYMAUT_HAVE_AVX2_TU 1
#pragma GCC target("avx2")
#include <immintrin.h>
#else
#define SYMAUT_HAVE_AVX2_TU 0
#endif

namespace symaut::kernels::avx2 {

#if SYMAUT_HAVE_AVX2_TU

namespace {

// Operand order mirrors the scalar traits so that ties resolve to the same
// operand: plus(acc, term) keeps acc on ties, times(a, b) keeps a on ties.
struct VMaxPlus {
  using S = semiring::MaxPlus;
  static __m256d plus(__m256d acc, __m256d term) { return _mm256_max_pd(term, acc); }
  static __m256d times(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
};
struct VMinMax {
  using S = semiring::MinMax;
  static __m256d plus(__m256d acc, __m256d term) { return _mm256_max_pd(term, acc); }
  static __m256d times(__m256d a, __m256d b) { return _mm256_min_pd(b, a); }
};
struct VBoolean {
  using S = semiring::Boolean;
  static __m256d plus(__m256d acc, __m256d term) { return _mm256_max_pd(term, acc); }
  static __m256d times(__m256d a, __m256d b) { return _mm256_min_pd(b, a); }
};
struct VMinPlus {
  using S = semiring::MinPlus;
  static __m256d plus(__m256d acc, __m256d term) { return _mm256_min_pd(term, acc); }
  static __m256d times(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
};

template <class V>
DotResult dot_impl(const double* a, const double* b, std::size_t len) {
  using S = typename V::S;
  __m256d acc = _mm256_set1_pd(S::zero());
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    acc = V::plus(acc, V::times(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double value = S::plus(S::plus(lanes[0], lanes[1]), S::plus(lanes[2], lanes[3]));
  for (; k < len; ++k) value = S::plus(value, S::times(a[k], b[k]));
  if (value == S::zero()) return {value, npos};
  for (std::size_t i = 0; i < len; ++i) {
    if (S::times(a[i], b[i]) == value) return {value, i};
  }
  return {value, npos};
}

template <class V>
void vec_mat_impl(const double* q, const double* m, std::size_t n, double* out) {
  using S = typename V::S;
  const __m256d zero = _mm256_set1_pd(S::zero());
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) _mm256_storeu_pd(out + j, zero);
  for (; j < n; ++j) out[j] = S::zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double qi = q[i];
    if (qi == S::zero()) continue;
    const __m256d vq = _mm256_set1_pd(qi);
    const double* row = m + i * n;
    j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d cur = _mm256_loadu_pd(out + j);
      _mm256_storeu_pd(out + j, V::plus(cur, V::times(vq, _mm256_loadu_pd(row + j))));
    }
    for (; j < n; ++j) out[j] = S::plus(out[j], S::times(qi, row[j]));
  }
}

template <class Fn>
decltype(auto) visit_vec(SemiringTag s, Fn&& fn) {
  switch (s) {
    case SemiringTag::boolean:
      return fn(VBoolean{});
    case SemiringTag::minmax:
      return fn(VMinMax{});
    case SemiringTag::maxplus:
      return fn(VMaxPlus{});
    case SemiringTag::minplus:
      return fn(VMinPlus{});
  }
  throw DomainError("unknown semiring tag");
}

}  // namespace

DotResult dot(SemiringTag s, const double* a, const double* b, std::size_t len) {
  return visit_vec(s, [&](auto v) { return dot_impl<decltype(v)>(a, b, len); });
}

void vec_mat(SemiringTag s, const double* q, const double* m, std::size_t n, double* out) {
  visit_vec(s, [&](auto v) { vec_mat_impl<decltype(v)>(q, m, n, out); });
}

void mat_mul(SemiringTag s, const double* a, const double* b, std::size_t n, double* out) {
  visit_vec(s, [&](auto v) {
    for (std::size_t i = 0; i < n; ++i) vec_mat_impl<decltype(v)>(a + i * n, b, n, out + i * n);
  });
}

#else

DotResult dot(SemiringTag s, const double* a, const double* b, std::size_t len) {
  return scalar::dot(s, a, b, len);
}
void vec_mat(SemiringTag s, const double* q, const double* m, std::size_t n, double* out) {
  scalar::vec_mat(s, q, m, n, out);
}
void mat_mul(SemiringTag s, const double* a, const double* b, std::size_t n, double* out) {
  scalar::mat_mul(s, a, b, n, out);
}

#endif

}  // namespace symaut::kernels::avx2
