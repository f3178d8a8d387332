#pragma once

// Dense semiring kernels on raw carrier values.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is chosen once at startup from the CPU features; the
// environment variable SYMAUT_ISA=scalar forces the reference path. All
// variants are bit-identical because max, min and a single addition per term
// are exact and order-independent reductions.

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

#include "symaut/algebra/semiring.hpp"

namespace symaut::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Overrides the dispatch choice; throws DomainError if `isa` is unavailable.
void set_active_isa(Isa isa);

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct DotResult {
  double value;
  /// Lowest index k whose term a[k] (x) b[k] equals `value`; npos when every
  /// term is the semiring zero.
  std::size_t arg;
};

/// (+)_k a[k] (x) b[k]. Spans must have equal length.
DotResult dot(SemiringTag s, std::span<const double> a, std::span<const double> b);

/// out[j] = (+)_i q[i] (x) m[i*n + j] for a row-major n x n matrix.
void vec_mat(SemiringTag s, std::span<const double> q, std::span<const double> m,
             std::size_t n, std::span<double> out);

/// out = a * b for row-major n x n matrices. `out` must not alias the inputs.
void mat_mul(SemiringTag s, std::span<const double> a, std::span<const double> b,
             std::size_t n, std::span<double> out);

namespace scalar {
DotResult dot(SemiringTag s, const double* a, const double* b, std::size_t len);
void vec_mat(SemiringTag s, const double* q, const double* m, std::size_t n, double* out);
void mat_mul(SemiringTag s, const double* a, const double* b, std::size_t n, double* out);
}  // namespace scalar

namespace avx2 {
DotResult dot(SemiringTag s, const double* a, const double* b, std::size_t len);
void vec_mat(SemiringTag s, const double* q, const double* m, std::size_t n, double* out);
void mat_mul(SemiringTag s, const double* a, const double* b, std::size_t n, double* out);
}  // namespace avx2

}  // namespace symaut::kernels
