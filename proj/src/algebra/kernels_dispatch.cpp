#include <atomic>
#include <cstdlib>
#include <string>

#include "symaut/algebra/kernels.hpp"

namespace symaut::kernels {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("SYMAUT_ISA")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_lengths(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DomainError(std::string("shape error: ") + what + " has " + std::to_string(got) +
                      " entries, expected " + std::to_string(want));
  }
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw DomainError("instruction set " + std::string(isa_name(isa)) + " is not available");
  }
  active().store(isa, std::memory_order_relaxed);
}

DotResult dot(SemiringTag s, std::span<const double> a, std::span<const double> b) {
  check_lengths(b.size(), a.size(), "dot operand");
  if (active_isa() == Isa::avx2) return avx2::dot(s, a.data(), b.data(), a.size());
  return scalar::dot(s, a.data(), b.data(), a.size());
}

void vec_mat(SemiringTag s, std::span<const double> q, std::span<const double> m,
             std::size_t n, std::span<double> out) {
  check_lengths(q.size(), n, "vector");
  check_lengths(m.size(), n * n, "matrix");
  check_lengths(out.size(), n, "output vector");
  if (active_isa() == Isa::avx2) return avx2::vec_mat(s, q.data(), m.data(), n, out.data());
  scalar::vec_mat(s, q.data(), m.data(), n, out.data());
}

void mat_mul(SemiringTag s, std::span<const double> a, std::span<const double> b,
             std::size_t n, std::span<double> out) {
  check_lengths(a.size(), n * n, "left matrix");
  check_lengths(b.size(), n * n, "right matrix");
  check_lengths(out.size(), n * n, "output matrix");
  if (active_isa() == Isa::avx2) return avx2::mat_mul(s, a.data(), b.data(), n, out.data());
  scalar::mat_mul(s, a.data(), b.data(), n, out.data());
}

}  // namespace symaut::kernels
