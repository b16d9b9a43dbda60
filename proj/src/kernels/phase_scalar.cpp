#include <cmath>
#include <cstdlib>
#include <numbers>

#include "splitcubic/kernels.hpp"

namespace splitcubic::kernels {

namespace scalar {

std::complex<double> phase_sum(const double* theta, std::size_t n) {
  double re = 0, im = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * theta[i];
    re += std::cos(a);
    im += std::sin(a);
  }
  return {re, im};
}

std::complex<double> weighted_phase_sum(const double* weight, const double* theta, std::size_t n) {
  double re = 0, im = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * theta[i];
    re += weight[i] * std::cos(a);
    im += weight[i] * std::sin(a);
  }
  return {re, im};
}

}  // namespace scalar

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* force = std::getenv("SPLITCUBIC_FORCE_SCALAR");
    if (force != nullptr && *force != '\0' && *force != '0') return Isa::scalar;
    return avx2_available() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::complex<double> phase_sum(std::span<const double> theta) {
#if defined(SPLITCUBIC_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::phase_sum(theta.data(), theta.size());
#endif
  return scalar::phase_sum(theta.data(), theta.size());
}

std::complex<double> weighted_phase_sum(std::span<const double> weight, std::span<const double> theta) {
  const std::size_t n = std::min(weight.size(), theta.size());
#if defined(SPLITCUBIC_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::weighted_phase_sum(weight.data(), theta.data(), n);
#endif
  return scalar::weighted_phase_sum(weight.data(), theta.data(), n);
}

}  // namespace splitcubic::kernels
