#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace splitcubic::kernels {

// Sums of e(theta) = exp(2 pi i theta). Inputs are phases in turns and should
// be reduced to [0, 1); the vector variant is exact in its quadrant logic only
// for |theta| < 2^29.

enum class Isa { scalar, avx2 };

// AVX2+FMA when the CPU supports it and SPLITCUBIC_FORCE_SCALAR is unset.
Isa active_isa();
const char* isa_name(Isa isa);
bool avx2_available();

std::complex<double> phase_sum(std::span<const double> theta);
std::complex<double> weighted_phase_sum(std::span<const double> weight, std::span<const double> theta);

namespace scalar {
std::complex<double> phase_sum(const double* theta, std::size_t n);
std::complex<double> weighted_phase_sum(const double* weight, const double* theta, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Callable only when avx2_available().
std::complex<double> phase_sum(const double* theta, std::size_t n);
std::complex<double> weighted_phase_sum(const double* weight, const double* theta, std::size_t n);
}  // namespace avx2

}  // namespace splitcubic::kernels
