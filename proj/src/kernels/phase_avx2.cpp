// Compiled with -mavx2 -mfma; reached only through the runtime dispatch.
#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "splitcubic/kernels.hpp"

namespace splitcubic::kernels::avx2 {

namespace {

// Taylor coefficients of sin and cos on |y| <= pi/4; truncation < 1e-19.
constexpr double kSin[] = {1.0,
                           -1.0 / 6,
                           1.0 / 120,
                           -1.0 / 5040,
                           1.0 / 362880,
                           -1.0 / 39916800,
                           1.0 / 6227020800,
                           -1.0 / 1307674368000,
                           1.0 / 355687428096000};
constexpr double kCos[] = {1.0,
                           -1.0 / 2,
                           1.0 / 24,
                           -1.0 / 720,
                           1.0 / 40320,
                           -1.0 / 3628800,
                           1.0 / 479001600,
                           -1.0 / 87178291200,
                           1.0 / 20922789888000,
                           -1.0 / 6402373705728000};

struct SinCos {
  __m256d s, c;
};

inline SinCos sincos_turns(__m256d theta) {
  // theta turns = k quarter turns + f, f in [-1/2, 1/2] quarter turns
  const __m256d x = _mm256_mul_pd(theta, _mm256_set1_pd(4.0));
  const __m256d k = _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d y = _mm256_mul_pd(_mm256_sub_pd(x, k), _mm256_set1_pd(std::numbers::pi / 2));
  const __m256d y2 = _mm256_mul_pd(y, y);

  __m256d ps = _mm256_set1_pd(kSin[8]);
  for (int i = 7; i >= 0; --i) ps = _mm256_fmadd_pd(ps, y2, _mm256_set1_pd(kSin[i]));
  const __m256d s = _mm256_mul_pd(ps, y);
  __m256d pc = _mm256_set1_pd(kCos[9]);
  for (int i = 8; i >= 0; --i) pc = _mm256_fmadd_pd(pc, y2, _mm256_set1_pd(kCos[i]));

  const __m128i q32 = _mm_and_si128(_mm256_cvtpd_epi32(k), _mm_set1_epi32(3));
  const __m256i q = _mm256_cvtepi32_epi64(q32);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(1)),
                                                              _mm256_set1_epi64x(1)));
  // cos(y + q pi/2) is negative-signed for q in {1, 2}; sin for q in {2, 3}
  const __m256i one = _mm256_set1_epi64x(1), two = _mm256_set1_epi64x(2), three = _mm256_set1_epi64x(3);
  const __m256d neg_c = _mm256_castsi256_pd(_mm256_or_si256(_mm256_cmpeq_epi64(q, one), _mm256_cmpeq_epi64(q, two)));
  const __m256d neg_s = _mm256_castsi256_pd(_mm256_or_si256(_mm256_cmpeq_epi64(q, two), _mm256_cmpeq_epi64(q, three)));
  __m256d c_out = _mm256_blendv_pd(pc, s, swap);
  __m256d s_out = _mm256_blendv_pd(s, pc, swap);
  const __m256d sign = _mm256_set1_pd(-0.0);
  c_out = _mm256_xor_pd(c_out, _mm256_and_pd(neg_c, sign));
  s_out = _mm256_xor_pd(s_out, _mm256_and_pd(neg_s, sign));
  return {s_out, c_out};
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::complex<double> phase_sum(const double* theta, std::size_t n) {
  __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const SinCos sc = sincos_turns(_mm256_loadu_pd(theta + i));
    re = _mm256_add_pd(re, sc.c);
    im = _mm256_add_pd(im, sc.s);
  }
  double r = hsum(re), m = hsum(im);
  for (; i < n; ++i) {
    const double a = 2 * std::numbers::pi * theta[i];
    r += std::cos(a);
    m += std::sin(a);
  }
  return {r, m};
}

std::complex<double> weighted_phase_sum(const double* weight, const double* theta, std::size_t n) {
  __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const SinCos sc = sincos_turns(_mm256_loadu_pd(theta + i));
    const __m256d w = _mm256_loadu_pd(weight + i);
    re = _mm256_fmadd_pd(w, sc.c, re);
    im = _mm256_fmadd_pd(w, sc.s, im);
  }
  double r = hsum(re), m = hsum(im);
  for (; i < n; ++i) {
    const double a = 2 * std::numbers::pi * theta[i];
    r += weight[i] * std::cos(a);
    m += weight[i] * std::sin(a);
  }
  return {r, m};
}

}  // namespace splitcubic::kernels::avx2
