#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "splitcubic/kernels.hpp"

using namespace splitcubic;
namespace k = splitcubic::kernels;

namespace {

std::vector<double> random_phases(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernel matches a long double reference") {
  std::mt19937_64 rng(11);
  const auto th = random_phases(rng, 1000, 0.0, 1.0);
  long double re = 0, im = 0;
  for (double t : th) {
    re += cosl(2.0L * std::numbers::pi_v<long double> * t);
    im += sinl(2.0L * std::numbers::pi_v<long double> * t);
  }
  const auto s = k::scalar::phase_sum(th.data(), th.size());
  CHECK(std::abs(s.real() - static_cast<double>(re)) < 1e-12);
  CHECK(std::abs(s.imag() - static_cast<double>(im)) < 1e-12);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::avx2_available()) {
    MESSAGE("AVX2/FMA not available on this CPU; vector path not exercised");
    return;
  }
#if defined(SPLITCUBIC_HAVE_AVX2)
  std::mt19937_64 rng(12);
  // odd lengths cover the scalar tail, wide ranges cover quadrant reduction
  for (std::size_t n : {0UL, 1UL, 3UL, 4UL, 7UL, 64UL, 1001UL, 4096UL}) {
    for (auto [lo, hi] : {std::pair{0.0, 1.0}, std::pair{-5.0, 5.0}, std::pair{-1e6, 1e6}}) {
      const auto th = random_phases(rng, n, lo, hi);
      const auto w = random_phases(rng, n, 0.0, 2.0);
      const auto a = k::scalar::phase_sum(th.data(), n);
      const auto b = k::avx2::phase_sum(th.data(), n);
      // the scalar reference itself loses ~|theta| * 1e-16 forming 2 pi theta
      const double tol = static_cast<double>(n + 1) * (1e-14 + 2e-15 * std::abs(hi));
      CHECK(std::abs(a - b) <= tol);
      const auto c = k::scalar::weighted_phase_sum(w.data(), th.data(), n);
      const auto d = k::avx2::weighted_phase_sum(w.data(), th.data(), n);
      CHECK(std::abs(c - d) <= 2 * tol);
    }
  }
  // quarter turns land exactly on the axes
  std::vector<double> q{0.0, 0.25, 0.5, 0.75};
  const auto s = k::avx2::phase_sum(q.data(), q.size());
  CHECK(std::abs(s) < 1e-15);
#endif
}

TEST_CASE("dispatch reports a consistent ISA") {
  const auto isa = k::active_isa();
  CHECK((isa == k::Isa::scalar || k::avx2_available()));
  CHECK(std::string(k::isa_name(isa)).size() > 0);
  std::vector<double> th{0.125, 0.375};
  const auto s = k::phase_sum(th);
  CHECK(std::abs(s - std::complex<double>(0.0, std::sqrt(2.0))) < 1e-14);
}
