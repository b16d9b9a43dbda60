#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "splitcubic/expsums.hpp"

using namespace splitcubic;

namespace {

CubicForm diagonal(std::initializer_list<long> coeffs) {
  CubicForm f(static_cast<int>(coeffs.size()));
  int i = 0;
  for (long c : coeffs) {
    f.add_term(i, i, i, c);
    ++i;
  }
  return f;
}

long long value_ll(const CubicForm& f, const std::vector<long>& x) {
  long long s = 0;
  for (const auto& [t, c] : f.terms()) s += c.get_si() * x[t[0]] * x[t[1]] * x[t[2]];
  return s;
}

// Direct box sum at alpha = a/q with exact phase reduction.
std::complex<long double> oracle_weyl(const CubicForm& f, long lo, long hi, long long a, long long q) {
  std::vector<long long> num;
  oracle::for_each_point(f.n(), lo, hi, [&](const std::vector<long>& x) { num.push_back(a * value_ll(f, x)); });
  return oracle::rational_phase_sum(num, q);
}

std::complex<long double> oracle_complete(const CubicForm& f, long long a, long long q) {
  std::vector<long long> num;
  oracle::for_each_point(f.n(), 0, q - 1, [&](const std::vector<long>& x) { num.push_back(a * (value_ll(f, x) % q)); });
  return oracle::rational_phase_sum(num, q);
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

RationalArcPoint rational(long a, long q) { return RationalArcPoint::from_rational(Rational(a, q)); }

}  // namespace

TEST_CASE("box lattice uses the strict inequality") {
  const auto b = BoxRegion::centered(1, 1.0, 10);
  CHECK(b.lo(0) == -9);
  CHECK(b.hi(0) == 9);
  BoxRegion c{{0.5}, 0.125, 8};
  CHECK(c.lo(0) == 4);  // 8 * 0.375 = 3 is excluded
  CHECK(c.hi(0) == 4);  // 8 * 0.625 = 5 is excluded
  CHECK(c.lattice_points() == 1);
}

TEST_CASE("weyl_sum trivial values and the parity example") {
  const auto cube = diagonal({1});
  const auto box = BoxRegion::centered(1, 1.0, 10);
  CHECK(weyl_sum(cube, box, rational(0, 1)) == std::complex<double>(19, 0));
  CHECK(std::abs(weyl_sum(cube, box, RationalArcPoint::from_real(1.0)) - 19.0) < 1e-12);
  // -9..9 holds nine even and ten odd integers, so the parity sum is -1
  const auto half = weyl_sum(cube, box, rational(1, 2));
  CHECK(std::abs(half - std::complex<double>(-1, 0)) < 1e-12);
  CHECK(std::abs(half - std::complex<double>(oracle_weyl(cube, -9, 9, 1, 2))) < 1e-12);
  auto f3 = diagonal({1, 1, 1});
  CHECK(weyl_sum(f3, BoxRegion::centered(3, 1.0, 4), rational(0, 1)).real() == 343);
}

TEST_CASE("weyl_sum matches direct summation on random split and unsplit forms") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const bool split = trial % 2 == 0;
    const CubicForm f = split ? testing::random_split_form(rng, {1, 2}, 2, 4) : testing::random_form(rng, 3, 4, 4);
    const long P = testing::uniform_int(rng, 2, 5);
    const long long q = testing::uniform_int(rng, 2, 40);
    long long a = testing::uniform_int(rng, 1, q - 1);
    while (std::gcd(a, q) != 1) a = testing::uniform_int(rng, 1, q - 1);
    const auto got = weyl_sum(f, BoxRegion::centered(3, 1.0, P), rational(a, q));
    const auto want = std::complex<double>(oracle_weyl(f, -(P - 1), P - 1, a, q));
    CHECK(std::abs(got - want) < 1e-10);
    CHECK(std::abs(got) <= std::pow(2.0 * P - 1, 3) + 1e-9);
  }
}

TEST_CASE("orthogonality recovers the exact zero count") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 10; ++trial) {
    const CubicForm f = testing::random_form(rng, 3, 3, 3);
    const long P = 3;
    const auto box = BoxRegion::centered(3, 1.0, P);
    const long long M = 2 * static_cast<long long>(CompiledForm(f).value_bound(P - 1)) + 1;
    std::complex<double> s{0, 0};
    for (long long m = 0; m < M; ++m)
      s += weyl_sum(f, box, m == 0 ? rational(0, 1) : rational(m, M));
    std::uint64_t zeros = 0;
    oracle::for_each_point(3, -(P - 1), P - 1, [&](const std::vector<long>& x) { zeros += value_ll(f, x) == 0; });
    CHECK(std::abs(s.real() / M - static_cast<double>(zeros)) < 1e-8);
    CHECK(std::abs(s.imag() / M) < 1e-8);
  }
}

TEST_CASE("conjugation symmetry and thread-count determinism") {
  std::mt19937_64 rng(103);
  const CubicForm f = testing::random_split_form(rng, {1, 1, 2}, 2, 5);
  const auto box = BoxRegion::centered(4, 1.0, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 10; ++s) {
    const double a = u(rng);
    const auto x = weyl_sum(f, box, RationalArcPoint::from_real(a));
    const auto y = weyl_sum(f, box, RationalArcPoint::from_real(1.0 - a));
    CHECK(std::abs(x - std::conj(y)) < 1e-6 * (1 + std::abs(x)));
  }
  SumOptions one, four;
  four.threads = 4;
  const BoxRegion big = BoxRegion::centered(1, 1.0, 50000);
  const auto alpha = RationalArcPoint::from_real(0.123456789);
  const auto s1 = weyl_sum(diagonal({3}), big, alpha, one);
  const auto s4 = weyl_sum(diagonal({3}), big, alpha, four);
  CHECK(s1.real() == s4.real());
  CHECK(s1.imag() == s4.imag());
}

TEST_CASE("weighted_sum positivity, symmetry and high-precision oracle") {
  const std::int64_t P = 100;
  const auto t0 = weighted_sum(1, P, 1.0, rational(0, 1));
  CHECK(t0.imag() == 0);
  CHECK(t0.real() > std::exp(-4.0 / 3.0) * (P - 1));
  CHECK(t0.real() < 2.0 * P + 1);

  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 10; ++s) {
    const double a = u(rng);
    const auto x = weighted_sum(2, 60, 0.7, RationalArcPoint::from_real(a));
    const auto y = weighted_sum(2, 60, 0.7, RationalArcPoint::from_real(-a));
    CHECK(std::abs(x - std::conj(y)) < 1e-9);
  }

  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double re = 0, im = 0;
  for (long x = -P; x <= P; ++x) {
    const long double t = static_cast<long double>(x) / P;
    if (fabsl(t) >= 1) continue;
    const long double w = expl(-1.0L / (1.0L - t * t));
    long long r = (x * x * x) % 4;
    if (r < 0) r += 4;
    re += w * cosl(two_pi * r / 4);
    im += w * sinl(two_pi * r / 4);
  }
  const auto got = weighted_sum(1, P, 1.0, rational(1, 4));
  CHECK(std::abs(got.real() - static_cast<double>(re)) < 1e-10);
  CHECK(std::abs(got.imag() - static_cast<double>(im)) < 1e-10);
}

TEST_CASE("complete sums: examples, oracle, bound and CRT") {
  CHECK(complete_sum(diagonal({1, 2}), 0, 1) == std::complex<double>(1, 0));
  CHECK(std::abs(complete_sum(diagonal({1}), 1, 2)) < 1e-15);
  CHECK(std::abs(complete_sum(diagonal({1}), 1, 3)) < 1e-15);
  CHECK_THROWS_AS(complete_sum(diagonal({1}), 2, 4), PreconditionError);

  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 20; ++trial) {
    const CubicForm f = testing::random_form(rng, 3, 4, 6);
    const long long q = testing::uniform_int(rng, 2, 15);
    long long a = testing::uniform_int(rng, 1, q - 1);
    while (std::gcd(a, q) != 1) a = testing::uniform_int(rng, 1, q - 1);
    const auto got = complete_sum(f, a, q);
    CHECK(std::abs(got - std::complex<double>(oracle_complete(f, a, q))) < 1e-9);
    CHECK(std::abs(got) <= std::pow(static_cast<double>(q), 3) + 1e-9);
  }

  // S_{a, q1 q2} = S_{a q2^2, q1} S_{a q1^2, q2}
  for (const CubicForm& f : {diagonal({1, 2, -3}), testing::random_form(rng, 3, 5, 5)}) {
    for (auto [q1, q2] : {std::pair{3L, 4L}, std::pair{5L, 7L}, std::pair{8L, 9L}}) {
      for (long a = 1; a < q1 * q2; a += 5) {
        if (std::gcd(a, q1 * q2) != 1) continue;
        const auto lhs = complete_sum(f, a, q1 * q2);
        const auto rhs = complete_sum(f, a * q2 * q2 % q1, q1) * complete_sum(f, a * q1 * q1 % q2, q2);
        CHECK(std::abs(lhs - rhs) < 1e-9);
      }
    }
  }
}

TEST_CASE("singular series blocks") {
  const auto f4 = diagonal({1, 1, 1, 1});
  CHECK(singular_series(f4, 1).value == 1.0);

  // prime q, diagonal form: block is a sum over a of products of 1-variable sums
  const auto f3 = diagonal({1, 2, 5});
  for (long p : {2L, 3L, 7L, 11L, 13L}) {
    std::complex<long double> s{0, 0};
    for (long a = 1; a < p; ++a) {
      std::complex<long double> prod{1, 0};
      for (long c : {1L, 2L, 5L}) prod *= oracle_complete(diagonal({c}), a, p);
      s += prod;
    }
    const double want = static_cast<double>(s.real()) / std::pow(static_cast<double>(p), 3);
    const auto rep = singular_series(f3, static_cast<int>(p));
    CHECK(std::abs(rep.blocks[static_cast<std::size_t>(p - 1)] - want) < 1e-12);
  }

  // histogram route against direct complete sums, all q
  std::mt19937_64 rng(106);
  const CubicForm g = testing::random_split_form(rng, {2, 1}, 3, 4);
  const auto rep = singular_series(g, 12);
  for (int q = 1; q <= 12; ++q)
    CHECK(std::abs(rep.blocks[static_cast<std::size_t>(q - 1)] - singular_series_block_direct(g, q)) < 1e-9);

  const auto r20 = singular_series(f4, 20);
  const auto r15 = singular_series(f4, 15);
  CHECK(r20.value > 0);
  CHECK(r15.value > 0);
  CHECK(std::isfinite(r20.fitted_decay));
  CHECK(r20.reference_decay == doctest::Approx(1.0 - 4.0 / 6.0));
  MESSAGE("four cubes: S(15) = " << r15.value << ", S(20) = " << r20.value << ", fitted decay "
                                 << r20.fitted_decay);
}

TEST_CASE("singular integral for x1^3 + x2^3 near (1/2, -1/2)") {
  const auto f = diagonal({1, 1});
  SingularIntegralOptions opt;
  opt.seed = 7;
  opt.seed_set = true;
  const auto rep = singular_integral(f, {0.5, -0.5}, 0.125, opt);
  // the zero set in the box is zeta2 = -zeta1 with zeta1 in (3/8, 5/8); the
  // density is the integral of 1 / |dC/dzeta2| = 1 / (3 zeta1^2) along it
  const double exact = 16.0 / 45.0;
  CHECK(rep.value > 0);
  CHECK(std::abs(rep.value - exact) < 2e-3);
  CHECK(rep.relative_gap < 0.05);
  CHECK(rep.converged);

  SingularIntegralOptions opt2 = opt;
  const auto scaled = singular_integral(f.scaled(3), {0.5, -0.5}, 0.125, opt2);
  CHECK(std::abs(scaled.value - rep.value / 3) < 1e-3);
  // the window shrinks with the form, so the same samples are counted
  opt2.eta = rep.eta * 3;
  const auto scaled_mc = singular_integral(f.scaled(3), {0.5, -0.5}, 0.125, opt2);
  CHECK(scaled_mc.mc_density == doctest::Approx(rep.mc_density / 3).epsilon(1e-12));

  CHECK_THROWS_AS(singular_integral(f, {0.0, 0.0}, 0.125, opt), PreconditionError);
  SingularIntegralOptions unseeded;
  CHECK_THROWS_AS(singular_integral(f, {0.5, -0.5}, 0.125, unseeded), PreconditionError);
}

TEST_CASE("real center finder returns nonsingular zeros") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 5; ++trial) {
    const CubicForm f = testing::random_form(rng, 4, 5, 5);
    if (f.is_zero()) continue;
    const auto z = find_real_center(f, 1000 + trial);
    double v = 0, sup = 0;
    for (const auto& [t, c] : f.terms()) v += c.get_d() * z[t[0]] * z[t[1]] * z[t[2]];
    for (double x : z) sup = std::max(sup, std::abs(x));
    CHECK(std::abs(v) < 1e-9 * f.coefficient_l1().get_d());
    CHECK(sup == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(find_real_center(CubicForm(3), 1), PreconditionError);
}

TEST_CASE("moments by counting") {
  const auto cube = diagonal({1});
  CHECK(moment_by_counting(cube, 2, 37).count_value == 37);
  CHECK(moment_by_counting(cube, 4, 10).count_value == 190);
  CHECK(moment_by_counting(cube, 4, 12).count_value == 284);
  CHECK(moment_by_counting(cube, 4, 10).count_value == oracle::quadruple_count(10, 1));
  CHECK(moment_by_counting(cube, 4, 12).count_value == oracle::quadruple_count(12, 1));
  CHECK_THROWS_AS(moment_by_counting(cube, 3, 10), PreconditionError);
  for (long c : {-3L, 2L, 7L}) CHECK(moment_by_counting(diagonal({c}), 2, 20).count_value == 20);

  // count equals the k-th moment via discrete orthogonality
  CubicForm two(2);
  two.add_term(0, 0, 0, 1);
  two.add_term(0, 1, 1, 2);
  const std::int64_t P = 4;
  const auto mr = moment_by_counting(two, 4, P);
  std::uint64_t brute = 0;
  oracle::for_each_point(8, 1, P, [&](const std::vector<long>& x) {
    auto v = [&](long a, long b) { return a * a * a + 2 * a * b * b; };
    brute += v(x[0], x[1]) + v(x[2], x[3]) == v(x[4], x[5]) + v(x[6], x[7]);
  });
  CHECK(mr.count_value == brute);
  const long long M = 4 * (P * P * P + 2 * P * P * P) + 1;
  BoxRegion box{{0.5 * (1 + P) / P, 0.5 * (1 + P) / P}, 0.5 * (P + 1) / P, P};
  CHECK(box.lo(0) == 1);
  CHECK(box.hi(0) == P);
  double integral = 0;
  for (long long m = 0; m < M; ++m)
    integral += std::pow(std::abs(weyl_sum(two, box, m == 0 ? rational(0, 1) : rational(m, M))), 4);
  CHECK(integral / M == doctest::Approx(mr.count_value.get_d()).epsilon(1e-9));
}

TEST_CASE("Hua moment slopes for x^3") {
  const auto cube = diagonal({1});
  std::vector<double> lx, l4, lx8, l8;
  for (std::int64_t P : {64, 128, 256, 512}) {
    lx.push_back(std::log(static_cast<double>(P)));
    l4.push_back(std::log(moment_by_counting(cube, 4, P).count_value.get_d()));
  }
  const double s4 = fitted_slope(lx, l4);
  MESSAGE("4th moment slope " << s4);
  CHECK(s4 <= 2.2);
  for (std::int64_t P : {32, 64, 128, 256}) {
    lx8.push_back(std::log(static_cast<double>(P)));
    l8.push_back(std::log(moment_by_counting(cube, 8, P).count_value.get_d()));
  }
  const double s8 = fitted_slope(lx8, l8);
  MESSAGE("8th moment slope " << s8);
  CHECK(s8 <= 5.3);
}

TEST_CASE("arc classification") {
  const Rational d(1, 5);
  const auto zero = arc_classify(0.0, 100, d);
  CHECK(zero.major);
  CHECK(zero.point.a == 0);
  CHECK(zero.point.q == 1);
  const auto half = arc_classify(0.5, 100, d);
  CHECK(half.major);
  CHECK(half.point.q == 2);
  CHECK(half.point.a == 1);
  CHECK(half.point.beta == 0.0);
  CHECK_FALSE(arc_classify(std::sqrt(2.0) - 1, 100, d).major);
  // least denominator wins
  const auto near = arc_classify(1.0 / 3 + 1e-9, 1000, Rational(1, 2));
  CHECK(near.major);
  CHECK(near.point.q == 3);
  CHECK_THROWS_AS(arc_classify(1.0, 100, d), PreconditionError);
}

TEST_CASE("sstar basics") {
  const std::int64_t P = 200;
  const auto s0 = sstar(0, 1, 0.0, 1, P);
  const auto w0 = weyl_sum(diagonal({1}), BoxRegion::centered(1, 1.0, P), rational(0, 1));
  CHECK(std::abs(s0.real() - 2.0 * P) < 1e-9);
  CHECK(std::abs(s0 - w0) <= 2.0);
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(-1e-6, 1e-6);
  for (auto [a, q] : {std::pair{1L, 3L}, std::pair{2L, 7L}, std::pair{5L, 9L}}) {
    const double b = u(rng);
    CHECK(std::abs(sstar(q - a, q, -b, 1, P) - std::conj(sstar(a, q, b, 1, P))) < 1e-9);
  }
}
