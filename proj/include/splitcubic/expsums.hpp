#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitcubic/forms.hpp"

namespace splitcubic {

// Lattice domain {x in Z^n : |x/P - z|_inf < rho} (strict inequality).
struct BoxRegion {
  std::vector<double> z;
  double rho = 1.0;
  std::int64_t P = 1;

  static BoxRegion centered(int n, double rho, std::int64_t P);

  int n() const { return static_cast<int>(z.size()); }
  std::int64_t lo(int i) const;
  std::int64_t hi(int i) const;
  // Number of integers in coordinate i's range (0 if empty).
  std::int64_t width(int i) const;
  double lattice_points() const;
  std::int64_t max_abs_coordinate() const;
};

// alpha = a/q + beta with gcd(a, q) = 1 and 0 <= a < q. Keeping the rational
// part separate lets phases a*C(x)/q be reduced exactly.
struct RationalArcPoint {
  std::int64_t a = 0;
  std::int64_t q = 1;
  double beta = 0.0;

  static RationalArcPoint from_rational(const Rational& alpha);
  static RationalArcPoint from_real(double alpha);
  double value() const { return static_cast<double>(a) / static_cast<double>(q) + beta; }
};

// Parses "p/q" exactly, otherwise a decimal real.
RationalArcPoint parse_alpha(const std::string& text);

// Reduced phase frac(alpha * c) in [0, 1).
double phase_of(const RationalArcPoint& alpha, std::int64_t c);

struct SumOptions {
  int threads = 1;
  Budget budget = Budget::from_environment();
};

// S(alpha) = sum over the box lattice of e(alpha C(x)), factorized over the
// split blocks of C.
std::complex<double> weyl_sum(const CubicForm& form, const BoxRegion& box, const RationalArcPoint& alpha,
                              const SumOptions& opt = {});

// w(x) = exp(-1/(1-x^2)) for |x| < 1, else 0.
double bump_weight(double x);

// T(alpha) = sum_x w(x / (rho P)) e(alpha coeff x^3).
std::complex<double> weighted_sum(std::int64_t coeff, std::int64_t P, double rho, const RationalArcPoint& alpha,
                                  const SumOptions& opt = {});

// H(r) = #{y mod q : C(y) = r mod q}, built per split block and combined by
// cyclic convolution.
std::vector<std::uint64_t> residue_histogram(const CubicForm& form, std::int64_t q,
                                             const Budget& budget = Budget::from_environment());

// S_{a,q} = sum over y mod q of e(a C(y) / q).
std::complex<double> complete_sum(const CubicForm& form, std::int64_t a, std::int64_t q,
                                  const Budget& budget = Budget::from_environment());

struct SingularSeriesReport {
  int q_max = 0;
  double value = 0;                  // partial sum up to q_max
  std::vector<double> blocks;        // A(q) = sum_{(a,q)=1} q^-n S_{a,q}, index q-1
  std::vector<double> partial_sums;  // index q-1
  double fitted_decay = 0;           // least-squares slope of log|A(q)| against log q
  double reference_decay = 0;        // 5n/6 + 1 - n
  std::optional<double> tail_estimate;  // from the fitted envelope when it is summable
};

// Blocks are computed exactly from the residue histogram of C mod q and
// Ramanujan sums, then converted to double.
SingularSeriesReport singular_series(const CubicForm& form, int q_max,
                                     const Budget& budget = Budget::from_environment());

// A(q) by direct summation of complete sums over reduced residues; used as a
// cross-check of the histogram path.
double singular_series_block_direct(const CubicForm& form, std::int64_t q,
                                    const Budget& budget = Budget::from_environment());

struct SingularIntegralOptions {
  double b_max = 50;
  int nodes_per_oscillation = 2;  // spatial quadrature resolution multiplier
  std::uint64_t seed = 0;
  bool seed_set = false;          // the Monte Carlo cross-check needs an explicit seed
  std::uint64_t samples = 2'000'000;
  double eta = 0;                 // 0 picks a default window from the form's range on the box
  bool require_nonsingular_center = true;
  Budget budget = Budget::from_environment();
};

struct SingularIntegralReport {
  // The truncated integral J(B) = 2 int_0^B Re I(beta) d beta converges like
  // 1/B (edges of the box make the value density kinked), so the reported
  // value is the Richardson combination 2 J(B) - J(B/2).
  double value = 0;
  double value_truncated = 0;   // J(B)
  double value_half_range = 0;  // J(B/2)
  double tail_bound = 0;       // |I(B)| based tail estimate
  bool converged = false;
  double mc_density = 0;       // vol{|C| < eta} / (2 eta)
  double mc_stderr = 0;
  double eta = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double relative_gap = 0;     // |value - mc_density| / value
  std::size_t beta_nodes = 0;
  double center_value = 0;     // C(z)
  double center_gradient = 0;  // sup norm of grad C(z)
};

// J = int I(beta) d beta with I(beta) = int_{|zeta - z| < rho} e(beta C(zeta)) d zeta.
// The centre must be a nonsingular real zero of C.
SingularIntegralReport singular_integral(const CubicForm& form, const std::vector<double>& z, double rho,
                                         const SingularIntegralOptions& opt);

// Real nonsingular zero found by sign-change bisection on seeded random
// lines; throws PreconditionError for forms with no sign change (definite).
std::vector<double> find_real_center(const CubicForm& form, std::uint64_t seed, double radius = 1.0);

struct MomentResult {
  int k = 0;
  std::int64_t P = 0;
  BigInt count_value;
  std::string note;
};

// Number of solutions of C(x_1)+...+C(x_{k/2}) = C(y_1)+...+C(y_{k/2}) with
// every x_i, y_i in [1, P]^dim, which equals the integral of |S|^k over [0,1].
MomentResult moment_by_counting(const CubicForm& form, int k, std::int64_t P,
                                const Budget& budget = Budget::from_environment());

struct ArcClass {
  bool major = false;
  RationalArcPoint point;  // meaningful when major
};

// Major when some q <= P^Delta has |alpha - a/q| <= P^{-3+Delta}; returns the
// representation with the least q.
ArcClass arc_classify(double alpha, std::int64_t P, const Rational& Delta);

// S*(alpha) = q^-1 P S_{a,q} I(beta P^3) for the one-variable form c x^3,
// where I(gamma) = int over (z - rho, z + rho) of e(gamma c t^3) dt.
std::complex<double> sstar(std::int64_t a, std::int64_t q, double beta, std::int64_t coeff, std::int64_t P,
                           double z = 0.0, double rho = 1.0);

}  // namespace splitcubic
