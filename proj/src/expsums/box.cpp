#include <cmath>
#include <limits>
#include <numeric>

#include "detail.hpp"
#include "splitcubic/expsums.hpp"

namespace splitcubic {

BoxRegion BoxRegion::centered(int n, double rho, std::int64_t P) {
  if (n < 0) throw PreconditionError("box dimension must be non-negative");
  BoxRegion b;
  b.z.assign(static_cast<std::size_t>(n), 0.0);
  b.rho = rho;
  b.P = P;
  return b;
}

// Strict inequality |x/P - z| < rho: the integers inside the open interval
// (P(z - rho), P(z + rho)).
std::int64_t BoxRegion::lo(int i) const {
  if (!(rho > 0) || P < 1) throw PreconditionError("box needs rho > 0 and P >= 1");
  return static_cast<std::int64_t>(std::floor(static_cast<double>(P) * (z.at(i) - rho))) + 1;
}

std::int64_t BoxRegion::hi(int i) const {
  if (!(rho > 0) || P < 1) throw PreconditionError("box needs rho > 0 and P >= 1");
  return static_cast<std::int64_t>(std::ceil(static_cast<double>(P) * (z.at(i) + rho))) - 1;
}

std::int64_t BoxRegion::width(int i) const { return std::max<std::int64_t>(0, hi(i) - lo(i) + 1); }

double BoxRegion::lattice_points() const {
  double t = 1.0;
  for (int i = 0; i < n(); ++i) t *= static_cast<double>(width(i));
  return t;
}

std::int64_t BoxRegion::max_abs_coordinate() const {
  std::int64_t m = 0;
  for (int i = 0; i < n(); ++i) m = std::max({m, std::abs(lo(i)), std::abs(hi(i))});
  return m;
}

RationalArcPoint RationalArcPoint::from_rational(const Rational& alpha) {
  Rational a = alpha;
  a.canonicalize();
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  Rational frac = a - Rational(fl);
  frac.canonicalize();
  if (!frac.get_den().fits_slong_p()) throw PreconditionError("denominator of alpha exceeds 64 bits");
  RationalArcPoint r;
  r.a = frac.get_num().get_si();
  r.q = frac.get_den().get_si();
  return r;
}

RationalArcPoint RationalArcPoint::from_real(double alpha) {
  if (!std::isfinite(alpha)) throw PreconditionError("alpha must be finite");
  RationalArcPoint r;
  r.beta = alpha - std::floor(alpha);
  if (r.beta >= 1.0) r.beta = 0.0;
  return r;
}

RationalArcPoint parse_alpha(const std::string& text) {
  if (text.find('/') != std::string::npos) return RationalArcPoint::from_rational(parse_rational(text));
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw PreconditionError("cannot parse alpha '" + text + "'");
  }
  if (used != text.size()) throw PreconditionError("cannot parse alpha '" + text + "'");
  return RationalArcPoint::from_real(v);
}

double phase_of(const RationalArcPoint& alpha, std::int64_t c) {
  double rational_part = 0.0;
  if (alpha.q > 1) {
    __int128 r = static_cast<__int128>(alpha.a) * c % alpha.q;
    if (r < 0) r += alpha.q;
    rational_part = static_cast<double>(static_cast<std::int64_t>(r)) / static_cast<double>(alpha.q);
  }
  if (alpha.beta == 0.0) return rational_part;
  double f = rational_part + detail::frac_product(alpha.beta, static_cast<double>(c));
  if (f >= 1.0) f -= 1.0;
  return f;
}

ArcClass arc_classify(double alpha, std::int64_t P, const Rational& Delta) {
  if (!std::isfinite(alpha) || alpha < 0 || alpha >= 1) throw PreconditionError("arc_classify needs alpha in [0,1)");
  if (P < 1) throw PreconditionError("arc_classify needs P >= 1");
  if (Delta < 0) throw PreconditionError("arc_classify needs Delta >= 0");
  const double d = Delta.get_d();
  const double logp = std::log(static_cast<double>(P));
  // a tiny relative slack keeps exact boundary cases such as q = P^Delta inside
  const auto q_max = static_cast<std::int64_t>(std::floor(std::exp(d * logp) * (1 + 1e-12)));
  const double tol = std::exp((d - 3.0) * logp) * (1 + 1e-12);
  if (q_max > 100'000'000) throw BudgetExceeded("arc_classify: P^Delta exceeds 1e8 denominators");
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const double a = std::nearbyint(alpha * static_cast<double>(q));
    const double beta = alpha - a / static_cast<double>(q);
    if (std::abs(beta) > tol) continue;
    auto ai = static_cast<std::int64_t>(a) % q;
    if (std::gcd(ai, q) != 1 && q > 1) continue;
    ArcClass c;
    c.major = true;
    c.point.a = ai;
    c.point.q = q;
    c.point.beta = beta;
    return c;
  }
  return {};
}

}  // namespace splitcubic
