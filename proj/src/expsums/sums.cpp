#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "detail.hpp"
#include "splitcubic/expsums.hpp"
#include "splitcubic/kernels.hpp"

namespace splitcubic {

namespace {

std::complex<double> block_sum(const CubicForm& sub, const std::vector<std::int64_t>& lo,
                               const std::vector<std::int64_t>& width, const RationalArcPoint& alpha, int threads) {
  std::uint64_t total = 1;
  for (auto w : width) total *= static_cast<std::uint64_t>(w);
  if (total == 0) return {0.0, 0.0};
  if (sub.is_zero()) return {static_cast<double>(total), 0.0};
  const CompiledForm cf(sub);
  const std::size_t chunks = (total + detail::kChunk - 1) / detail::kChunk;
  return detail::chunked_reduce(chunks, threads, [&](std::size_t c) {
    std::array<double, detail::kChunk> phase;
    detail::Odometer od{lo, width, {}};
    const std::uint64_t start = c * detail::kChunk;
    const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(detail::kChunk, total - start));
    od.seek(start);
    for (std::size_t i = 0; i < len; ++i, od.next()) phase[i] = phase_of(alpha, cf(od.x.data()));
    return kernels::phase_sum(std::span<const double>(phase.data(), len));
  });
}

}  // namespace

std::complex<double> weyl_sum(const CubicForm& form, const BoxRegion& box, const RationalArcPoint& alpha,
                              const SumOptions& opt) {
  if (box.n() != form.n()) throw PreconditionError("box dimension does not match the form");
  if (alpha.q < 1 || (alpha.q > 1 && std::gcd(alpha.a, alpha.q) != 1) || alpha.a < 0 || alpha.a >= alpha.q)
    throw PreconditionError("alpha needs 0 <= a < q with gcd(a, q) = 1");
  if (!CompiledForm(form).safe_for_height(static_cast<double>(box.max_abs_coordinate())))
    throw PreconditionError("form values on this box overflow 64-bit evaluation");
  const SplitStructure split = split_components(form);
  double needed = 0;
  for (std::size_t b = 0; b < split.blocks.size(); ++b) {
    if (split.subforms[b].is_zero()) continue;
    double t = 1;
    for (int v : split.blocks[b]) t *= static_cast<double>(box.width(v));
    needed += t;
  }
  opt.budget.require_points(needed, "weyl_sum");
  std::complex<double> result{1.0, 0.0};
  for (std::size_t b = 0; b < split.blocks.size(); ++b) {
    std::vector<std::int64_t> lo, width;
    for (int v : split.blocks[b]) {
      lo.push_back(box.lo(v));
      width.push_back(box.width(v));
    }
    result *= block_sum(split.subforms[b], lo, width, alpha, opt.threads);
  }
  add_points_consumed(static_cast<std::uint64_t>(needed));
  return result;
}

double bump_weight(double x) {
  if (!(std::abs(x) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

std::complex<double> weighted_sum(std::int64_t coeff, std::int64_t P, double rho, const RationalArcPoint& alpha,
                                  const SumOptions& opt) {
  if (coeff == 0) throw PreconditionError("weighted_sum needs a nonzero coefficient");
  if (P < 1 || !(rho > 0)) throw PreconditionError("weighted_sum needs P >= 1 and rho > 0");
  const double scale = rho * static_cast<double>(P);
  const auto xmax = static_cast<std::int64_t>(std::ceil(scale));
  const double cube_bound = std::abs(static_cast<double>(coeff)) * std::pow(static_cast<double>(xmax), 3);
  if (cube_bound > 4.0e18) throw PreconditionError("weighted_sum: coeff * (rho P)^3 overflows 64-bit evaluation");
  const auto total = static_cast<std::uint64_t>(2 * xmax + 1);
  opt.budget.require_points(static_cast<double>(total), "weighted_sum");
  const std::size_t chunks = (total + detail::kChunk - 1) / detail::kChunk;
  auto r = detail::chunked_reduce(chunks, opt.threads, [&](std::size_t c) {
    std::array<double, detail::kChunk> phase, weight;
    const std::uint64_t start = c * detail::kChunk;
    const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(detail::kChunk, total - start));
    for (std::size_t i = 0; i < len; ++i) {
      const std::int64_t x = -xmax + static_cast<std::int64_t>(start + i);
      weight[i] = bump_weight(static_cast<double>(x) / scale);
      phase[i] = phase_of(alpha, coeff * x * x * x);
    }
    return kernels::weighted_phase_sum(std::span<const double>(weight.data(), len),
                                       std::span<const double>(phase.data(), len));
  });
  add_points_consumed(total);
  return r;
}

std::complex<double> sstar(std::int64_t a, std::int64_t q, double beta, std::int64_t coeff, std::int64_t P, double z,
                           double rho) {
  if (q < 1 || std::gcd(a, q) != 1) throw PreconditionError("sstar needs gcd(a, q) = 1");
  if (coeff == 0) throw PreconditionError("sstar needs a nonzero coefficient");
  if (P < 1 || !(rho > 0)) throw PreconditionError("sstar needs P >= 1 and rho > 0");
  CubicForm one(1);
  one.add_term(0, 0, 0, BigInt(static_cast<long>(coeff)));
  const std::complex<double> saq = complete_sum(one, a, q);

  const double p = static_cast<double>(P);
  const double gamma = beta * p * p * p * static_cast<double>(coeff);
  const double lo = z - rho, hi = z + rho;
  // split into pieces carrying at most about one oscillation each
  const double grad = 3.0 * std::max(lo * lo, hi * hi);
  const auto pieces = static_cast<int>(std::ceil(std::abs(gamma) * grad * (hi - lo))) + 1;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double re = 0, im = 0;
  for (int k = 0; k < pieces; ++k) {
    const double a0 = lo + (hi - lo) * k / pieces;
    const double a1 = lo + (hi - lo) * (k + 1) / pieces;
    re += GK::integrate([&](double t) { return std::cos(2 * std::numbers::pi * gamma * t * t * t); }, a0, a1, 15, 1e-13);
    im += GK::integrate([&](double t) { return std::sin(2 * std::numbers::pi * gamma * t * t * t); }, a0, a1, 15, 1e-13);
  }
  return saq * (p / static_cast<double>(q)) * std::complex<double>(re, im);
}

}  // namespace splitcubic
