#include <cmath>
#include <numbers>
#include <numeric>

#include "detail.hpp"
#include "splitcubic/expsums.hpp"

namespace splitcubic {

namespace {

std::vector<std::uint64_t> block_histogram(const CubicForm& sub, int dim, std::int64_t q) {
  std::vector<std::uint64_t> h(static_cast<std::size_t>(q), 0);
  std::uint64_t total = checked_pow(static_cast<std::uint64_t>(q), static_cast<unsigned>(dim));
  if (sub.is_zero()) {
    h[0] = total;
    return h;
  }
  const CompiledForm cf(sub);
  detail::Odometer od{std::vector<std::int64_t>(dim, 0), std::vector<std::int64_t>(dim, q), {}};
  od.seek(0);
  for (std::uint64_t i = 0; i < total; ++i, od.next()) {
    std::int64_t r = cf(od.x.data()) % q;
    if (r < 0) r += q;
    ++h[static_cast<std::size_t>(r)];
  }
  return h;
}

std::vector<std::uint64_t> cyclic_convolve(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  const std::size_t q = a.size();
  std::vector<std::uint64_t> c(q, 0);
  for (std::size_t i = 0; i < q; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < q; ++j) {
      if (b[j] == 0) continue;
      std::size_t k = i + j;
      if (k >= q) k -= q;
      c[k] += a[i] * b[j];
    }
  }
  return c;
}

int mobius(std::int64_t m) {
  int mu = 1;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    m /= p;
    if (m % p == 0) return 0;
    mu = -mu;
  }
  if (m > 1) mu = -mu;
  return mu;
}

// sum over a mod q with gcd(a, q) = 1 of e(a r / q)
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t r) {
  const std::int64_t g = std::gcd(q, r);
  std::int64_t s = 0;
  for (std::int64_t d = 1; d <= g; ++d)
    if (g % d == 0) s += mobius(q / d) * d;
  return s;
}

}  // namespace

std::vector<std::uint64_t> residue_histogram(const CubicForm& form, std::int64_t q, const Budget& budget) {
  if (q < 1) throw PreconditionError("modulus must be positive");
  if (q > 100'000'000) throw PreconditionError("modulus too large for a residue table");
  // the product of block counts is q^n and must fit the 64-bit multiplicities
  try {
    (void)checked_pow(static_cast<std::uint64_t>(q), static_cast<unsigned>(form.n()));
  } catch (const std::exception&) {
    throw BudgetExceeded("residue_histogram: q^n exceeds 64-bit multiplicities");
  }
  if (!CompiledForm(form).safe_for_height(static_cast<double>(q)))
    throw PreconditionError("form values overflow 64-bit evaluation for this modulus");
  const SplitStructure split = split_components(form);
  double needed = 0;
  for (const auto& b : split.blocks) needed += std::pow(static_cast<double>(q), static_cast<double>(b.size()));
  budget.require_points(needed, "residue histogram");
  std::vector<std::uint64_t> h(static_cast<std::size_t>(q), 0);
  h[0] = 1;
  for (std::size_t b = 0; b < split.blocks.size(); ++b)
    h = cyclic_convolve(h, block_histogram(split.subforms[b], static_cast<int>(split.blocks[b].size()), q));
  add_points_consumed(static_cast<std::uint64_t>(needed));
  return h;
}

std::complex<double> complete_sum(const CubicForm& form, std::int64_t a, std::int64_t q, const Budget& budget) {
  if (q < 1 || std::gcd(a, q) != 1) throw PreconditionError("complete_sum needs q >= 1 and gcd(a, q) = 1");
  const auto h = residue_histogram(form, q, budget);
  std::int64_t am = a % q;
  if (am < 0) am += q;
  // extended-precision roots of unity, Neumaier-compensated accumulation
  long double re = 0, im = 0, cre = 0, cim = 0;
  auto add = [](long double& s, long double& c, long double x) {
    const long double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  };
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::int64_t r = 0; r < q; ++r) {
    if (h[static_cast<std::size_t>(r)] == 0) continue;
    const auto k = static_cast<std::int64_t>(static_cast<__int128>(am) * r % q);
    const long double ang = two_pi * static_cast<long double>(k) / static_cast<long double>(q);
    const auto m = static_cast<long double>(h[static_cast<std::size_t>(r)]);
    add(re, cre, m * std::cos(ang));
    add(im, cim, m * std::sin(ang));
  }
  return {static_cast<double>(re + cre), static_cast<double>(im + cim)};
}

double singular_series_block_direct(const CubicForm& form, std::int64_t q, const Budget& budget) {
  std::complex<double> s{0, 0};
  for (std::int64_t a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) s += complete_sum(form, a, q, budget);
  return s.real() / std::pow(static_cast<double>(q), form.n());
}

SingularSeriesReport singular_series(const CubicForm& form, int q_max, const Budget& budget) {
  if (q_max < 1) throw PreconditionError("singular_series needs Q_max >= 1");
  double needed = 0;
  for (const auto& b : split_components(form).blocks)
    for (int q = 1; q <= q_max; ++q) needed += std::pow(static_cast<double>(q), static_cast<double>(b.size()));
  budget.require_points(needed, "singular_series");

  SingularSeriesReport rep;
  rep.q_max = q_max;
  rep.reference_decay = 1.0 - form.n() / 6.0;
  Rational total = 0;
  for (int q = 1; q <= q_max; ++q) {
    const auto h = residue_histogram(form, q, budget);
    // q^n A(q) = sum_r H(r) c_q(r) is an integer
    BigInt num = 0;
    for (std::int64_t r = 0; r < q; ++r)
      if (h[static_cast<std::size_t>(r)] != 0)
        num += BigInt(std::to_string(h[static_cast<std::size_t>(r)])) * BigInt(static_cast<long>(ramanujan_sum(q, r)));
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(form.n()));
    Rational block(num, den);
    block.canonicalize();
    total += block;
    rep.blocks.push_back(block.get_d());
    rep.partial_sums.push_back(total.get_d());
  }
  rep.value = total.get_d();

  std::vector<double> xs, ys;
  for (int q = 2; q <= q_max; ++q) {
    const double b = std::abs(rep.blocks[static_cast<std::size_t>(q - 1)]);
    if (b > 1e-300) {
      xs.push_back(std::log(static_cast<double>(q)));
      ys.push_back(std::log(b));
    }
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx > 0) {
      rep.fitted_decay = sxy / sxx;
      const double c = std::exp(my - rep.fitted_decay * mx);
      if (rep.fitted_decay < -1.0)
        rep.tail_estimate = c * std::pow(static_cast<double>(q_max), rep.fitted_decay + 1) / (-rep.fitted_decay - 1);
    }
  } else {
    rep.fitted_decay = std::nan("");
  }
  return rep;
}

}  // namespace splitcubic
