#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "detail.hpp"
#include "splitcubic/expsums.hpp"

namespace splitcubic {

namespace {

constexpr int kOrder = 10;

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

const Rule& legendre() {
  static const Rule r = [] {
    using G = boost::math::quadrature::gauss<double, kOrder>;
    Rule g;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      g.x.push_back(a[i]);
      g.w.push_back(w[i]);
      if (a[i] != 0.0) {
        g.x.push_back(-a[i]);
        g.w.push_back(w[i]);
      }
    }
    return g;
  }();
  return r;
}

// Composite Gauss-Legendre nodes for [lo, hi] split into `panels` pieces.
void composite(double lo, double hi, std::size_t panels, std::vector<double>& x, std::vector<double>& w) {
  const Rule& g = legendre();
  x.clear();
  w.clear();
  const double h = (hi - lo) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      x.push_back(mid + 0.5 * h * g.x[i]);
      w.push_back(0.5 * h * g.w[i]);
    }
  }
}

struct RealForm {
  struct Term {
    int i, j, k;
    double c;
  };
  std::vector<Term> terms;
  int n = 0;

  explicit RealForm(const CubicForm& f) : n(f.n()) {
    for (const auto& [t, c] : f.terms()) terms.push_back({t[0], t[1], t[2], c.get_d()});
  }
  double operator()(const double* x) const {
    double s = 0;
    for (const auto& t : terms) s += t.c * x[t.i] * x[t.j] * x[t.k];
    return s;
  }
  std::vector<double> grad(const double* x) const {
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    for (const auto& t : terms) {
      g[t.i] += t.c * x[t.j] * x[t.k];
      g[t.j] += t.c * x[t.i] * x[t.k];
      g[t.k] += t.c * x[t.i] * x[t.j];
    }
    return g;
  }
  double l1() const {
    double s = 0;
    for (const auto& t : terms) s += std::abs(t.c);
    return s;
  }
};

struct Block {
  RealForm form;
  std::vector<double> lo, hi;
  double grad_bound = 0;
};

// int over the block box of e(beta C(zeta)) by tensor composite quadrature
std::complex<double> block_integral(const Block& b, double beta, int resolution, const Budget& budget) {
  const int dim = b.form.n;
  double vol = 1;
  for (int i = 0; i < dim; ++i) vol *= b.hi[i] - b.lo[i];
  if (b.form.terms.empty()) return {vol, 0.0};
  std::vector<std::vector<double>> xs(dim), ws(dim);
  double nodes = 1;
  for (int i = 0; i < dim; ++i) {
    const double osc = std::abs(beta) * b.grad_bound * (b.hi[i] - b.lo[i]);
    const auto panels = static_cast<std::size_t>(std::ceil(resolution * osc)) + 1;
    composite(b.lo[i], b.hi[i], panels, xs[i], ws[i]);
    nodes *= static_cast<double>(xs[i].size());
  }
  budget.require_points(nodes, "singular_integral block quadrature");
  std::vector<std::int64_t> lo(dim, 0), width(dim);
  for (int i = 0; i < dim; ++i) width[i] = static_cast<std::int64_t>(xs[i].size());
  detail::Odometer od{lo, width, {}};
  od.seek(0);
  std::vector<double> pt(dim);
  long double re = 0, im = 0;
  const auto total = static_cast<std::uint64_t>(nodes);
  for (std::uint64_t k = 0; k < total; ++k, od.next()) {
    double w = 1;
    for (int i = 0; i < dim; ++i) {
      pt[i] = xs[i][od.x[i]];
      w *= ws[i][od.x[i]];
    }
    const double a = 2 * std::numbers::pi * beta * b.form(pt.data());
    re += w * std::cos(a);
    im += w * std::sin(a);
  }
  add_points_consumed(total);
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

SingularIntegralReport singular_integral(const CubicForm& form, const std::vector<double>& z, double rho,
                                         const SingularIntegralOptions& opt) {
  const int n = form.n();
  if (static_cast<int>(z.size()) != n) throw PreconditionError("center dimension does not match the form");
  if (!(rho > 0)) throw PreconditionError("singular_integral needs rho > 0");
  if (!(opt.b_max > 0)) throw PreconditionError("singular_integral needs B_max > 0");
  if (opt.nodes_per_oscillation < 1) throw PreconditionError("quadrature resolution must be >= 1");
  if (!opt.seed_set) throw PreconditionError("singular_integral needs an explicit seed for the Monte Carlo cross-check");
  if (form.is_zero()) throw PreconditionError("singular_integral needs a nonzero form");

  const RealForm whole(form);
  SingularIntegralReport rep;
  rep.center_value = whole(z.data());
  {
    const auto g = whole.grad(z.data());
    for (double v : g) rep.center_gradient = std::max(rep.center_gradient, std::abs(v));
  }
  double zmax = 0;
  for (double v : z) zmax = std::max(zmax, std::abs(v));
  const double scale = whole.l1() * std::max(zmax, rho) * std::max(zmax, rho);
  if (opt.require_nonsingular_center) {
    if (std::abs(rep.center_value) > 1e-9 * scale * std::max(zmax, rho))
      throw PreconditionError("box center is not a real zero of the form");
    if (rep.center_gradient <= 1e-6 * scale) throw PreconditionError("singular center rejected: grad C(z) = 0");
  }

  const SplitStructure split = split_components(form);
  std::vector<Block> blocks;
  double c_bound = 0;
  for (std::size_t b = 0; b < split.blocks.size(); ++b) {
    Block blk{RealForm(split.subforms[b]), {}, {}, 0};
    double r = 0;
    for (int v : split.blocks[b]) {
      blk.lo.push_back(z[v] - rho);
      blk.hi.push_back(z[v] + rho);
      r = std::max(r, std::abs(z[v]) + rho);
    }
    blk.grad_bound = 3 * blk.form.l1() * r * r;
    c_bound += blk.form.l1() * r * r * r;
    blocks.push_back(std::move(blk));
  }

  // beta panels: one period of e(beta C) spans about 1 / max|C|
  auto beta_panels =
      static_cast<std::size_t>(std::ceil(opt.b_max * c_bound * opt.nodes_per_oscillation)) + 1;
  if (beta_panels % 2 == 1) ++beta_panels;
  std::vector<double> bx, bw;
  composite(0.0, opt.b_max, beta_panels, bx, bw);
  rep.beta_nodes = bx.size();
  const std::size_t half = bx.size() / 2;
  long double full = 0, first_half = 0;
  double tail_max = 0;
  for (std::size_t k = 0; k < bx.size(); ++k) {
    std::complex<double> I{1.0, 0.0};
    for (const auto& blk : blocks) I *= block_integral(blk, bx[k], opt.nodes_per_oscillation, opt.budget);
    full += bw[k] * I.real();
    if (k < half) first_half += bw[k] * I.real();
    if (bx[k] >= 0.75 * opt.b_max) tail_max = std::max(tail_max, std::abs(I));
  }
  rep.value_truncated = 2 * static_cast<double>(full);
  rep.value_half_range = 2 * static_cast<double>(first_half);
  rep.value = 2 * rep.value_truncated - rep.value_half_range;
  rep.tail_bound = 2 * opt.b_max * tail_max;

  // density cross-check
  rep.eta = opt.eta > 0 ? opt.eta : 0.01 * c_bound;
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  opt.budget.require_points(static_cast<double>(opt.samples), "singular_integral Monte Carlo");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < opt.samples; ++s) {
    for (int i = 0; i < n; ++i) x[i] = z[i] + rho * u(rng);
    if (std::abs(whole(x.data())) < rep.eta) ++hits;
  }
  add_points_consumed(opt.samples);
  const double vol = std::pow(2 * rho, n);
  const double p = static_cast<double>(hits) / static_cast<double>(std::max<std::uint64_t>(opt.samples, 1));
  rep.mc_density = vol * p / (2 * rep.eta);
  rep.mc_stderr = vol * std::sqrt(p * (1 - p) / static_cast<double>(std::max<std::uint64_t>(opt.samples, 1))) /
                  (2 * rep.eta);
  rep.relative_gap = rep.value != 0 ? std::abs(rep.value - rep.mc_density) / std::abs(rep.value) : INFINITY;
  const double mag = std::abs(rep.value);
  rep.converged = std::abs(rep.value - rep.value_truncated) <= 0.05 * mag;
  return rep;
}

std::vector<double> find_real_center(const CubicForm& form, std::uint64_t seed, double radius) {
  if (form.is_zero()) throw PreconditionError("the zero form has no nonsingular real zero");
  if (!(radius > 0)) throw PreconditionError("center radius must be positive");
  const RealForm f(form);
  const auto n = static_cast<std::size_t>(form.n());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> base(n), dir(n), x(n);
  auto at = [&](double t) {
    for (std::size_t i = 0; i < n; ++i) x[i] = base[i] + t * dir[i];
    return f(x.data());
  };
  for (int attempt = 0; attempt < 500; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = u(rng);
      dir[i] = u(rng);
    }
    constexpr int steps = 64;
    double t0 = -3, f0 = at(t0);
    for (int s = 1; s <= steps; ++s) {
      const double t1 = -3 + 6.0 * s / steps;
      const double f1 = at(t1);
      if ((f0 < 0) != (f1 < 0)) {
        double a = t0, b = t1, fa = f0;
        for (int it = 0; it < 200 && b - a > 0; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = at(m);
          if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        at(0.5 * (a + b));
        double sup = 0;
        for (double v : x) sup = std::max(sup, std::abs(v));
        if (sup < 1e-3) break;
        for (auto& v : x) v *= radius / sup;
        double g = 0;
        for (double v : f.grad(x.data())) g = std::max(g, std::abs(v));
        if (g > 1e-3 * f.l1() * radius * radius) return x;
        break;
      }
      t0 = t1;
      f0 = f1;
    }
  }
  throw PreconditionError("no sign change found: form appears definite on sampled lines");
}

}  // namespace splitcubic
