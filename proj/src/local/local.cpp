#include "splitcubic/local.hpp"

#include <functional>
#include <sstream>
#include <unordered_map>

namespace splitcubic {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 reduce(const BigInt& c, u64 m) {
  BigInt r = c % BigInt(std::to_string(m));
  if (r < 0) r += BigInt(std::to_string(m));
  return std::stoull(r.get_str());
}

// Form with coefficients reduced mod m, evaluated on residues in [0, m).
class ModularForm {
 public:
  ModularForm(const CubicForm& form, u64 m) : m_(m) {
    for (const auto& [t, c] : form.terms()) {
      const u64 r = reduce(c, m);
      if (r != 0) terms_.push_back({t[0], t[1], t[2], r});
    }
  }
  u64 operator()(const u64* x) const {
    u64 s = 0;
    if (m_ < (u64(1) << 15)) {
      // c*x*y*z < 2^60: one reduction per term
      for (const auto& t : terms_) s += t.c * x[t.i] * x[t.j] * x[t.k] % m_;
      return s % m_;
    }
    for (const auto& t : terms_) {
      const u64 v = mulmod(mulmod(mulmod(t.c, x[t.i], m_), x[t.j], m_), x[t.k], m_);
      s += v;
      if (s >= m_) s -= m_;
    }
    return s;
  }

 private:
  struct Term {
    int i, j, k;
    u64 c;
  };
  u64 m_;
  std::vector<Term> terms_;
};

// Visits every vector in [0, m)^n in lexicographic order; f returns false to stop.
template <class F>
void for_each_residue(int n, u64 m, F&& f) {
  std::vector<u64> x(static_cast<std::size_t>(n), 0);
  while (true) {
    if (!f(x.data())) return;
    int i = n - 1;
    while (i >= 0 && ++x[static_cast<std::size_t>(i)] == m) x[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return;
  }
}

double power_as_double(u64 base, unsigned e) {
  double r = 1;
  for (unsigned i = 0; i < e; ++i) r *= static_cast<double>(base);
  return r;
}

u64 modulus(u64 p, unsigned k) {
  if (!is_prime(p)) throw PreconditionError("p must be prime");
  if (k == 0) throw PreconditionError("k must be positive");
  const u64 m = checked_pow(p, k);
  if (m > (u64(1) << 62)) throw PreconditionError("p^k too large");
  return m;
}

BigInt pow_big(u64 p, unsigned k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

BigInt evaluate_big(const CubicForm& form, const std::vector<BigInt>& x) {
  return evaluate(form, std::span<const BigInt>(x));
}

BigInt partial(const CubicForm& form, const std::vector<BigInt>& x, int l) {
  BigInt s = 0;
  for (const auto& [t, c] : form.terms()) {
    // d/dx_l of x_i x_j x_k: sum over positions equal to l of the other two factors
    for (int pos = 0; pos < 3; ++pos) {
      if (t[static_cast<std::size_t>(pos)] != l) continue;
      BigInt term = c;
      for (int q = 0; q < 3; ++q)
        if (q != pos) term *= x[static_cast<std::size_t>(t[static_cast<std::size_t>(q)])];
      s += term;
    }
  }
  return s;
}

bool divisible(const BigInt& v, const BigInt& d) { return mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t()) != 0; }

std::optional<int> unit_partial(const CubicForm& form, const std::vector<BigInt>& x, u64 p) {
  const BigInt bp(std::to_string(p));
  for (int l = 0; l < form.n(); ++l)
    if (!divisible(partial(form, x, l), bp)) return l;
  return std::nullopt;
}

std::vector<BigInt> to_big(const u64* x, int n) {
  std::vector<BigInt> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.emplace_back(std::to_string(x[i]));
  return out;
}

}  // namespace

LocalWitness make_witness(const CubicForm& form, u64 p, unsigned k, std::vector<BigInt> x) {
  modulus(p, k);
  if (static_cast<int>(x.size()) != form.n()) throw PreconditionError("witness has wrong dimension");
  const BigInt bp(std::to_string(p));
  bool primitive = false;
  for (const auto& xi : x) primitive = primitive || !divisible(xi, bp);
  if (!primitive) throw PreconditionError("witness is congruent to 0 mod p");
  if (!divisible(evaluate_big(form, x), pow_big(p, k))) throw PreconditionError("witness is not a zero mod p^k");
  LocalWitness w{p, k, std::move(x), false};
  w.nonsingular = unit_partial(form, w.x, p).has_value();
  return w;
}

std::uint64_t count_zeros_mod(const CubicForm& form, u64 p, unsigned k, const Budget& budget) {
  const u64 m = modulus(p, k);
  const SplitStructure split = split_components(form);
  int covered = 0;
  double points = 0;
  for (const auto& b : split.blocks) {
    covered += static_cast<int>(b.size());
    points += power_as_double(m, static_cast<unsigned>(b.size()));
  }
  budget.require_points(points, "count_zeros_mod");
  budget.require_entries(static_cast<double>(m), "count_zeros_mod value table");

  // Value histogram of the whole form, built block by block.
  std::unordered_map<u64, u64> total{{0, 1}};
  for (const auto& sub : split.subforms) {
    const ModularForm f(sub, m);
    std::unordered_map<u64, u64> hist;
    u64 visited = 0;
    for_each_residue(sub.n(), m, [&](const u64* x) {
      ++hist[f(x)];
      ++visited;
      return true;
    });
    add_points_consumed(visited);
    std::unordered_map<u64, u64> next;
    for (const auto& [a, ca] : total)
      for (const auto& [b, cb] : hist) {
        u64 s = a + b;
        if (s >= m) s -= m;
        next[s] += ca * cb;
      }
    total = std::move(next);
  }
  u128 count = total[0];
  for (int i = covered; i < form.n(); ++i) {
    count *= m;
    if (count > std::numeric_limits<u64>::max()) throw PreconditionError("zero count overflows 64 bits");
  }
  return static_cast<u64>(count);
}

LocalWitness hensel_lift(const CubicForm& form, const LocalWitness& witness, unsigned target_k) {
  if (target_k == 0) throw PreconditionError("target level must be positive");
  if (static_cast<int>(witness.x.size()) != form.n()) throw PreconditionError("witness has wrong dimension");
  const auto coord = unit_partial(form, witness.x, witness.p);
  if (!coord) throw PreconditionError("singular witness: no partial derivative is a unit mod p");
  LocalWitness w = make_witness(form, witness.p, witness.k, witness.x);
  const BigInt bp(std::to_string(w.p));
  const auto l = static_cast<std::size_t>(*coord);
  while (w.k < target_k) {
    const BigInt pk = pow_big(w.p, w.k);
    const BigInt value = evaluate_big(form, w.x);
    BigInt residue = value / pk;  // exact: value == 0 mod p^k
    residue %= bp;
    BigInt deriv = partial(form, w.x, static_cast<int>(l)) % bp;
    if (deriv < 0) deriv += bp;
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), deriv.get_mpz_t(), bp.get_mpz_t());
    BigInt t = (-residue * inv) % bp;
    if (t < 0) t += bp;
    w.x[l] += t * pk;
    ++w.k;
  }
  w.k = target_k;
  return make_witness(form, w.p, w.k, w.x);
}

std::optional<LocalWitness> find_local_witness(const CubicForm& form, u64 p, unsigned k, const Budget& budget) {
  modulus(p, k);
  const int n = form.n();
  budget.require_points(power_as_double(p, static_cast<unsigned>(n)), "find_local_witness mod p");
  const ModularForm fp(form, p);
  std::optional<LocalWitness> found;
  std::optional<std::vector<BigInt>> singular_zero;
  u64 visited = 0;
  for_each_residue(n, p, [&](const u64* x) {
    ++visited;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) nonzero = nonzero || x[i] != 0;
    if (!nonzero || fp(x) != 0) return true;
    auto big = to_big(x, n);
    if (unit_partial(form, big, p)) {
      found = hensel_lift(form, make_witness(form, p, 1, big), k);
      return false;
    }
    if (!singular_zero) singular_zero = big;
    return true;
  });
  add_points_consumed(visited);
  if (found) return found;
  if (k == 1) {
    if (singular_zero) return make_witness(form, p, 1, *singular_zero);
    return std::nullopt;
  }
  // Primitive zeros mod p^k reduce to primitive zeros mod p: extend each
  // one digit at a time, depth first.
  std::vector<std::vector<u64>> roots;
  for_each_residue(n, p, [&](const u64* x) {
    bool nonzero = false;
    for (int i = 0; i < n; ++i) nonzero = nonzero || x[i] != 0;
    if (nonzero && fp(x) == 0) roots.emplace_back(x, x + n);
    return true;
  });
  const double per_level = power_as_double(p, static_cast<unsigned>(n));
  double spent = 0;
  visited = 0;
  std::vector<u64> y(static_cast<std::size_t>(n));
  std::function<bool(const std::vector<u64>&, unsigned, u64)> extend =
      [&](const std::vector<u64>& x, unsigned level, u64 pj) -> bool {
    if (level == k) {
      found = make_witness(form, p, k, to_big(x.data(), n));
      return true;
    }
    spent += per_level;
    if (spent > static_cast<double>(budget.points)) return false;
    const u64 next = pj * p;
    const ModularForm f(form, next);
    bool done = false;
    for_each_residue(n, p, [&](const u64* d) {
      ++visited;
      for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + pj * d[i];
      if (f(y.data()) != 0) return true;
      const std::vector<u64> child = y;
      done = extend(child, level + 1, next);
      return !done;
    });
    return done;
  };
  for (const auto& r : roots)
    if (extend(r, 1, p)) break;
  add_points_consumed(visited);
  return found;
}

BlockPartition parse_blocks(std::string_view text, int n) {
  BlockPartition out;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::size_t group = 0, start = 0;
  const std::string s(text);
  auto flush_group = [&](const std::string& g) {
    if (group >= 3) throw PreconditionError("at most three blocks (u/v/w) are allowed");
    std::stringstream ss(g);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      int idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw PreconditionError("bad variable index '" + item + "' in blocks");
      }
      if (idx < 1 || idx > n) throw PreconditionError("block index " + item + " out of range");
      if (seen[static_cast<std::size_t>(idx - 1)]) throw PreconditionError("variable " + item + " listed twice");
      seen[static_cast<std::size_t>(idx - 1)] = true;
      out[group].push_back(idx - 1);
    }
    ++group;
  };
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '/') {
      flush_group(s.substr(start, i - start));
      start = i + 1;
    }
  }
  for (int i = 0; i < n; ++i)
    if (!seen[static_cast<std::size_t>(i)])
      throw PreconditionError("variable " + std::to_string(i + 1) + " is in no block");
  return out;
}

DescentOutcome build_descent_certificate(const CubicForm& form, u64 p, const BlockPartition& blocks,
                                         const Budget& budget) {
  if (!is_prime(p)) throw PreconditionError("p must be prime");
  const int n = form.n();
  std::vector<int> role(static_cast<std::size_t>(n), -1), local(static_cast<std::size_t>(n), -1);
  for (int r = 0; r < 3; ++r)
    for (std::size_t i = 0; i < blocks[static_cast<std::size_t>(r)].size(); ++i) {
      const int v = blocks[static_cast<std::size_t>(r)][i];
      if (v < 0 || v >= n || role[static_cast<std::size_t>(v)] != -1)
        throw PreconditionError("blocks must partition the variables");
      role[static_cast<std::size_t>(v)] = r;
      local[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  for (int v = 0; v < n; ++v)
    if (role[static_cast<std::size_t>(v)] == -1) throw PreconditionError("blocks must partition the variables");

  DescentCertificate cert;
  cert.p = p;
  cert.blocks = blocks;
  for (int r = 0; r < 3; ++r) cert.forms[static_cast<std::size_t>(r)] = CubicForm(static_cast<int>(blocks[static_cast<std::size_t>(r)].size()));
  cert.g = CubicForm(n);
  const BigInt bp(std::to_string(p));
  const char* names[3] = {"u", "v", "w"};

  for (const auto& [t, c] : form.terms()) {
    std::array<int, 3> count{0, 0, 0};
    for (int v : t) ++count[static_cast<std::size_t>(role[static_cast<std::size_t>(v)])];
    auto describe = [&]() -> std::string {
      std::ostringstream os;
      os << "coefficient " << c.get_str() << " of x" << t[0] + 1 << "*x" << t[1] + 1 << "*x" << t[2] + 1;
      return os.str();
    };
    for (int r = 0; r < 3; ++r) {
      if (count[static_cast<std::size_t>(r)] != 3) continue;
      const BigInt scale = pow_big(p, static_cast<unsigned>(r));
      if (!divisible(c, scale))
        throw PreconditionError("shape violated: " + describe() + " (pure " + names[r] + " term) is not divisible by p^" +
                                std::to_string(r));
      cert.forms[static_cast<std::size_t>(r)].add_term(local[static_cast<std::size_t>(t[0])], local[static_cast<std::size_t>(t[1])],
                                                       local[static_cast<std::size_t>(t[2])], c / scale);
    }
    if (count[0] == 3 || count[1] == 3 || count[2] == 3) continue;
    const bool flagged = (count[2] == 2) || (count[1] == 2 && count[2] == 1);
    const unsigned power = flagged ? 2 : 1;
    if (!divisible(c, pow_big(p, power)))
      throw PreconditionError("shape violated: " + describe() + " (mixed term) is not divisible by p^" +
                              std::to_string(power));
    cert.g.add_term(t[0], t[1], t[2], c / bp);
    cert.mixed.push_back({t, c, power});
  }

  DescentOutcome out;
  for (int r = 0; r < 3; ++r) {
    const CubicForm& f = cert.forms[static_cast<std::size_t>(r)];
    const int m = f.n();
    const double points = power_as_double(p, static_cast<unsigned>(m));
    if (points > 1e8) throw BudgetExceeded("anisotropy check over p^" + std::to_string(m) + " points exceeds the 1e8 cap");
    budget.require_points(points, "anisotropy check");
    const ModularForm fp(f, p);
    AnisotropyCheck check;
    std::vector<std::int64_t> witness;
    for_each_residue(m, p, [&](const u64* x) {
      ++check.points;
      if (fp(x) != 0) return true;
      ++check.zeros;
      bool nonzero = false;
      for (int i = 0; i < m; ++i) nonzero = nonzero || x[i] != 0;
      if (nonzero && witness.empty())
        for (int i = 0; i < m; ++i) witness.push_back(static_cast<std::int64_t>(x[i]));
      return true;
    });
    add_points_consumed(check.points);
    if (!witness.empty()) {
      out.failing_block = r;
      out.counterexample = std::move(witness);
      return out;
    }
    cert.anisotropy[static_cast<std::size_t>(r)] = check;
  }
  out.certificate = std::move(cert);
  return out;
}

nlohmann::json witness_to_json(const LocalWitness& w) {
  nlohmann::json x = nlohmann::json::array();
  for (const auto& xi : w.x) {
    if (xi.fits_slong_p()) x.push_back(xi.get_si());
    else x.push_back(xi.get_str());
  }
  return {{"p", w.p}, {"k", w.k}, {"x", x}, {"nonsingular", w.nonsingular}};
}

nlohmann::json descent_to_json(const DescentCertificate& cert) {
  nlohmann::json blocks = nlohmann::json::array();
  nlohmann::json forms = nlohmann::json::array();
  nlohmann::json checks = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    nlohmann::json b = nlohmann::json::array();
    for (int v : cert.blocks[static_cast<std::size_t>(r)]) b.push_back(v + 1);
    blocks.push_back(b);
    forms.push_back(form_to_json(cert.forms[static_cast<std::size_t>(r)]));
    checks.push_back({{"points", cert.anisotropy[static_cast<std::size_t>(r)].points},
                      {"zeros", cert.anisotropy[static_cast<std::size_t>(r)].zeros}});
  }
  nlohmann::json mixed = nlohmann::json::array();
  for (const auto& m : cert.mixed)
    mixed.push_back({{"monomial", {m.monomial[0] + 1, m.monomial[1] + 1, m.monomial[2] + 1}},
                     {"coefficient", m.coefficient.get_str()},
                     {"divisible_by", "p^" + std::to_string(m.required_power)}});
  return {{"p", cert.p},       {"blocks", blocks}, {"F", forms},
          {"G", form_to_json(cert.g)}, {"anisotropy", checks}, {"mixed_checks", mixed},
          {"conclusion", "no nontrivial zero over Q_p"}};
}

}  // namespace splitcubic
