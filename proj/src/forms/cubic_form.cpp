#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "splitcubic/forms.hpp"

namespace splitcubic {

Triple sorted_triple(int i, int j, int k) {
  Triple t{i, j, k};
  std::sort(t.begin(), t.end());
  return t;
}

CubicForm::CubicForm(int n) : n_(n) {
  if (n < 0) throw PreconditionError("cubic form needs a nonnegative number of variables");
}

void CubicForm::check_index(int i) const {
  if (i < 0 || i >= n_)
    throw PreconditionError("monomial index " + std::to_string(i + 1) + " outside 1.." +
                            std::to_string(n_));
}

void CubicForm::add_term(int i, int j, int k, const BigInt& c) {
  check_index(i);
  check_index(j);
  check_index(k);
  if (c == 0) return;
  const Triple t = sorted_triple(i, j, k);
  auto [it, inserted] = terms_.emplace(t, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void CubicForm::add_term_1based(int i, int j, int k, const BigInt& c) {
  add_term(i - 1, j - 1, k - 1, c);
}

BigInt CubicForm::coefficient(int i, int j, int k) const {
  const auto it = terms_.find(sorted_triple(i, j, k));
  return it == terms_.end() ? BigInt(0) : it->second;
}

std::vector<bool> CubicForm::used_variables() const {
  std::vector<bool> used(static_cast<std::size_t>(n_), false);
  for (const auto& [t, c] : terms_)
    for (int i : t) used[static_cast<std::size_t>(i)] = true;
  return used;
}

BigInt CubicForm::coefficient_l1() const {
  BigInt s = 0;
  for (const auto& [t, c] : terms_) s += abs(c);
  return s;
}

CubicForm CubicForm::scaled(const BigInt& lambda) const {
  CubicForm out(n_);
  for (const auto& [t, c] : terms_) out.add_term(t[0], t[1], t[2], c * lambda);
  return out;
}

namespace {

template <typename Vec>
void check_dim(const CubicForm& form, const Vec& x) {
  if (static_cast<int>(x.size()) != form.n())
    throw PreconditionError("dimension mismatch: form has " + std::to_string(form.n()) +
                            " variables, point has " + std::to_string(x.size()));
}

BigInt as_big(std::int64_t v) {
  BigInt r;
  mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
  return r;
}

}  // namespace

BigInt evaluate(const CubicForm& form, std::span<const BigInt> x) {
  check_dim(form, x);
  BigInt s = 0;
  for (const auto& [t, c] : form.terms()) s += c * x[t[0]] * x[t[1]] * x[t[2]];
  return s;
}

BigInt evaluate(const CubicForm& form, std::span<const std::int64_t> x) {
  check_dim(form, x);
  std::vector<BigInt> big;
  big.reserve(x.size());
  for (auto v : x) big.push_back(as_big(v));
  return evaluate(form, std::span<const BigInt>(big));
}

std::vector<BigInt> gradient(const CubicForm& form, std::span<const std::int64_t> x) {
  check_dim(form, x);
  std::vector<BigInt> big;
  for (auto v : x) big.push_back(as_big(v));
  std::vector<BigInt> g(x.size(), BigInt(0));
  for (const auto& [t, c] : form.terms()) {
    // product rule over the three factor positions
    for (int p = 0; p < 3; ++p) {
      const int a = t[(p + 1) % 3], b = t[(p + 2) % 3];
      g[static_cast<std::size_t>(t[p])] += c * big[a] * big[b];
    }
  }
  return g;
}

std::vector<std::vector<BigInt>> hessian(const CubicForm& form, std::span<const std::int64_t> x) {
  check_dim(form, x);
  const auto n = x.size();
  std::vector<std::vector<BigInt>> h(n, std::vector<BigInt>(n, BigInt(0)));
  for (const auto& [t, c] : form.terms()) {
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        if (p == q) continue;
        const int r = 3 - p - q;
        h[t[p]][t[q]] += c * as_big(x[t[r]]);
      }
  }
  return h;
}

int integer_rank(std::vector<std::vector<BigInt>> m) {
  const std::size_t rows = m.size();
  if (rows == 0) return 0;
  const std::size_t cols = m[0].size();
  BigInt prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]);
        mpz_divexact(m[r][c].get_mpz_t(), m[r][c].get_mpz_t(), prev.get_mpz_t());
      }
      m[r][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return static_cast<int>(rank);
}

namespace {

// Rank over int64 via Bareiss with __int128 intermediates; caller guarantees
// the Hadamard-type bound keeps every minor inside int64.
int small_rank(std::vector<std::int64_t>& m, int n) {
  __int128 prev = 1;
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = rank;
    while (piv < n && m[piv * n + col] == 0) ++piv;
    if (piv == n) continue;
    if (piv != rank)
      for (int c = 0; c < n; ++c) std::swap(m[piv * n + c], m[rank * n + c]);
    const __int128 pv = m[rank * n + col];
    for (int r = rank + 1; r < n; ++r) {
      const __int128 f = m[r * n + col];
      for (int c = col + 1; c < n; ++c) {
        const __int128 v = pv * m[r * n + c] - f * m[rank * n + c];
        m[r * n + c] = static_cast<std::int64_t>(v / prev);
      }
      m[r * n + col] = 0;
    }
    prev = pv;
    ++rank;
  }
  return rank;
}

}  // namespace

std::map<int, std::uint64_t> hessian_rank_profile(const CubicForm& form, int h_bound,
                                                  const Budget& budget) {
  if (h_bound < 0) throw PreconditionError("height bound must be non-negative");
  const int n = form.n();
  const double side = 2.0 * h_bound + 1.0;
  budget.require_points(n * std::pow(side, n), "hessian_rank_profile");

  // H(x) = sum_r x_r * A_r with integer 6*coefficient-type entries.
  std::vector<std::vector<BigInt>> parts(static_cast<std::size_t>(n),
                                         std::vector<BigInt>(static_cast<std::size_t>(n * n), 0));
  for (const auto& [t, c] : form.terms())
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        if (p == q) continue;
        parts[t[3 - p - q]][t[p] * n + t[q]] += c;
      }
  double entry_bound = 0;
  std::vector<std::vector<std::int64_t>> small(static_cast<std::size_t>(n),
                                               std::vector<std::int64_t>(n * n, 0));
  bool fits = true;
  for (int r = 0; r < n; ++r)
    for (int e = 0; e < n * n; ++e) {
      const BigInt& v = parts[r][e];
      if (!v.fits_slong_p()) fits = false;
      else small[r][e] = v.get_si();
      entry_bound = std::max(entry_bound, std::abs(v.get_d()));
    }
  entry_bound *= n * std::max(1, h_bound);
  // Bareiss minors are bounded by Hadamard: (sqrt(n) * entry)^n.
  fits = fits && std::pow(std::sqrt(double(n)) * entry_bound, n) * 4.0 < 9.0e18;

  std::map<int, std::uint64_t> counts;
  std::vector<std::int64_t> x(static_cast<std::size_t>(n), -h_bound);
  std::vector<std::int64_t> mat(static_cast<std::size_t>(n * n));
  std::uint64_t evaluated = 0;
  while (true) {
    int rank;
    if (fits) {
      std::fill(mat.begin(), mat.end(), 0);
      for (int r = 0; r < n; ++r)
        if (x[r] != 0)
          for (int e = 0; e < n * n; ++e) mat[e] += x[r] * small[r][e];
      rank = small_rank(mat, n);
    } else {
      rank = integer_rank(hessian(form, x));
    }
    ++counts[rank];
    ++evaluated;
    int i = 0;
    while (i < n && x[i] == h_bound) x[i++] = -h_bound;
    if (i == n) break;
    ++x[i];
  }
  add_points_consumed(evaluated);
  return counts;
}

std::vector<GoodnessRow> goodness_ladder(const CubicForm& form, std::span<const int> ladder,
                                         const Budget& budget) {
  std::vector<GoodnessRow> rows;
  for (int h : ladder) {
    GoodnessRow row{h, hessian_rank_profile(form, h, budget), {}};
    for (const auto& [r, c] : row.counts)
      row.normalized[r] = static_cast<double>(c) / std::pow(static_cast<double>(h), r);
    rows.push_back(std::move(row));
  }
  return rows;
}

CubicForm SplitStructure::reassemble(int n) const {
  CubicForm out(n);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (const auto& [t, c] : subforms[b].terms())
      out.add_term(blocks[b][t[0]], blocks[b][t[1]], blocks[b][t[2]], c);
  return out;
}

CubicForm restrict_to(const CubicForm& form, std::span<const int> vars) {
  std::vector<int> local(static_cast<std::size_t>(form.n()), -1);
  for (std::size_t i = 0; i < vars.size(); ++i) local[vars[i]] = static_cast<int>(i);
  CubicForm out(static_cast<int>(std::max<std::size_t>(vars.size(), 1)));
  for (const auto& [t, c] : form.terms()) {
    if (local[t[0]] < 0 || local[t[1]] < 0 || local[t[2]] < 0) continue;
    out.add_term(local[t[0]], local[t[1]], local[t[2]], c);
  }
  return out;
}

SplitStructure split_components(const CubicForm& form) {
  const int n = form.n();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [t, c] : form.terms()) {
    for (int p = 1; p < 3; ++p) {
      const int r0 = find(t[0]);
      const int r = find(t[p]);
      if (r != r0) parent[std::max(r, r0)] = std::min(r, r0);
    }
  }
  // Roots are minimal members, so blocks come out ordered by smallest index.
  std::map<int, std::vector<int>> by_root;
  for (int i = 0; i < n; ++i) by_root[find(i)].push_back(i);
  SplitStructure s;
  for (auto& [root, members] : by_root) {
    s.subforms.push_back(restrict_to(form, members));
    s.blocks.push_back(std::move(members));
  }
  return s;
}

CubicForm make_mordell_form() {
  CubicForm c(9);
  const int scale[3] = {1, 7, 49};
  for (int b = 0; b < 3; ++b) {
    const int o = 3 * b;
    c.add_term(o, o, o, scale[b]);
    c.add_term(o + 1, o + 1, o + 1, 2 * scale[b]);
    c.add_term(o + 2, o + 2, o + 2, 4 * scale[b]);
    c.add_term(o, o + 1, o + 2, scale[b]);
  }
  return c;
}

std::optional<std::vector<BigInt>> is_degenerate(const CubicForm& form) {
  const int n = form.n();
  // grad C(x).v = sum_j v_j dC/dx_j, a quadratic in x; one row per quadratic
  // monomial x_a x_b, one column per direction coordinate v_j.
  std::map<std::pair<int, int>, std::vector<Rational>> rows;
  for (const auto& [t, c] : form.terms()) {
    for (int p = 0; p < 3; ++p) {
      int a = t[(p + 1) % 3], b = t[(p + 2) % 3];
      if (a > b) std::swap(a, b);
      auto& row = rows[{a, b}];
      if (row.empty()) row.assign(static_cast<std::size_t>(n), Rational(0));
      row[t[p]] += c;
    }
  }
  std::vector<std::vector<Rational>> m;
  for (auto& [k, row] : rows) m.push_back(row);

  // Reduced row echelon form over Q.
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (int col = 0; col < n && r < m.size(); ++col) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    const Rational inv = 1 / m[r][col];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t o = 0; o < m.size(); ++o) {
      if (o == r || m[o][col] == 0) continue;
      const Rational f = m[o][col];
      for (int c2 = 0; c2 < n; ++c2) m[o][c2] -= f * m[r][c2];
    }
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : pivot_col) is_pivot[c] = true;
  int free_col = -1;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col < 0) return std::nullopt;

  std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
  v[free_col] = 1;
  for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m[i][free_col];
  BigInt den = 1;
  for (const auto& q : v) {
    BigInt l;
    mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    den = l;
  }
  std::vector<BigInt> w;
  BigInt g = 0;
  for (const auto& q : v) {
    BigInt e = q.get_num() * (den / q.get_den());
    g = gcd(g, e);
    w.push_back(e);
  }
  for (auto& e : w) e /= g;
  // sign normalization: first nonzero coordinate positive
  for (const auto& e : w)
    if (e != 0) {
      if (e < 0)
        for (auto& f : w) f = -f;
      break;
    }
  return w;
}

CompiledForm::CompiledForm(const CubicForm& form) : n_(form.n()) {
  for (const auto& [t, c] : form.terms()) {
    l1_ += std::abs(c.get_d());
    if (!c.fits_slong_p()) {
      representable_ = false;
      continue;
    }
    terms_.push_back({t[0], t[1], t[2], c.get_si()});
  }
}

double CompiledForm::value_bound(double height) const { return l1_ * height * height * height; }

bool CompiledForm::safe_for_height(double height) const {
  // Each partial product c*x*x*x and the running sum must stay below 2^62.
  return representable_ && value_bound(height) < 4.0e18;
}

nlohmann::json form_to_json(const CubicForm& form) {
  nlohmann::json mons = nlohmann::json::array();
  for (const auto& [t, c] : form.terms()) {
    nlohmann::json coeff;
    if (c.fits_slong_p()) coeff = c.get_si();
    else coeff = c.get_str();
    mons.push_back({t[0] + 1, t[1] + 1, t[2] + 1, coeff});
  }
  return {{"n", form.n()}, {"monomials", mons}};
}

CubicForm form_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("monomials"))
    throw PreconditionError("cubic-form document needs \"n\" and \"monomials\"");
  const int n = doc.at("n").get<int>();
  if (n < 1) throw PreconditionError("cubic form needs at least one variable");
  CubicForm form(n);
  for (const auto& m : doc.at("monomials")) {
    if (!m.is_array() || m.size() != 4)
      throw PreconditionError("each monomial must be [i,j,k,coeff]");
    const int i = m[0].get<int>(), j = m[1].get<int>(), k = m[2].get<int>();
    if (!(1 <= i && i <= j && j <= k && k <= n))
      throw PreconditionError("monomial indices must be sorted and within 1..n");
    BigInt c;
    if (m[3].is_string()) c = BigInt(m[3].get<std::string>());
    else c = BigInt(std::to_string(m[3].get<long long>()));
    if (c == 0) throw PreconditionError("monomial coefficients must be nonzero");
    if (form.coefficient(i - 1, j - 1, k - 1) != 0)
      throw PreconditionError("duplicate monomial in cubic-form document");
    form.add_term_1based(i, j, k, c);
  }
  return form;
}

CubicForm load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open form file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("malformed form JSON in " + path + ": " + e.what());
  }
  return form_from_json(doc);
}

}  // namespace splitcubic
