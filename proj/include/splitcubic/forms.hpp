#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "splitcubic/core.hpp"

namespace splitcubic {

// Sorted 0-based index triple (i <= j <= k) naming the monomial x_i x_j x_k.
using Triple = std::array<int, 3>;

Triple sorted_triple(int i, int j, int k);

// Integral cubic form stored as a sparse map from sorted monomial triples to
// nonzero coefficients. Indices are 0-based internally; the JSON interchange
// format is 1-based.
class CubicForm {
 public:
  explicit CubicForm(int n);

  // Adds c * x_i x_j x_k (indices 0-based, any order). Zero results are erased.
  void add_term(int i, int j, int k, const BigInt& c);
  // Same as add_term with 1-based indices.
  void add_term_1based(int i, int j, int k, const BigInt& c);

  int n() const { return n_; }
  const std::map<Triple, BigInt>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  BigInt coefficient(int i, int j, int k) const;

  // Variables that appear in at least one monomial.
  std::vector<bool> used_variables() const;
  // Sum of |coefficients|.
  BigInt coefficient_l1() const;

  CubicForm scaled(const BigInt& lambda) const;

  friend bool operator==(const CubicForm& a, const CubicForm& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  void check_index(int i) const;
  int n_;
  std::map<Triple, BigInt> terms_;
};

BigInt evaluate(const CubicForm& form, std::span<const BigInt> x);
BigInt evaluate(const CubicForm& form, std::span<const std::int64_t> x);
std::vector<BigInt> gradient(const CubicForm& form, std::span<const std::int64_t> x);
std::vector<std::vector<BigInt>> hessian(const CubicForm& form, std::span<const std::int64_t> x);

// Rank of an integer matrix by fraction-free (Bareiss) elimination.
int integer_rank(std::vector<std::vector<BigInt>> m);

// rank r -> #{x : |x| <= h_bound, rank H(x) = r}, by exhaustive enumeration.
std::map<int, std::uint64_t> hessian_rank_profile(const CubicForm& form, int h_bound,
                                                  const Budget& budget = Budget::from_environment());

// count(r) / H^r for each H in `ladder`; the empirical "good form" report.
struct GoodnessRow {
  int h_bound;
  std::map<int, std::uint64_t> counts;
  std::map<int, double> normalized;  // count(r) / H^r
};
std::vector<GoodnessRow> goodness_ladder(const CubicForm& form, std::span<const int> ladder,
                                         const Budget& budget = Budget::from_environment());

// Partition of the variables into blocks such that no monomial touches two
// blocks. `subforms[b]` is the restriction to block b in block-local indices.
struct SplitStructure {
  std::vector<std::vector<int>> blocks;  // 0-based, each sorted ascending
  std::vector<CubicForm> subforms;

  CubicForm reassemble(int n) const;
};

SplitStructure split_components(const CubicForm& form);

// Restriction of `form` to the given variables (re-indexed 0..size-1).
// Monomials touching other variables are dropped.
CubicForm restrict_to(const CubicForm& form, std::span<const int> vars);

// Monic cubic f = theta^3 + c2 theta^2 + c1 theta + c0 over the integers.
struct NumberFieldSpec {
  BigInt c0, c1, c2;

  BigInt discriminant() const;
  // Throws PreconditionError when f has an integer root or vanishing discriminant.
  void validate() const;
};

// N(x1,x2,x3) = Norm(x1 + x2 theta + x3 theta^2), the determinant of the
// multiplication matrix on the power basis.
CubicForm make_norm_form(const NumberFieldSpec& spec);

// (x1^3+2x2^3+4x3^3+x1x2x3) + 7(...) + 49(...) on three blocks of three.
CubicForm make_mordell_form();

// Nonzero primitive integer v with grad C(x) . v == 0 identically, if any.
std::optional<std::vector<BigInt>> is_degenerate(const CubicForm& form);

// Fixed-width view for hot enumeration loops. Valid only while every
// evaluation stays inside int64; `safe_for_height` checks that bound.
class CompiledForm {
 public:
  explicit CompiledForm(const CubicForm& form);

  int n() const { return n_; }
  bool safe_for_height(double height) const;
  std::int64_t operator()(const std::int64_t* x) const {
    std::int64_t s = 0;
    for (const auto& t : terms_) s += t.c * x[t.i] * x[t.j] * x[t.k];
    return s;
  }
  // max |C(x)| when every |x_i| <= height (coefficient l1 norm times height^3).
  double value_bound(double height) const;

 private:
  struct Term {
    int i, j, k;
    std::int64_t c;
  };
  int n_;
  std::vector<Term> terms_;
  double l1_ = 0.0;
  bool representable_ = true;
};

nlohmann::json form_to_json(const CubicForm& form);
CubicForm form_from_json(const nlohmann::json& doc);
CubicForm load_form(const std::string& path);

}  // namespace splitcubic
