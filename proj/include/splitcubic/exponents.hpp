#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "splitcubic/augmented.hpp"

namespace splitcubic {

// Parameters of the minor-arc lemma for an n-variable good form with
// saved exponent t and target exponent Lambda. phi_i = R^{-rho_i} P^{-pi_i}.
struct Lemma8Params {
  Rational n, t, lambda;
  Rational rho0, pi0, rho1, pi1, rho2, pi2, upsilon, xi;
  // Widening constant for q <= P^{Xi + c*delta}.
  Rational c;
};

// Requires n >= 6 (which also rules out the poles n^2-5n+2 = 0 and n = 4).
Lemma8Params lemma8_params(const Rational& n, const Rational& t, const Rational& lambda);

struct ConditionEntry {
  std::string expression;
  Rational value;
  bool strict = true;
  bool only_for_part_ii = false;

  bool holds() const { return strict ? value > 0 : value >= 0; }
};

struct ConditionReport {
  std::array<ConditionEntry, 7> entries;

  // Part (i) needs the first six conditions, part (ii) all seven.
  bool holds_for_part_i() const;
  bool holds_for_part_ii() const;
};

ConditionReport check_conditions(const Lemma8Params& params, const Rational& v);

// Exponent of I_v(S; t, A(A,B,C)). t, A and C may carry infinitesimal slack;
// B multiplies A and therefore must be a plain rational.
struct Lemma7Terms {
  AugmentedExponent first;
  AugmentedExponent second;
  // Which case of the three-way split produced `second`: "nv<=8", "8<=nv<=16",
  // "nv>=16", or a boundary "nv=8"/"nv=16" where the smaller case value wins.
  std::string regime;
  AugmentedExponent bound;  // max(first, second) + eps
};

Lemma7Terms lemma7_terms(const Rational& n, const Rational& v, const AugmentedExponent& t,
                         const AugmentedExponent& A, const Rational& B, const AugmentedExponent& C);
AugmentedExponent lemma7_bound(const Rational& n, const Rational& v, const AugmentedExponent& t,
                               const AugmentedExponent& A, const Rational& B,
                               const AugmentedExponent& C);

// Sharpened bound on A intersected with the minor arcs; requires nv > 16.
Lemma7Terms remark14_terms(const Rational& n, const Rational& v, const AugmentedExponent& t,
                           const AugmentedExponent& A, const Rational& B, const AugmentedExponent& C);
AugmentedExponent remark14_bound(const Rational& n, const Rational& v, const AugmentedExponent& t,
                                 const AugmentedExponent& A, const Rational& B,
                                 const AugmentedExponent& C);

// Exponent of the dyadic moment bound with R = P^a, phi = P^{-b}, H = P^h.
AugmentedExponent lemma4_bound(const Rational& n, const Rational& v, const Rational& a,
                               const Rational& b, const Rational& h);

// constant + sum of coefficient * variable over variables named a, b, h.
class LinearExponentForm {
 public:
  LinearExponentForm() = default;
  explicit LinearExponentForm(AugmentedExponent constant) : constant_(std::move(constant)) {}
  LinearExponentForm(AugmentedExponent constant, std::map<char, Rational> coefficients);

  const AugmentedExponent& constant() const { return constant_; }
  Rational coefficient(char var) const;
  const std::map<char, Rational>& coefficients() const { return coefficients_; }

  AugmentedExponent evaluate(const std::map<char, AugmentedExponent>& point) const;
  std::string to_string() const;

 private:
  AugmentedExponent constant_;
  std::map<char, Rational> coefficients_;
};

struct ExponentPoint {
  AugmentedExponent a, b;
  friend bool operator==(const ExponentPoint&, const ExponentPoint&) = default;
};

// ca*a + cb*b <= rhs.
struct LinearInequality {
  Rational ca, cb;
  AugmentedExponent rhs;
};

// Polyhedron in the (a, b) exponent plane, a = log_P q-scale, b = -log_P phi.
// The constraints a >= 0 and b >= 0 are always part of the region.
class ExponentPolytope {
 public:
  explicit ExponentPolytope(std::string name = "region");

  void add_le(const Rational& ca, const Rational& cb, const AugmentedExponent& rhs);
  void add_ge(const Rational& ca, const Rational& cb, const AugmentedExponent& rhs);

  const std::string& name() const { return name_; }
  const std::vector<LinearInequality>& rows() const { return rows_; }

  bool contains(const ExponentPoint& p) const;
  std::vector<ExponentPoint> vertices() const;
  // Extreme rays of the recession cone.
  std::vector<std::array<Rational, 2>> recession_rays() const;
  bool empty() const { return vertices().empty(); }

  ExponentPolytope intersected(const LinearInequality& row) const;
  std::string to_string() const;

 private:
  std::string name_;
  std::vector<LinearInequality> rows_;
};

// Parses comma-separated constraints such as "a<=25/31,b>=a/5+11/5". Each
// side is a linear expression in a, b with rational coefficients and the
// optional symbols Delta, delta, eps. Relations: <=, >=, =, <, > (strict
// relations are taken as their closures).
ExponentPolytope parse_region(std::string_view text, std::string name = "region");

// Supremum of a piecewise-linear objective over a polytope.
struct Maximum {
  AugmentedExponent value;
  ExponentPoint argmax;
  std::string term;
};

// Throws PreconditionError("unbounded bound") if some recession direction
// increases the objective, or if the region is empty.
Maximum maximize(const ExponentPolytope& region, const std::vector<LinearExponentForm>& terms,
                 const std::vector<std::string>& labels);

struct Lemma9Result {
  AugmentedExponent value;  // includes the eps slack
  std::string branch;       // "b>=3" or "b<=3"
  Maximum attained;
};

Lemma9Result lemma9_maximum(const ExponentPolytope& region);
AugmentedExponent lemma9_exponent(const ExponentPolytope& region);

// Lemma 6 error exponent max(A/2, (A+C-AB)/2) + eps.
AugmentedExponent lemma6_error_exponent(const AugmentedExponent& A, const Rational& B,
                                        const AugmentedExponent& C);

}  // namespace splitcubic
