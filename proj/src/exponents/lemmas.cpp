#include <algorithm>
#include <sstream>

#include "splitcubic/exponents.hpp"

namespace splitcubic {

namespace {

using AE = AugmentedExponent;

void require_nonnegative(const AE& x, const char* what) {
  if (x < AE(0)) throw PreconditionError(std::string(what) + " must be >= 0");
}

}  // namespace

Lemma8Params lemma8_params(const Rational& n, const Rational& t, const Rational& lambda) {
  if (n < 6) throw PreconditionError("lemma8_params requires n >= 6");
  const Rational q1 = n * n - 5 * n + 2;
  if (q1 == 0) throw PreconditionError("lemma8_params requires n^2 - 5n + 2 != 0");
  if (n == 4) throw PreconditionError("lemma8_params requires n != 4");

  Lemma8Params p;
  p.n = n;
  p.t = t;
  p.lambda = lambda;
  p.rho0 = Rational(2) / n;
  p.pi0 = (-2 * lambda + 2 * t + 4 * n - 3) / n;
  p.rho1 = n * (n - 5) / q1;
  p.pi1 = -2 * (n * n - 2 * n * (lambda - t - 1) - 2) / q1;
  p.rho2 = (n - 8) / (n - 4);
  p.pi2 = (8 * lambda - 5 * n - 8 * t) / (n - 4);
  p.upsilon = (-6 * lambda + 6 * t + 6 * n - 3) / (n - 1);
  const Rational gap = p.rho1 - p.rho0;
  if (gap == 0) throw PreconditionError("lemma8_params: rho1 = rho0");
  p.xi = (p.pi0 - p.pi1) / gap;
  const Rational inverse = Rational(1) / abs(gap);
  p.c = std::max(inverse, Rational(1));
  return p;
}

bool ConditionReport::holds_for_part_i() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ConditionEntry& e) { return e.only_for_part_ii || e.holds(); });
}

bool ConditionReport::holds_for_part_ii() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ConditionEntry& e) { return e.holds(); });
}

ConditionReport check_conditions(const Lemma8Params& p, const Rational& v) {
  if (v <= 0) throw PreconditionError("check_conditions requires v > 0");
  const Rational& n = p.n;
  const Rational& t = p.t;
  const Rational& L = p.lambda;
  const Rational w = Rational(1) / v + n / 8;
  ConditionReport r;
  r.entries[0] = {"3/2 - Upsilon > 0", Rational(3, 2) - p.upsilon, true, false};
  r.entries[1] = {"Lambda - t - 3/2 > 0", L - t - Rational(3, 2), true, false};
  r.entries[2] = {"Lambda - t - n/2 > 0", L - t - n / 2, true, false};
  r.entries[3] = {"2Lambda - 2t - n - 2Upsilon + 3 > 0", 2 * L - 2 * t - n - 2 * p.upsilon + 3,
                  true, false};
  r.entries[4] = {"10Lambda - 10t - 8n + 3 >= 0", 10 * L - 10 * t - 8 * n + 3, false, false};
  r.entries[5] = {"Lambda - (2/v + n/8 - rho1(1/v + n/8))Xi - n - t + pi1(1/v + n/8) > 0",
                  L - (Rational(2) / v + n / 8 - p.rho1 * w) * p.xi - n - t + p.pi1 * w, true,
                  false};
  r.entries[6] = {"pi2 - 3 >= 0", p.pi2 - 3, false, true};
  for (auto& e : r.entries) e.value.canonicalize();
  return r;
}

namespace {

// n + t - (3 - C)(1/v + n/8) + A(2/v + n/8 - B(1/v + n/8))
AE lemma7_first(const Rational& n, const Rational& v, const AE& t, const AE& A, const Rational& B,
                const AE& C) {
  const Rational w = Rational(1) / v + n / 8;
  return AE(n) + t - (AE(3) - C) * w + A * (Rational(2) / v + n / 8 - B * w);
}

AE lemma7_case_small(const Rational& n, const Rational& v, const AE& t, const AE& A,
                     const Rational& B, const AE& C) {
  const Rational w = Rational(1) / v - n / 8;
  const AE alt = -(AE(3) - C) * w + A * (Rational(2) / v - n / 8 - B * w);
  return AE(Rational(5, 8) * n) + t + min(A * (n / 8), alt);
}

AE lemma7_case_middle(const Rational& n, const Rational& v, const AE& t, const AE& A) {
  return AE(n) + t - AE(Rational(3) / v) + A * (Rational(2) / v - n / 8);
}

AE lemma7_case_large(const Rational& n, const Rational& v, const AE& t) {
  return AE(n) + t - AE(Rational(3) / v);
}

void lemma7_preconditions(const Rational& n, const Rational& v, const AE& A, const Rational& B,
                          const AE& C) {
  if (v <= 0) throw PreconditionError("Lemma 7 requires v > 0");
  if (n < 1) throw PreconditionError("Lemma 7 requires n >= 1");
  require_nonnegative(A, "A");
  require_nonnegative(AE(B), "B");
  require_nonnegative(C, "C");
}

}  // namespace

Lemma7Terms lemma7_terms(const Rational& n, const Rational& v, const AE& t, const AE& A,
                         const Rational& B, const AE& C) {
  lemma7_preconditions(n, v, A, B, C);
  Lemma7Terms out;
  out.first = lemma7_first(n, v, t, A, B, C);
  const Rational nv = n * v;
  auto candidate = [&](int which) -> AE {
    switch (which) {
      case 0: return max(out.first, lemma7_case_small(n, v, t, A, B, C));
      case 1: return max(out.first, lemma7_case_middle(n, v, t, A));
      default: return max(out.first, lemma7_case_large(n, v, t));
    }
  };
  auto second_of = [&](int which) -> AE {
    switch (which) {
      case 0: return lemma7_case_small(n, v, t, A, B, C);
      case 1: return lemma7_case_middle(n, v, t, A);
      default: return lemma7_case_large(n, v, t);
    }
  };
  int pick;
  if (nv == 8 || nv == 16) {
    const int lo = (nv == 8) ? 0 : 1;
    pick = (candidate(lo + 1) < candidate(lo)) ? lo + 1 : lo;
    out.regime = (nv == 8) ? "nv=8" : "nv=16";
  } else if (nv < 8) {
    pick = 0;
    out.regime = "nv<=8";
  } else if (nv < 16) {
    pick = 1;
    out.regime = "8<=nv<=16";
  } else {
    pick = 2;
    out.regime = "nv>=16";
  }
  out.second = second_of(pick);
  out.bound = max(out.first, out.second) + AE::epsilon();
  return out;
}

AE lemma7_bound(const Rational& n, const Rational& v, const AE& t, const AE& A, const Rational& B,
                const AE& C) {
  return lemma7_terms(n, v, t, A, B, C).bound;
}

Lemma7Terms remark14_terms(const Rational& n, const Rational& v, const AE& t, const AE& A,
                           const Rational& B, const AE& C) {
  lemma7_preconditions(n, v, A, B, C);
  if (n * v <= 16) throw PreconditionError("the sharpened Lemma 7 bound requires nv > 16");
  Lemma7Terms out;
  out.first = lemma7_first(n, v, t, A, B, C);
  out.second = AE(n) + t - AE(Rational(3) / v) - AE::Delta(n / 8 - Rational(2) / v);
  out.regime = "nv>16";
  out.bound = max(out.first, out.second) + AE::epsilon();
  return out;
}

AE remark14_bound(const Rational& n, const Rational& v, const AE& t, const AE& A, const Rational& B,
                  const AE& C) {
  return remark14_terms(n, v, t, A, B, C).bound;
}

AE lemma4_bound(const Rational& n, const Rational& v, const Rational& a, const Rational& b,
                const Rational& h) {
  if (h < 0 || h > 1) throw PreconditionError("Lemma 4 requires 0 <= h <= 1");
  if (a < 0 || a > Rational(3, 2)) throw PreconditionError("Lemma 4 requires 0 <= a <= 3/2");
  if (b < 2 * a) throw PreconditionError("Lemma 4 requires b >= 2a (phi <= R^-2)");
  if (v <= 0) throw PreconditionError("Lemma 4 requires v > 0");
  if (n < 1) throw PreconditionError("Lemma 4 requires n >= 1");
  // Exponents of psi_H = phi + 1/(P^2 H) and of the three terms in F.
  const Rational psi = std::max(Rational(-b), Rational(-2 - h));
  const Rational f = std::max<Rational>({Rational(0), n / 2 * (a + 3 * h + psi),
                               n * h - n / 2 * a - (n - 2) / 2 * (2 + psi)});
  const Rational half_v = v / 2;
  AE second(2 * a - b * (1 - half_v) + half_v * (psi + 2 * n - 1 - (n - 1) * h + f));
  second.eps = half_v;
  return max(AE(3), second);
}

AE lemma6_error_exponent(const AE& A, const Rational& B, const AE& C) {
  require_nonnegative(A, "A");
  require_nonnegative(AE(B), "B");
  require_nonnegative(C, "C");
  if (AE(1) < A || B > 1) throw PreconditionError("Lemma 6 requires A, B <= 1");
  return max(A / 2, (A + C - A * B) / 2) + AE::epsilon();
}

LinearExponentForm::LinearExponentForm(AE constant, std::map<char, Rational> coefficients)
    : constant_(std::move(constant)), coefficients_(std::move(coefficients)) {
  for (const auto& [var, c] : coefficients_)
    if (var != 'a' && var != 'b' && var != 'h')
      throw PreconditionError(std::string("unknown exponent variable '") + var + "'");
}

Rational LinearExponentForm::coefficient(char var) const {
  auto it = coefficients_.find(var);
  return it == coefficients_.end() ? Rational(0) : it->second;
}

AE LinearExponentForm::evaluate(const std::map<char, AE>& point) const {
  AE out = constant_;
  for (const auto& [var, c] : coefficients_) {
    if (c == 0) continue;
    auto it = point.find(var);
    if (it == point.end())
      throw PreconditionError(std::string("no value for exponent variable '") + var + "'");
    out += it->second * c;
  }
  return out;
}

std::string LinearExponentForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [var, c] : coefficients_) {
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const Rational mag = abs(c);
    if (mag != 1) os << mag.get_str() << "*";
    os << var;
    first = false;
  }
  if (first) return constant_.to_string();
  if (constant_ != AE(0)) {
    if (constant_ < AE(0)) os << " - " << (-constant_).to_string();
    else os << " + " << constant_.to_string();
  }
  return os.str();
}

}  // namespace splitcubic
