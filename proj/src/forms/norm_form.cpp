#include <array>

#include "splitcubic/forms.hpp"

namespace splitcubic {

BigInt NumberFieldSpec::discriminant() const {
  // disc(t^3 + b t^2 + c t + d) = b^2c^2 - 4c^3 - 4b^3d - 27d^2 + 18bcd
  const BigInt& b = c2;
  const BigInt& c = c1;
  const BigInt& d = c0;
  return b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
}

void NumberFieldSpec::validate() const {
  auto f = [&](const BigInt& t) -> BigInt { return t * t * t + c2 * t * t + c1 * t + c0; };
  if (c0 == 0) throw PreconditionError("cubic has the root 0; not irreducible");
  // Rational roots of a monic integer polynomial are integers dividing c0.
  const BigInt a = abs(c0);
  for (BigInt d = 1; d * d <= a; ++d) {
    if (a % d != 0) continue;
    for (const BigInt& cand : {d, BigInt(-d), BigInt(a / d), BigInt(-(a / d))})
      if (f(cand) == 0)
        throw PreconditionError("cubic has the integer root " + cand.get_str() +
                                "; not irreducible");
  }
  if (discriminant() == 0) throw PreconditionError("cubic has vanishing discriminant");
}

CubicForm make_norm_form(const NumberFieldSpec& spec) {
  spec.validate();
  // A linear form in (x1,x2,x3) is stored as its three coefficients.
  using Linear = std::array<BigInt, 3>;
  using Coords = std::array<Linear, 3>;  // element of K in basis 1, theta, theta^2
  // multiplication by theta: (a0,a1,a2) -> (-c0 a2, a0 - c1 a2, a1 - c2 a2)
  auto times_theta = [&](const Coords& e) {
    Coords r;
    for (int v = 0; v < 3; ++v) {
      r[0][v] = -spec.c0 * e[2][v];
      r[1][v] = e[0][v] - spec.c1 * e[2][v];
      r[2][v] = e[1][v] - spec.c2 * e[2][v];
    }
    return r;
  };
  Coords col0;
  for (int i = 0; i < 3; ++i)
    for (int v = 0; v < 3; ++v) col0[i][v] = (i == v) ? 1 : 0;
  const Coords col1 = times_theta(col0);
  const Coords col2 = times_theta(col1);
  const std::array<Coords, 3> cols{col0, col1, col2};

  CubicForm out(3);
  // det M = sum over permutations s of sign(s) * M[s0][0] M[s1][1] M[s2][2]
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  const int sign[6] = {1, 1, 1, -1, -1, -1};
  for (int s = 0; s < 6; ++s) {
    const Linear& l0 = cols[0][perms[s][0]];
    const Linear& l1 = cols[1][perms[s][1]];
    const Linear& l2 = cols[2][perms[s][2]];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const BigInt c = l0[i] * l1[j] * l2[k];
          if (c != 0) out.add_term(i, j, k, sign[s] * c);
        }
  }
  return out;
}

}  // namespace splitcubic
