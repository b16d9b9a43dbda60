#include <random>

#include "doctest.h"
#include "splitcubic/forms.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace splitcubic;
using splitcubic::testing::random_form;
using splitcubic::testing::random_point;

namespace {

std::vector<std::int64_t> unit(int n, int i) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(n), 0);
  e[static_cast<std::size_t>(i)] = 1;
  return e;
}

CubicForm mordell_block() {
  CubicForm n1(3);
  n1.add_term(0, 0, 0, 1);
  n1.add_term(1, 1, 1, 2);
  n1.add_term(2, 2, 2, 4);
  n1.add_term(0, 1, 2, 1);
  return n1;
}

}  // namespace

TEST_CASE("evaluate reads coefficients of single monomials") {
  const CubicForm m = make_mordell_form();
  CHECK(evaluate(m, unit(9, 0)) == 1);
  CHECK(evaluate(m, unit(9, 3)) == 7);
  CubicForm cube(1);
  cube.add_term(0, 0, 0, 1);
  const std::vector<std::int64_t> two{2};
  CHECK(evaluate(cube, two) == 8);
  const std::vector<std::int64_t> wrong{1, 2};
  CHECK_THROWS_AS(evaluate(cube, wrong), PreconditionError);
}

TEST_CASE("gradient examples and Euler identity") {
  CubicForm c(2);
  c.add_term(0, 0, 0, 1);
  c.add_term(1, 1, 1, 1);
  const std::vector<std::int64_t> x{1, -1};
  CHECK(gradient(c, x) == std::vector<BigInt>{3, 3});
  const std::vector<std::int64_t> zero{0, 0};
  CHECK(gradient(c, zero) == std::vector<BigInt>{0, 0});

  const std::vector<std::int64_t> ones{1, 1, 1};
  CHECK(gradient(mordell_block(), ones) == std::vector<BigInt>{4, 7, 13});

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const CubicForm f = random_form(rng, n, 6, 9);
    const auto p = random_point(rng, n, 20);
    const auto g = gradient(f, p);
    BigInt dot = 0;
    for (int i = 0; i < n; ++i) dot += g[i] * BigInt(std::to_string(p[i]));
    CHECK(dot == 3 * evaluate(f, p));
  }
}

TEST_CASE("homogeneity of degree three") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const CubicForm f = random_form(rng, n, 8, 50);
    auto x = random_point(rng, n, 30);
    const long lambda = splitcubic::testing::uniform_int(rng, -7, 7);
    auto lx = x;
    for (auto& v : lx) v *= lambda;
    CHECK(evaluate(f, lx) == lambda * lambda * lambda * evaluate(f, x));
  }
}

TEST_CASE("hessian is symmetric") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const CubicForm f = random_form(rng, n, 7, 9);
    const auto h = hessian(f, random_point(rng, n, 9));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(h[i][j] == h[j][i]);
  }
}

TEST_CASE("hessian rank profile") {
  CubicForm cube(1);
  cube.add_term(0, 0, 0, 1);
  CHECK(hessian_rank_profile(cube, 2) == std::map<int, std::uint64_t>{{0, 1}, {1, 4}});

  SUBCASE("x1 x2 x3 against a rational-elimination oracle") {
    CubicForm f(3);
    f.add_term(0, 1, 2, 1);
    std::map<int, std::uint64_t> expected;
    oracle::for_each_point(3, -1, 1, [&](const std::vector<long>& x) {
      // H = [[0,x3,x2],[x3,0,x1],[x2,x1,0]]
      std::vector<std::vector<mpq_class>> m{
          {0, x[2], x[1]}, {x[2], 0, x[0]}, {x[1], x[0], 0}};
      ++expected[oracle::rational_rank(m)];
    });
    CHECK(hessian_rank_profile(f, 1) == expected);
    CHECK(expected[3] == 8);
  }

  SUBCASE("diagonal form: rank counts nonzero coordinates") {
    CubicForm d(3);
    for (int i = 0; i < 3; ++i) d.add_term(i, i, i, 1);
    const auto prof = hessian_rank_profile(d, 3);
    CHECK(prof.at(3) == 216);
    CHECK(prof.at(2) == 3 * 36);
    CHECK(prof.at(1) == 3 * 6);
    CHECK(prof.at(0) == 1);
  }

  SUBCASE("random forms agree with the oracle rank") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
      const CubicForm f = random_form(rng, 3, 5, 4);
      std::map<int, std::uint64_t> expected;
      oracle::for_each_point(3, -2, 2, [&](const std::vector<long>& x) {
        std::vector<std::int64_t> xi(x.begin(), x.end());
        const auto h = hessian(f, xi);
        std::vector<std::vector<mpq_class>> m(3, std::vector<mpq_class>(3));
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) m[i][j] = h[i][j];
        ++expected[oracle::rational_rank(m)];
      });
      CHECK(hessian_rank_profile(f, 2) == expected);
    }
  }

  CHECK_THROWS_AS(hessian_rank_profile(cube, 100, Budget{10, 10}), BudgetExceeded);
}

TEST_CASE("goodness ladder normalizes by H^r") {
  CubicForm d(2);
  d.add_term(0, 0, 0, 1);
  d.add_term(1, 1, 1, 1);
  const std::vector<int> ladder{2, 4, 8};
  const auto rows = goodness_ladder(d, ladder);
  REQUIRE(rows.size() == 3);
  // rank-2 count (2H)^2, so count/H^2 = 4 exactly
  for (const auto& row : rows) CHECK(row.normalized.at(2) == doctest::Approx(4.0));
}

TEST_CASE("split components") {
  const auto s = split_components(make_mordell_form());
  REQUIRE(s.blocks.size() == 3);
  CHECK(s.blocks[0] == std::vector<int>{0, 1, 2});
  CHECK(s.blocks[1] == std::vector<int>{3, 4, 5});
  CHECK(s.blocks[2] == std::vector<int>{6, 7, 8});
  CHECK(s.subforms[1] == mordell_block().scaled(7));

  CubicForm two(2);
  two.add_term(0, 0, 0, 1);
  two.add_term(1, 1, 1, 1);
  CHECK(split_components(two).blocks.size() == 2);

  CubicForm joined(2);
  joined.add_term(0, 0, 1, 1);
  joined.add_term(1, 1, 1, 1);
  CHECK(split_components(joined).blocks.size() == 1);

  CubicForm unused(3);
  unused.add_term(0, 0, 0, 1);
  const auto u = split_components(unused);
  REQUIRE(u.blocks.size() == 3);
  CHECK(u.subforms[1].is_zero());

  SUBCASE("no monomial crosses blocks and reassembly round-trips") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 100; ++trial) {
      const CubicForm f = random_form(rng, 1 + trial % 7, 1 + trial % 5, 5);
      const auto sp = split_components(f);
      std::vector<int> owner(f.n(), -1);
      for (std::size_t b = 0; b < sp.blocks.size(); ++b)
        for (int v : sp.blocks[b]) owner[v] = static_cast<int>(b);
      for (const auto& [t, c] : f.terms()) {
        CHECK(owner[t[0]] == owner[t[1]]);
        CHECK(owner[t[1]] == owner[t[2]]);
      }
      CHECK(sp.reassemble(f.n()) == f);
    }
  }
}

TEST_CASE("norm forms") {
  const CubicForm n2 = make_norm_form({BigInt(-2), BigInt(0), BigInt(0)});
  CubicForm expected(3);
  expected.add_term(0, 0, 0, 1);
  expected.add_term(1, 1, 1, 2);
  expected.add_term(2, 2, 2, 4);
  expected.add_term(0, 1, 2, -6);
  CHECK(n2 == expected);

  // theta^3 - theta - 1
  const CubicForm n3 = make_norm_form({BigInt(-1), BigInt(-1), BigInt(0)});
  const std::vector<std::int64_t> one{1, 0, 0};
  CHECK(evaluate(n3, one) == 1);

  SUBCASE("determinant oracle at sample points") {
    // Independent: numeric 3x3 determinant of multiplication-by-alpha.
    std::mt19937_64 rng(16);
    const long c0 = -1, c1 = -1;  // theta^3 = theta + 1
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_point(rng, 3, 6);
      // alpha*theta^j coordinates via theta^3 = -c1 theta - c0
      auto mul_theta = [&](std::array<long, 3> a) {
        return std::array<long, 3>{-c0 * a[2], a[0] - c1 * a[2], a[1]};
      };
      std::array<long, 3> col0{x[0], x[1], x[2]};
      auto col1 = mul_theta(col0), col2 = mul_theta(col1);
      const long det = col0[0] * (col1[1] * col2[2] - col2[1] * col1[2]) -
                       col1[0] * (col0[1] * col2[2] - col2[1] * col0[2]) +
                       col2[0] * (col0[1] * col1[2] - col1[1] * col0[2]);
      CHECK(evaluate(n3, x) == det);
    }
  }

  SUBCASE("multiplicativity for theta^3 = 2") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_point(rng, 3, 5), b = random_point(rng, 3, 5);
      // (a0 + a1 t + a2 t^2)(b0 + b1 t + b2 t^2) with t^3 = 2, t^4 = 2t
      std::vector<std::int64_t> prod{
          a[0] * b[0] + 2 * (a[1] * b[2] + a[2] * b[1]),
          a[0] * b[1] + a[1] * b[0] + 2 * a[2] * b[2],
          a[0] * b[2] + a[1] * b[1] + a[2] * b[0]};
      CHECK(evaluate(n2, prod) == evaluate(n2, a) * evaluate(n2, b));
    }
  }

  SUBCASE("anisotropic up to height 50") {
    const CompiledForm cf(n2);
    long zeros = 0;
    oracle::for_each_point(3, -50, 50, [&](const std::vector<long>& x) {
      const std::int64_t xi[3] = {x[0], x[1], x[2]};
      if (cf(xi) == 0) ++zeros;
    });
    CHECK(zeros == 1);
  }

  CHECK_THROWS_AS(make_norm_form({BigInt(-1), BigInt(0), BigInt(0)}), PreconditionError);  // t^3-1
  CHECK_THROWS_AS(make_norm_form({BigInt(0), BigInt(1), BigInt(0)}), PreconditionError);   // t^3+t
  CHECK_THROWS_AS(make_norm_form({BigInt(6), BigInt(-5), BigInt(-2)}), PreconditionError); // (t-1)(t+2)(t-3)
}

TEST_CASE("Mordell form") {
  const CubicForm m = make_mordell_form();
  CHECK(m.size() == 12);
  CHECK(m.coefficient(4, 4, 4) == 14);
  CHECK(m.coefficient(6, 7, 8) == 49);
  const auto s = split_components(m);
  REQUIRE(s.blocks.size() == 3);
  for (const auto& b : s.blocks) CHECK(b.size() == 3);
}

TEST_CASE("degeneracy witnesses") {
  CubicForm a(2);
  a.add_term(0, 0, 0, 1);
  CHECK(is_degenerate(a) == std::vector<BigInt>{0, 1});

  CubicForm b(2);
  b.add_term(0, 0, 0, 1);
  b.add_term(1, 1, 1, 1);
  CHECK_FALSE(is_degenerate(b).has_value());

  // (x1 + x2)^3
  CubicForm c(2);
  c.add_term(0, 0, 0, 1);
  c.add_term(0, 0, 1, 3);
  c.add_term(0, 1, 1, 3);
  c.add_term(1, 1, 1, 1);
  const auto w = is_degenerate(c);
  REQUIRE(w.has_value());
  CHECK(*w == std::vector<BigInt>{1, -1});

  SUBCASE("witness annihilates the gradient at random points") {
    std::mt19937_64 rng(18);
    // (x1 + 2x2 - x3)^3 + x4^3 in 4 variables: invariant along (2,-1,0,0) etc.
    CubicForm f(4);
    const long l[3] = {1, 2, -1};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) f.add_term(i, j, k, l[i] * l[j] * l[k]);
    f.add_term(3, 3, 3, 1);
    const auto v = is_degenerate(f);
    REQUIRE(v.has_value());
    for (int trial = 0; trial < 30; ++trial) {
      const auto g = gradient(f, random_point(rng, 4, 10));
      BigInt dot = 0;
      for (int i = 0; i < 4; ++i) dot += g[i] * (*v)[i];
      CHECK(dot == 0);
    }
  }
}

TEST_CASE("form JSON interchange") {
  const CubicForm m = make_mordell_form();
  const auto doc = form_to_json(m);
  CHECK(doc["n"] == 9);
  CHECK(doc["monomials"].size() == 12);
  CHECK(form_from_json(doc) == m);
  CHECK_THROWS_AS(form_from_json(nlohmann::json::parse(R"({"n":2,"monomials":[[2,1,1,1]]})")),
                  PreconditionError);
  CHECK_THROWS_AS(form_from_json(nlohmann::json::parse(R"({"n":2,"monomials":[[1,1,3,1]]})")),
                  PreconditionError);
  CHECK_THROWS_AS(form_from_json(nlohmann::json::parse(R"({"n":2,"monomials":[[1,1,1,0]]})")),
                  PreconditionError);
  // big coefficients travel as strings
  CubicForm big(1);
  big.add_term(0, 0, 0, BigInt("123456789012345678901234567890"));
  CHECK(form_from_json(form_to_json(big)) == big);
}
