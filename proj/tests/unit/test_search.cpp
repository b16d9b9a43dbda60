#include <numeric>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "splitcubic/search.hpp"

using namespace splitcubic;

namespace {

CubicForm diagonal(std::initializer_list<long> coeffs) {
  CubicForm f(static_cast<int>(coeffs.size()));
  int i = 0;
  for (long c : coeffs) {
    f.add_term(i, i, i, c);
    ++i;
  }
  return f;
}

long long value_ll(const CubicForm& f, const std::vector<long>& x) {
  long long s = 0;
  for (const auto& [t, c] : f.terms()) s += c.get_si() * x[t[0]] * x[t[1]] * x[t[2]];
  return s;
}

// |x_i| <= h for every i
BoxRegion cube_box(int n, std::int64_t h) { return BoxRegion::centered(n, 1.0, h + 1); }

}  // namespace

TEST_CASE("count examples") {
  const auto three = diagonal({1, 1, 1});
  for (auto m : {CountMethod::direct, CountMethod::meet_in_middle})
    CHECK(count_zeros_box(three, cube_box(3, 2), m).count == 13);
  for (std::int64_t P : {1, 5, 17}) CHECK(count_zeros_box(diagonal({1, 1}), cube_box(2, P)).count == 2 * P + 1);
  const auto mordell = make_mordell_form();
  const auto r = count_zeros_box(mordell, cube_box(9, 3));
  CHECK(r.method == CountMethod::meet_in_middle);
  CHECK(r.count == 1);
  CHECK(r.peak_table_entries > 0);
}

TEST_CASE("direct and meet-in-the-middle agree with brute force on random split forms") {
  std::mt19937_64 rng(201);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<int> sizes;
    int n = 0;
    while (n < 2 || (n < 6 && testing::uniform_int(rng, 0, 1))) {
      const int s = static_cast<int>(testing::uniform_int(rng, 1, std::min(3, 6 - n)));
      sizes.push_back(s);
      n += s;
    }
    const CubicForm f = testing::random_split_form(rng, sizes, 2, 3);
    const long h = n >= 5 ? testing::uniform_int(rng, 1, 3) : testing::uniform_int(rng, 1, 8);
    const auto box = cube_box(n, h);
    const auto a = count_zeros_box(f, box, CountMethod::direct).count;
    const auto b = count_zeros_box(f, box, CountMethod::meet_in_middle).count;
    CHECK(a == b);
    if (n <= 4) {
      std::uint64_t brute = 0;
      oracle::for_each_point(n, -h, h, [&](const std::vector<long>& x) { brute += value_ll(f, x) == 0; });
      CHECK(a == brute);
    }
    // odd forms: nonzero solutions pair up under x -> -x
    CHECK((a - 1) % 2 == 0);
    // growing the radius cannot lose solutions
    BoxRegion bigger = box;
    bigger.rho = 1.5;
    CHECK(count_zeros_box(f, bigger).count >= a);
  }
}

TEST_CASE("off-centre boxes and budgets") {
  const auto f = diagonal({1, -1, 2});
  BoxRegion box{{0.3, 0.3, -0.1}, 0.5, 10};
  CHECK(count_zeros_box(f, box, CountMethod::direct).count ==
        count_zeros_box(f, box, CountMethod::meet_in_middle).count);
  Budget tiny;
  tiny.points = 100;
  CHECK_THROWS_AS(count_zeros_box(f, cube_box(3, 10), CountMethod::direct, tiny), BudgetExceeded);
  Budget narrow;
  narrow.table_entries = 10;
  CHECK_THROWS_AS(count_zeros_box(f, cube_box(3, 10), CountMethod::meet_in_middle, narrow), BudgetExceeded);
}

TEST_CASE("find_point examples") {
  const auto two = find_point(diagonal({1, 1}), 5);
  REQUIRE(two.status == PointStatus::found);
  CHECK(*two.point == std::vector<std::int64_t>{1, -1});

  const auto four = find_point(diagonal({1, 1, 1, -3}), 2);
  REQUIRE(four.status == PointStatus::found);
  CHECK(*four.point == std::vector<std::int64_t>{0, 1, -1, 0});

  // x1^3 + 2 x2^3 + 4 x3^3 - 6 x1 x2 x3
  CubicForm norm(3);
  norm.add_term(0, 0, 0, 1);
  norm.add_term(1, 1, 1, 2);
  norm.add_term(2, 2, 2, 4);
  norm.add_term(0, 1, 2, -6);
  const auto none = find_point(norm, 50);
  CHECK(none.status == PointStatus::none_up_to_height);
  CHECK(none.completed_height == 50);
  CHECK_FALSE(none.point.has_value());

  Budget tiny;
  tiny.points = 1000;
  const auto cut = find_point(norm, 50, tiny);
  CHECK(cut.status == PointStatus::budget_exhausted);
  CHECK(cut.completed_height < 50);
}

TEST_CASE("find_point returns primitive zeros of minimal height") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const CubicForm f = testing::random_form(rng, 3, 3, 3);
    const auto r = find_point(f, 4);
    if (r.status != PointStatus::found) {
      std::uint64_t nonzero = 0;
      oracle::for_each_point(3, -4, 4, [&](const std::vector<long>& x) {
        nonzero += (x[0] || x[1] || x[2]) && value_ll(f, x) == 0;
      });
      CHECK(nonzero == 0);
      continue;
    }
    const auto& x = *r.point;
    std::vector<long> xl(x.begin(), x.end());
    CHECK(value_ll(f, xl) == 0);
    std::int64_t g = 0, h = 0;
    for (auto v : x) {
      g = std::gcd(g, v);
      h = std::max<std::int64_t>(h, std::abs(v));
    }
    CHECK(g == 1);
    // nothing of smaller height
    oracle::for_each_point(3, -(h - 1), h - 1, [&](const std::vector<long>& y) {
      if (y[0] || y[1] || y[2]) CHECK(value_ll(f, y) != 0);
    });
  }
}
