#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "detail.hpp"
#include "splitcubic/expsums.hpp"

namespace splitcubic {

namespace {

using Table = std::vector<std::pair<std::int64_t, std::uint64_t>>;  // sorted by value

Table sorted_table(const std::unordered_map<std::int64_t, std::uint64_t>& m) {
  Table t(m.begin(), m.end());
  std::sort(t.begin(), t.end());
  return t;
}

Table convolve(const Table& a, const Table& b, const Budget& budget) {
  std::unordered_map<std::int64_t, std::uint64_t> m;
  budget.require_entries(std::min(static_cast<double>(a.size()) * static_cast<double>(b.size()),
                                  static_cast<double>(a.back().first + b.back().first - a.front().first -
                                                      b.front().first + 1)),
                         "moment table");
  for (const auto& [va, ca] : a)
    for (const auto& [vb, cb] : b) m[va + vb] += ca * cb;
  return sorted_table(m);
}

// h^{*m}, the m-fold sum table
Table power(const Table& h, int m, const Budget& budget) {
  Table r{{0, 1}};
  for (int i = 0; i < m; ++i) r = convolve(r, h, budget);
  return r;
}

// sum over v of (a*b)(v)^2, accumulated window by window so no table for
// a*b is ever held
unsigned __int128 sum_of_squared_convolution(const Table& a, const Table& b, const Budget& budget) {
  const std::int64_t lo = a.front().first + b.front().first;
  const std::int64_t hi = a.back().first + b.back().first;
  const std::int64_t window =
      std::min<std::int64_t>(std::int64_t{1} << 22, std::max<std::int64_t>(1, static_cast<std::int64_t>(budget.table_entries)));
  std::vector<std::uint64_t> buf(static_cast<std::size_t>(std::min(window, hi - lo + 1)));
  std::vector<std::size_t> next(a.size(), 0);
  unsigned __int128 total = 0;
  for (std::int64_t w0 = lo; w0 <= hi; w0 += window) {
    const std::int64_t w1 = std::min(hi + 1, w0 + window);
    std::fill(buf.begin(), buf.end(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto [va, ca] = a[i];
      std::size_t j = next[i];
      while (j < b.size() && va + b[j].first < w1) {
        buf[static_cast<std::size_t>(va + b[j].first - w0)] += ca * b[j].second;
        ++j;
      }
      next[i] = j;
    }
    for (std::int64_t v = 0; v < w1 - w0; ++v) {
      const auto c = static_cast<unsigned __int128>(buf[static_cast<std::size_t>(v)]);
      total += c * c;
    }
  }
  return total;
}


}  // namespace

MomentResult moment_by_counting(const CubicForm& form, int k, std::int64_t P, const Budget& budget) {
  const int dim = form.n();
  if (dim < 1 || dim > 2) throw PreconditionError("moment_by_counting takes a 1- or 2-variable form");
  if (k < 2 || k % 2 != 0) throw PreconditionError("moment order k must be a positive even integer");
  if (P < 1) throw PreconditionError("moment_by_counting needs P >= 1");
  const int m = k / 2;
  const CompiledForm cf(form);
  if (!cf.safe_for_height(static_cast<double>(P)) || cf.value_bound(static_cast<double>(P)) * m > 4.0e18)
    throw PreconditionError("moment sums overflow 64-bit evaluation");
  const double points = std::pow(static_cast<double>(P), dim);
  budget.require_points(points, "moment_by_counting");
  budget.require_entries(points, "moment value table");

  std::unordered_map<std::int64_t, std::uint64_t> hm;
  detail::Odometer od{std::vector<std::int64_t>(dim, 1), std::vector<std::int64_t>(dim, P), {}};
  od.seek(0);
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(points); ++i, od.next()) ++hm[cf(od.x.data())];
  add_points_consumed(static_cast<std::uint64_t>(points));
  const Table h = sorted_table(hm);

  // total of each side is P^{dim m}; the squared sum must stay below 2^128
  if (std::log2(points) * (2.0 * m) >= 127.0) throw BudgetExceeded("moment count exceeds 128-bit accumulation");
  const Table left = power(h, m / 2, budget);
  const Table right = power(h, m - m / 2, budget);
  MomentResult r;
  r.k = k;
  r.P = P;
  r.count_value = from_u128(sum_of_squared_convolution(left, right, budget));
  r.note = std::to_string(m) + "+" + std::to_string(m) +
           " equation C(x_1)+...+C(x_m) = C(y_1)+...+C(y_m), every coordinate in [1, P]";
  return r;
}

}  // namespace splitcubic
