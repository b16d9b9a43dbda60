#include "splitcubic/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace splitcubic {

namespace {

using ValueTable = std::unordered_map<std::int64_t, std::uint64_t>;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw BudgetExceeded("multiplicity overflow in value table");
  return r;
}

struct Enumerator {
  std::vector<std::int64_t> lo, hi, x;
  bool first = true;

  bool next() {
    if (first) {
      first = false;
      x = lo;
      for (std::size_t i = 0; i < lo.size(); ++i)
        if (hi[i] < lo[i]) return false;
      return true;
    }
    for (std::size_t i = x.size(); i-- > 0;) {
      if (++x[i] <= hi[i]) return true;
      x[i] = lo[i];
    }
    return false;
  }
};

ValueTable block_table(const CubicForm& sub, const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi) {
  ValueTable t;
  const CompiledForm cf(sub);
  Enumerator e{lo, hi, {}};
  std::uint64_t n = 0;
  while (e.next()) {
    ++t[cf(e.x.data())];
    ++n;
  }
  add_points_consumed(n);
  return t;
}

struct Measured {
  ValueTable table;
  double max_abs = 0;
};

BigInt count_meet_in_middle(const CubicForm& form, const BoxRegion& box, const Budget& budget,
                            std::uint64_t& peak) {
  const SplitStructure split = split_components(form);
  double points = 0;
  for (const auto& b : split.blocks) {
    double t = 1;
    for (int v : b) t *= static_cast<double>(box.width(v));
    points += t;
    budget.require_entries(t, "block value table");
  }
  budget.require_points(points, "meet-in-the-middle block tables");

  std::vector<Measured> tables;
  for (std::size_t b = 0; b < split.blocks.size(); ++b) {
    std::vector<std::int64_t> lo, hi;
    for (int v : split.blocks[b]) {
      lo.push_back(box.lo(v));
      hi.push_back(box.hi(v));
    }
    Measured m{block_table(split.subforms[b], lo, hi), 0};
    if (m.table.empty()) return 0;
    for (const auto& [v, c] : m.table) m.max_abs = std::max(m.max_abs, std::abs(static_cast<double>(v)));
    peak = std::max<std::uint64_t>(peak, m.table.size());
    tables.push_back(std::move(m));
  }

  // merge the two smallest tables until two remain, then join on C1 = -C2
  auto by_size = [](const Measured& a, const Measured& b) { return a.table.size() > b.table.size(); };
  while (tables.size() > 2) {
    std::sort(tables.begin(), tables.end(), by_size);
    Measured b = std::move(tables.back());
    tables.pop_back();
    Measured a = std::move(tables.back());
    tables.pop_back();
    const double bound = static_cast<double>(a.table.size()) * static_cast<double>(b.table.size());
    budget.require_entries(std::min(bound, 2 * (a.max_abs + b.max_abs) + 1), "merged value table");
    Measured m;
    m.max_abs = a.max_abs + b.max_abs;
    m.table.reserve(static_cast<std::size_t>(std::min(bound, 2 * m.max_abs + 1)));
    for (const auto& [va, ca] : a.table)
      for (const auto& [vb, cb] : b.table) m.table[va + vb] += checked_mul(ca, cb);
    peak = std::max<std::uint64_t>(peak, m.table.size());
    tables.push_back(std::move(m));
  }
  if (tables.size() == 1) {
    auto it = tables[0].table.find(0);
    return it == tables[0].table.end() ? BigInt(0) : BigInt(static_cast<unsigned long>(it->second));
  }
  const ValueTable& small = tables[0].table.size() <= tables[1].table.size() ? tables[0].table : tables[1].table;
  const ValueTable& large = &small == &tables[0].table ? tables[1].table : tables[0].table;
  unsigned __int128 acc = 0;
  for (const auto& [v, c] : small) {
    auto it = large.find(-v);
    if (it != large.end()) acc += static_cast<unsigned __int128>(c) * it->second;
  }
  return from_u128(acc);
}

BigInt count_direct(const CubicForm& form, const BoxRegion& box, const Budget& budget) {
  budget.require_points(box.lattice_points(), "direct zero count");
  const CompiledForm cf(form);
  Enumerator e;
  for (int i = 0; i < box.n(); ++i) {
    e.lo.push_back(box.lo(i));
    e.hi.push_back(box.hi(i));
  }
  std::uint64_t zeros = 0, n = 0;
  while (e.next()) {
    if (cf(e.x.data()) == 0) ++zeros;
    ++n;
  }
  add_points_consumed(n);
  return BigInt(static_cast<unsigned long>(zeros));
}

}  // namespace

const char* method_name(CountMethod m) {
  switch (m) {
    case CountMethod::direct:
      return "direct";
    case CountMethod::meet_in_middle:
      return "meet-in-middle";
    default:
      return "automatic";
  }
}

CountReport count_zeros_box(const CubicForm& form, const BoxRegion& box, CountMethod method, const Budget& budget) {
  if (box.n() != form.n()) throw PreconditionError("box dimension does not match the form");
  const auto t0 = std::chrono::steady_clock::now();
  const double height = static_cast<double>(box.max_abs_coordinate());
  const CompiledForm cf(form);
  if (!cf.safe_for_height(height)) throw PreconditionError("form values on this box overflow 64-bit evaluation");
  if (method == CountMethod::automatic)
    method = split_components(form).blocks.size() >= 2 ? CountMethod::meet_in_middle : CountMethod::direct;
  CountReport r;
  r.P = box.P;
  r.box = box;
  r.method = method;
  if (box.lattice_points() == 0) {
    r.count = 0;
  } else if (method == CountMethod::direct) {
    r.count = count_direct(form, box, budget);
  } else {
    r.count = count_meet_in_middle(form, box, budget, r.peak_table_entries);
  }
  r.elapsed = std::chrono::steady_clock::now() - t0;
  return r;
}

PointSearchResult find_point(const CubicForm& form, std::int64_t height_max, const Budget& budget) {
  if (height_max < 0) throw PreconditionError("height_max must be non-negative");
  const int n = form.n();
  const CompiledForm cf(form);
  if (!cf.safe_for_height(static_cast<double>(height_max)))
    throw PreconditionError("form values overflow 64-bit evaluation at this height");
  PointSearchResult res;
  std::uint64_t used = 0;
  std::vector<std::int64_t> x(static_cast<std::size_t>(n));
  for (std::int64_t h = 1; h <= height_max; ++h) {
    // shell size (2h+1)^n - (2h-1)^n, halved by the sign normalization
    const double shell = 0.5 * (std::pow(2.0 * h + 1, n) - std::pow(2.0 * h - 1, n));
    if (static_cast<double>(used) + shell > static_cast<double>(budget.points)) {
      res.status = PointStatus::budget_exhausted;
      add_points_consumed(used);
      return res;
    }
    // lexicographic walk: until the first nonzero coordinate, only 0..h;
    // afterwards -h..h
    bool found = false;
    auto recurse = [&](auto&& self, int i, bool leading_zero, bool on_shell) -> void {
      if (found) return;
      if (i == n) {
        if (leading_zero || !on_shell) return;
        ++used;
        if (cf(x.data()) != 0) return;
        std::int64_t g = 0;
        for (auto v : x) g = std::gcd(g, v);
        if (g != 1) return;
        found = true;
        return;
      }
      const std::int64_t start = leading_zero ? 0 : -h;
      for (std::int64_t v = start; v <= h && !found; ++v) {
        x[i] = v;
        self(self, i + 1, leading_zero && v == 0, on_shell || std::abs(v) == h);
      }
    };
    recurse(recurse, 0, true, false);
    if (found) {
      res.status = PointStatus::found;
      res.point = x;
      res.completed_height = h - 1;
      add_points_consumed(used);
      return res;
    }
    res.completed_height = h;
  }
  res.status = PointStatus::none_up_to_height;
  add_points_consumed(used);
  return res;
}

}  // namespace splitcubic
