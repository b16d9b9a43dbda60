#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

namespace splitcubic::detail {

inline constexpr std::size_t kChunk = 4096;

// Sums in a fixed binary tree over the index order, so the result does not
// depend on how chunks were distributed across threads.
inline std::complex<double> pairwise_sum(std::vector<std::complex<double>> v) {
  if (v.empty()) return {0.0, 0.0};
  while (v.size() > 1) {
    std::size_t half = (v.size() + 1) / 2;
    for (std::size_t i = 0; i < v.size() / 2; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (v.size() % 2 == 1) v[v.size() / 2] = v.back();
    v.resize(half);
  }
  return v[0];
}

// chunk(i) -> complex evaluated for every i < chunks; threads take strided
// chunk ids and the partial results are reduced by pairwise_sum.
template <class F>
std::complex<double> chunked_reduce(std::size_t chunks, int threads, F&& chunk) {
  std::vector<std::complex<double>> parts(chunks);
  const auto t = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (t == 1 || chunks < 2) {
    for (std::size_t i = 0; i < chunks; ++i) parts[i] = chunk(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(t, chunks); ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < chunks; i += t) parts[i] = chunk(i);
      });
    for (auto& th : pool) th.join();
  }
  return pairwise_sum(std::move(parts));
}

// exact frac(x * c) with the rounding error of the product recovered by FMA
inline double frac_product(double x, double c) {
  const double p = x * c;
  const double e = std::fma(x, c, -p);
  double f = p - std::floor(p);
  f += e;
  return f - std::floor(f);
}

// Mixed-radix enumeration of a product of integer ranges.
struct Odometer {
  std::vector<std::int64_t> lo, width, x;

  void seek(std::uint64_t index) {
    x.resize(lo.size());
    for (std::size_t i = lo.size(); i-- > 0;) {
      const auto w = static_cast<std::uint64_t>(width[i]);
      x[i] = lo[i] + static_cast<std::int64_t>(index % w);
      index /= w;
    }
  }
  void next() {
    for (std::size_t i = lo.size(); i-- > 0;) {
      if (++x[i] < lo[i] + width[i]) return;
      x[i] = lo[i];
    }
  }
};

}  // namespace splitcubic::detail
