#include "splitcubic/core.hpp"

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <limits>

namespace splitcubic {

namespace {
std::atomic<std::uint64_t> g_points{0};
}

Budget Budget::from_environment() {
  Budget b;
  if (const char* env = std::getenv("SPLITCUBIC_BUDGET"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) b.points = v;
  }
  return b;
}

void Budget::require_points(double needed, std::string_view what) const {
  if (needed > static_cast<double>(points)) {
    throw BudgetExceeded(std::string(what) + ": needs ~" + std::to_string(needed) +
                         " evaluations, budget is " + std::to_string(points));
  }
}

void Budget::require_entries(double needed, std::string_view what) const {
  if (needed > static_cast<double>(table_entries)) {
    throw BudgetExceeded(std::string(what) + ": needs ~" + std::to_string(needed) +
                         " table entries, cap is " + std::to_string(table_entries));
  }
}

std::uint64_t points_consumed() { return g_points.load(std::memory_order_relaxed); }
void add_points_consumed(std::uint64_t n) { g_points.fetch_add(n, std::memory_order_relaxed); }
void reset_points_consumed() { g_points.store(0, std::memory_order_relaxed); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw PreconditionError("empty rational");
  const auto slash = s.find('/');
  auto check_int = [](const std::string& part) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!check_int(num) || !check_int(den))
    throw PreconditionError("not an exact rational (expected p/q): " + s);
  if (num[0] == '+') num = num.substr(1);
  if (den[0] == '+') den = den.substr(1);
  BigInt p(num), q(den);
  if (q == 0) throw PreconditionError("zero denominator: " + s);
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t checked_pow(std::uint64_t a, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (a != 0 && r > std::numeric_limits<std::uint64_t>::max() / a)
      throw BudgetExceeded("integer power overflows 64 bits");
    r *= a;
  }
  return r;
}

BigInt from_u128(unsigned __int128 v) {
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

}  // namespace splitcubic
