#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace splitcubic {

using BigInt = mpz_class;
using Rational = mpq_class;

// Raised when an operation's precondition is violated (CLI exit code 2).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an enumeration would exceed the configured budget (exit code 3).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration caps. `points` bounds form evaluations, `table_entries` bounds
// the size of any value-multiplicity table held in memory.
struct Budget {
  std::uint64_t points = 1'000'000'000ULL;
  std::uint64_t table_entries = 100'000'000ULL;

  // Reads SPLITCUBIC_BUDGET (points) if set, otherwise the defaults above.
  static Budget from_environment();

  void require_points(double needed, std::string_view what) const;
  void require_entries(double needed, std::string_view what) const;
};

// Process-wide count of form evaluations, reported in run manifests.
std::uint64_t points_consumed();
void add_points_consumed(std::uint64_t n);
void reset_points_consumed();

// Parses "p/q" or "p". Decimal notation is refused so that every symbolic
// path stays exact end to end.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

BigInt gcd(const BigInt& a, const BigInt& b);
bool is_prime(std::uint64_t p);

BigInt from_u128(unsigned __int128 v);

// a**e with exact integer arithmetic; throws on overflow of uint64.
std::uint64_t checked_pow(std::uint64_t a, unsigned e);

}  // namespace splitcubic
