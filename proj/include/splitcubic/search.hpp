#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitcubic/expsums.hpp"
#include "splitcubic/forms.hpp"

namespace splitcubic {

enum class CountMethod { automatic, direct, meet_in_middle };

const char* method_name(CountMethod m);

struct CountReport {
  std::int64_t P = 0;
  BoxRegion box;
  BigInt count;
  CountMethod method = CountMethod::direct;
  std::chrono::duration<double> elapsed{0};
  std::uint64_t peak_table_entries = 0;
};

// #{x in box lattice : C(x) = 0}. `automatic` uses meet-in-the-middle when
// the form has at least two split blocks, direct enumeration otherwise.
CountReport count_zeros_box(const CubicForm& form, const BoxRegion& box, CountMethod method = CountMethod::automatic,
                            const Budget& budget = Budget::from_environment());

enum class PointStatus { found, none_up_to_height, budget_exhausted };

struct PointSearchResult {
  PointStatus status = PointStatus::none_up_to_height;
  std::optional<std::vector<std::int64_t>> point;
  std::int64_t completed_height = 0;  // every shell up to this height was searched
};

// Nonzero primitive zero of least sup norm <= height_max; among those the
// lexicographically smallest after fixing the sign so the first nonzero
// coordinate is positive.
PointSearchResult find_point(const CubicForm& form, std::int64_t height_max,
                             const Budget& budget = Budget::from_environment());

}  // namespace splitcubic
