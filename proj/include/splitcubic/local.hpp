#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "splitcubic/forms.hpp"

namespace splitcubic {

// A zero of the form modulo p^k that is not identically 0 mod p.
// Coordinates are integer representatives, not necessarily reduced.
struct LocalWitness {
  std::uint64_t p = 0;
  unsigned k = 0;
  std::vector<BigInt> x;
  bool nonsingular = false;  // some partial derivative is a unit mod p
};

// Validates and classifies a candidate zero; throws PreconditionError if
// C(x) != 0 mod p^k or x == 0 mod p.
LocalWitness make_witness(const CubicForm& form, std::uint64_t p, unsigned k, std::vector<BigInt> x);

// #{x in (Z/p^k)^n : C(x) == 0 mod p^k}, including x = 0.
std::uint64_t count_zeros_mod(const CubicForm& form, std::uint64_t p, unsigned k,
                              const Budget& budget = Budget::from_environment());

// Newton lifting along a coordinate with a unit partial derivative.
LocalWitness hensel_lift(const CubicForm& form, const LocalWitness& witness, unsigned target_k);

// Looks for a nonsingular zero mod p (lifted to level k), then falls back to
// an exhaustive search for any primitive zero mod p^k when p^{kn} fits the
// budget. nullopt means "none found", never a proof of insolubility.
std::optional<LocalWitness> find_local_witness(const CubicForm& form, std::uint64_t p, unsigned k,
                                               const Budget& budget = Budget::from_environment());

// Variable roles for the shape F1(u) + p F2(v) + p^2 F3(w) + p G(u, v, w).
using BlockPartition = std::array<std::vector<int>, 3>;  // 0-based variable indices

// Parses "1,2,3/4,5,6/7,8,9" (1-based; empty groups allowed, e.g. "1/2/").
BlockPartition parse_blocks(std::string_view text, int n);

struct MonomialCheck {
  Triple monomial;
  BigInt coefficient;
  unsigned required_power;  // 1 for mixed monomials, 2 for the flagged classes
};

struct AnisotropyCheck {
  std::uint64_t points = 0;  // p^m
  std::uint64_t zeros = 0;   // always 1 (only the zero vector) on success
};

struct DescentCertificate {
  std::uint64_t p = 0;
  BlockPartition blocks;
  std::array<CubicForm, 3> forms{CubicForm(0), CubicForm(0), CubicForm(0)};  // block-local
  CubicForm g{0};
  std::array<AnisotropyCheck, 3> anisotropy;
  std::vector<MonomialCheck> mixed;
};

struct DescentOutcome {
  std::optional<DescentCertificate> certificate;
  // On failure: index of the isotropic block and a nonzero zero mod p of it.
  int failing_block = -1;
  std::vector<std::int64_t> counterexample;
};

// Throws PreconditionError when the coefficients do not have the required
// p-divisibility for the partition; returns an outcome without certificate
// when some F_i has a nontrivial zero mod p.
DescentOutcome build_descent_certificate(const CubicForm& form, std::uint64_t p,
                                         const BlockPartition& blocks,
                                         const Budget& budget = Budget::from_environment());

nlohmann::json descent_to_json(const DescentCertificate& cert);
nlohmann::json witness_to_json(const LocalWitness& w);

}  // namespace splitcubic
