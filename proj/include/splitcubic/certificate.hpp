#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitcubic/exponents.hpp"

namespace splitcubic {

enum class Rule { Hua, Wooley, Holder, Lemma6Swap, Lemma7, Lemma8i, Lemma8ii, Lemma9, Remark14 };

std::string rule_name(Rule r);  // "Hua", "Hölder", "Lemma8(i)", "Remark(14)", ...
Rule rule_from_name(const std::string& name);

// One inference. `inputs` holds the literal parameters of the rule and
// references ({"ref": id}) to earlier steps; `details` holds everything the
// rule derives besides the headline exponent (parameters, condition reports,
// branch terms). Both are recomputed on verification.
struct CertificateStep {
  int id = 0;
  Rule rule = Rule::Hua;
  std::string claim;
  nlohmann::json inputs;
  AugmentedExponent output;
  nlohmann::json details;
  bool concluding = false;
};

struct Certificate {
  std::string case_id;
  AugmentedExponent target;
  std::vector<CertificateStep> steps;
  bool verdict = false;
};

// A sub-check failed while building or replaying a certificate.
class CertificateError : public PreconditionError {
 public:
  CertificateError(int step, const std::string& what)
      : PreconditionError("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Builds the certificate for the (1,2,8) case ("128") or the (1,1,9) case
// ("119"). Throws CertificateError naming the failing step.
Certificate certify_case(std::string_view case_id);

struct VerificationResult {
  bool ok = false;
  std::optional<int> failing_step;
  std::string message;
};

// Replays every step from its inputs and compares outputs, details,
// concluding flags and the verdict with the stored values.
VerificationResult verify_certificate(const Certificate& cert);

inline constexpr int kCertificateSchemaVersion = 1;

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

// Exponent JSON for Lemma 8 parameter sets and condition reports.
nlohmann::json params_to_json(const Lemma8Params& p);
nlohmann::json conditions_to_json(const ConditionReport& r);

// Arc family A(A, B, C) covering the set m0 for the given parameters:
// A = Xi + c*delta, B = rho2, C = 3 - pi2 + delta.
struct ArcFamily {
  AugmentedExponent A;
  Rational B;
  AugmentedExponent C;
};
ArcFamily arc_family_from_params(const Lemma8Params& p);
// Region a <= Xi + c*delta, b >= rho2*a + pi2 - delta.
ExponentPolytope region_from_params(const Lemma8Params& p, std::string name);

}  // namespace splitcubic
