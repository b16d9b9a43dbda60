#include "splitcubic/certificate.hpp"

#include <map>

namespace splitcubic {

namespace {

using AE = AugmentedExponent;
using nlohmann::json;

const std::map<Rule, std::string>& rule_names() {
  static const std::map<Rule, std::string> names{
      {Rule::Hua, "Hua"},           {Rule::Wooley, "Wooley"},       {Rule::Holder, "Hölder"},
      {Rule::Lemma6Swap, "Lemma6-swap"}, {Rule::Lemma7, "Lemma7"},  {Rule::Lemma8i, "Lemma8(i)"},
      {Rule::Lemma8ii, "Lemma8(ii)"}, {Rule::Lemma9, "Lemma9"},     {Rule::Remark14, "Remark(14)"}};
  return names;
}

struct Outcome {
  AE output;
  json details;
  bool concluding = false;
};

class Replayer {
 public:
  Replayer(const std::vector<CertificateStep>& prior, int id) : prior_(prior), id_(id) {}

  Outcome run(Rule rule, const json& in) {
    try {
      switch (rule) {
        case Rule::Hua: return moment(in, false);
        case Rule::Wooley: return moment(in, true);
        case Rule::Holder: return holder(in);
        case Rule::Lemma6Swap: return lemma6(in);
        case Rule::Lemma8i: return lemma8(in, false);
        case Rule::Lemma8ii: return lemma8(in, true);
        case Rule::Lemma9: return lemma9(in);
        case Rule::Lemma7: return closure(in, false);
        case Rule::Remark14: return closure(in, true);
      }
    } catch (const CertificateError&) {
      throw;
    } catch (const json::exception& e) {
      fail(std::string("malformed inputs: ") + e.what());
    } catch (const PreconditionError& e) {
      fail(e.what());
    }
    fail("unknown rule");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw CertificateError(id_, what); }

  const CertificateStep& ref(const json& in, const char* key) const {
    const int target = in.at(key).at("ref").get<int>();
    for (const auto& s : prior_)
      if (s.id == target) return s;
    fail(std::string("reference '") + key + "' to unknown or later step " + std::to_string(target));
  }

  const CertificateStep& lemma8_ref(const json& in, const char* key) const {
    const auto& s = ref(in, key);
    if (s.rule != Rule::Lemma8i && s.rule != Rule::Lemma8ii)
      fail(std::string("'") + key + "' must reference a Lemma 8 step");
    return s;
  }

  static Lemma8Params params_of(const CertificateStep& s) {
    const json& in = s.inputs;
    // The t actually used is stored in the details; recomputing keeps this exact.
    return lemma8_params(rational_from_json(in.at("n")),
                         rational_from_json(s.details.at("params").at("t")),
                         rational_from_json(in.at("lambda")));
  }

  // Exponent of an I_u moment: I_u(S) = (int |S|^u)^{1/u}.
  static Outcome moment_outcome(const Rational& integral_exponent, const Rational& u) {
    Outcome o;
    o.output = AE(integral_exponent / u, 0, 0, Rational(1) / u);
    o.details = {{"u", rational_to_json(u)}, {"moment_exponent", rational_to_json(integral_exponent)}};
    return o;
  }

  Outcome moment(const json& in, bool wooley) const {
    const int j = in.at("j").get<int>();
    const Rational u = rational_from_json(in.at("u"));
    if (j < 1 || j > 3) fail("moment bounds hold only for 1 <= j <= 3");
    const long expected_u = wooley ? (1L << (j - 1)) : (1L << j);
    if (u != expected_u) fail("moment order u does not match j");
    const int n_vars = in.value("n", wooley ? 2 : 1);
    if (n_vars != (wooley ? 2 : 1)) fail(wooley ? "Wooley's bound is for binary forms" : "Hua's bound is for one variable");
    return moment_outcome(Rational((1L << j) - j), u);
  }

  Outcome holder(const json& in) const {
    const auto& weights = in.at("weights");
    const auto& known = in.at("known");
    if (weights.size() != known.size() + 1)
      fail("Hölder needs one weight per known factor plus one for the remaining factor");
    Rational total = 0;
    for (const auto& w : weights) {
      const Rational x = rational_from_json(w);
      if (x <= 0) fail("Hölder weights must be positive");
      total += x;
    }
    if (total != 1) fail("Hölder reciprocal weights sum to " + total.get_str() + ", not 1");
    AE t(0);
    for (std::size_t i = 0; i < known.size(); ++i) {
      const auto& s = ref(json{{"k", known[i]}}, "k");
      if (!s.details.contains("u")) fail("Hölder factor must reference a moment step");
      const Rational u = rational_from_json(s.details.at("u"));
      if (rational_from_json(weights[i]) * u != 1)
        fail("Hölder weight does not match the moment order of step " + std::to_string(s.id));
      t += s.output;
    }
    Outcome o;
    o.output = t;
    o.details = {{"remaining_order", rational_to_json(Rational(1) / rational_from_json(weights.back()))}};
    return o;
  }

  Outcome lemma6(const json& in) const {
    const std::string part = in.at("part").get<std::string>();
    if (part == "moment") {
      const Rational k = rational_from_json(in.at("k"));
      if (k < 4) fail("the S* moment bound needs k >= 4");
      return moment_outcome(k - 3, k);
    }
    if (part != "error") fail("Lemma 6 part must be 'error' or 'moment'");
    const ArcFamily arc = arc_family_from_params(params_of(lemma8_ref(in, "arc")));
    Outcome o;
    o.output = lemma6_error_exponent(arc.A, arc.B, arc.C);
    o.details = {{"A", to_json(arc.A)}, {"B", rational_to_json(arc.B)}, {"C", to_json(arc.C)}};
    return o;
  }

  // The t of a consuming step, checked against the Hölder remaining order.
  AE t_input(const json& in, const Rational& v) const {
    const auto& s = ref(in, "t");
    if (s.rule == Rule::Holder && rational_from_json(s.details.at("remaining_order")) != v)
      fail("Hölder remaining order does not match v");
    return s.output;
  }

  Outcome lemma8(const json& in, bool part_ii) const {
    const Rational n = rational_from_json(in.at("n"));
    const Rational v = rational_from_json(in.at("v"));
    const Rational lambda = rational_from_json(in.at("lambda"));
    if (v != 2) fail("Lemma 8 is stated for v = 2");
    const AE t = t_input(in, v);
    if (t.big_delta != 0) fail("Lemma 8 needs t free of Delta");
    const Lemma8Params p = lemma8_params(n, t.value, lambda);
    const ConditionReport report = check_conditions(p, v);
    if (part_ii) {
      if (p.xi > 0) fail("Lemma 8(ii) requires Xi <= 0, got " + p.xi.get_str());
      if (!report.holds_for_part_ii()) fail("a condition of Lemma 8(ii) fails");
    } else if (!report.holds_for_part_i()) {
      fail("a condition of Lemma 8(i) fails");
    }
    Outcome o;
    o.output = AE(lambda, 0, 0, -1);
    o.concluding = true;
    o.details = {{"params", params_to_json(p)},
                 {"conditions", conditions_to_json(report)},
                 {"excluded_region", region_from_params(p, "m0").to_string()}};
    return o;
  }

  Outcome lemma9(const json& in) const {
    const auto& s = lemma8_ref(in, "region");
    const Rational u = rational_from_json(in.at("u"));
    if (u != 4) fail("Lemma 9 bounds the fourth moment");
    const ExponentPolytope region = region_from_params(params_of(s), in.value("name", "region"));
    const Lemma9Result r = lemma9_maximum(region);
    Outcome o;
    o.output = r.value / u;
    o.details = {{"u", rational_to_json(u)},
                 {"moment_exponent", to_json(r.value)},
                 {"branch", r.branch},
                 {"term", r.attained.term},
                 {"argmax", {{"a", to_json(r.attained.argmax.a)}, {"b", to_json(r.attained.argmax.b)}}},
                 {"region", region.to_string()}};
    return o;
  }

  Outcome closure(const json& in, bool remark) const {
    const Rational n = rational_from_json(in.at("n"));
    const Rational v = rational_from_json(in.at("v"));
    const AE t = t_input(in, v);
    const ArcFamily arc = arc_family_from_params(params_of(lemma8_ref(in, "arc")));
    const Lemma7Terms terms =
        remark ? remark14_terms(n, v, t, arc.A, arc.B, arc.C) : lemma7_terms(n, v, t, arc.A, arc.B, arc.C);
    Outcome o;
    o.output = terms.bound;
    o.concluding = true;
    o.details = {{"A", to_json(arc.A)},         {"B", rational_to_json(arc.B)},
                 {"C", to_json(arc.C)},          {"first_term", to_json(terms.first)},
                 {"second_term", to_json(terms.second)}, {"regime", terms.regime}};
    return o;
  }

  const std::vector<CertificateStep>& prior_;
  int id_;
};

json ref(int id) { return {{"ref", id}}; }

class Builder {
 public:
  explicit Builder(Certificate& c) : c_(c) {}

  int add(Rule rule, std::string claim, json inputs) {
    CertificateStep s;
    s.id = static_cast<int>(c_.steps.size()) + 1;
    s.rule = rule;
    s.claim = std::move(claim);
    s.inputs = std::move(inputs);
    Outcome o = Replayer(c_.steps, s.id).run(rule, s.inputs);
    s.output = std::move(o.output);
    s.details = std::move(o.details);
    s.concluding = o.concluding;
    c_.steps.push_back(std::move(s));
    return c_.steps.back().id;
  }

 private:
  Certificate& c_;
};

bool compute_verdict(const Certificate& c) {
  bool any = false;
  for (const auto& s : c.steps) {
    if (!s.concluding) continue;
    any = true;
    if (!(s.output < c.target)) return false;
  }
  return any;
}

void build_128(Certificate& c) {
  Builder b(c);
  const int s1 = b.add(Rule::Hua, "I_4(S_1; 0, [0,1])", {{"factor", "S1"}, {"n", 1}, {"j", 2}, {"u", 4}});
  const int s2 = b.add(Rule::Wooley, "I_4(S_2; 0, [0,1])", {{"factor", "S2"}, {"n", 2}, {"j", 3}, {"u", 4}});
  const int s3 = b.add(Rule::Holder, "I_{4,4,2}(S_1, S_2, S_3) -> I_2(S_3; t)",
                       {{"weights", {"1/4", "1/4", "1/2"}}, {"known", {ref(s1), ref(s2)}}});
  const int s4 = b.add(Rule::Lemma8i, "I_2(S_3; t, m minus m0) = o(P^8)",
                       {{"n", 8}, {"v", 2}, {"lambda", 8}, {"t", ref(s3)}});
  const int s5 = b.add(Rule::Lemma6Swap, "S_1 = S_1* + O(P^e) on A(A,B,C)",
                       {{"part", "error"}, {"arc", ref(s4)}});
  const int s6 = b.add(Rule::Lemma6Swap, "I_4(S_1*; 0, [0,1])", {{"part", "moment"}, {"k", 4}});
  const int s7 = b.add(Rule::Holder, "I_{4,4,2}(S_1*, S_2, S_3) -> I_2(S_3; t)",
                       {{"weights", {"1/4", "1/4", "1/2"}}, {"known", {ref(s6), ref(s2)}}});
  b.add(Rule::Lemma8ii, "I_2(S_3; t, m) = o(P^8)", {{"n", 8}, {"v", 2}, {"lambda", 8}, {"t", ref(s7)}});
  b.add(Rule::Lemma7, "I_1(S_2 S_3; t, A) for the 10-variable form C_2 + C_3",
        {{"n", 10}, {"v", 1}, {"t", ref(s5)}, {"arc", ref(s4)}});
}

void build_119(Certificate& c) {
  Builder b(c);
  const int s1 = b.add(Rule::Hua, "I_4(T_1; 0, [0,1])",
                       {{"factor", "T1"}, {"n", 1}, {"j", 2}, {"u", 4}, {"weighted", true}});
  const int s2 = b.add(Rule::Hua, "I_4(T_2; 0, [0,1])",
                       {{"factor", "T2"}, {"n", 1}, {"j", 2}, {"u", 4}, {"weighted", true}});
  const int s3 = b.add(Rule::Holder, "I_{4,4,2}(T_1, T_2, S_3) -> I_2(S_3; t)",
                       {{"weights", {"1/4", "1/4", "1/2"}}, {"known", {ref(s1), ref(s2)}}});
  const int s4 = b.add(Rule::Lemma8i, "I_2(S_3; t, m minus a) = o(P^8)",
                       {{"n", 9}, {"v", 2}, {"lambda", 8}, {"t", ref(s3)}});
  const int s5 = b.add(Rule::Lemma9, "I_4(T_1; 0, a)", {{"factor", "T1"}, {"region", ref(s4)}, {"u", 4}, {"name", "a"}});
  const int s6 = b.add(Rule::Lemma9, "I_4(T_2; 0, a)", {{"factor", "T2"}, {"region", ref(s4)}, {"u", 4}, {"name", "a"}});
  const int s7 = b.add(Rule::Holder, "I_{4,4,2}(T_1, T_2, S_3; a) -> I_2(S_3; t)",
                       {{"weights", {"1/4", "1/4", "1/2"}}, {"known", {ref(s5), ref(s6)}}});
  const int s8 = b.add(Rule::Lemma8i, "I_2(S_3; t, a minus b) = o(P^8)",
                       {{"n", 9}, {"v", 2}, {"lambda", 8}, {"t", ref(s7)}});
  const int s9 = b.add(Rule::Lemma9, "I_4(T_1; 0, b)", {{"factor", "T1"}, {"region", ref(s8)}, {"u", 4}, {"name", "b"}});
  const int s10 = b.add(Rule::Lemma9, "I_4(T_2; 0, b)", {{"factor", "T2"}, {"region", ref(s8)}, {"u", 4}, {"name", "b"}});
  const int s11 = b.add(Rule::Holder, "I_{4,4,2}(T_1, T_2, S_3; b) -> I_2(S_3; t)",
                        {{"weights", {"1/4", "1/4", "1/2"}}, {"known", {ref(s9), ref(s10)}}});
  b.add(Rule::Remark14, "I_2(S_3; t, A intersect m)",
        {{"n", 9}, {"v", 2}, {"t", ref(s11)}, {"arc", ref(s8)}});
}

json step_to_json(const CertificateStep& s) {
  return {{"id", s.id},           {"rule", rule_name(s.rule)}, {"claim", s.claim},
          {"inputs", s.inputs},   {"output", to_json(s.output)}, {"output_text", s.output.to_string()},
          {"details", s.details}, {"concluding", s.concluding}};
}

}  // namespace

std::string rule_name(Rule r) { return rule_names().at(r); }

Rule rule_from_name(const std::string& name) {
  for (const auto& [rule, text] : rule_names())
    if (text == name) return rule;
  if (name == "Holder") return Rule::Holder;
  throw PreconditionError("unknown certificate rule '" + name + "'");
}

nlohmann::json params_to_json(const Lemma8Params& p) {
  return {{"n", p.n.get_str()},     {"t", p.t.get_str()},     {"lambda", p.lambda.get_str()},
          {"rho0", p.rho0.get_str()}, {"pi0", p.pi0.get_str()}, {"rho1", p.rho1.get_str()},
          {"pi1", p.pi1.get_str()}, {"rho2", p.rho2.get_str()}, {"pi2", p.pi2.get_str()},
          {"upsilon", p.upsilon.get_str()}, {"xi", p.xi.get_str()}, {"c", p.c.get_str()}};
}

nlohmann::json conditions_to_json(const ConditionReport& r) {
  json out = json::array();
  for (const auto& e : r.entries)
    out.push_back({{"condition", e.expression},
                   {"value", e.value.get_str()},
                   {"strict", e.strict},
                   {"only_for_part_ii", e.only_for_part_ii},
                   {"holds", e.holds()}});
  return out;
}

ArcFamily arc_family_from_params(const Lemma8Params& p) {
  return {AE(p.xi) + AE::small_delta(p.c), p.rho2, AE(3 - p.pi2) + AE::small_delta()};
}

ExponentPolytope region_from_params(const Lemma8Params& p, std::string name) {
  ExponentPolytope region(std::move(name));
  region.add_le(1, 0, AE(p.xi) + AE::small_delta(p.c));
  region.add_ge(-p.rho2, 1, AE(p.pi2) - AE::small_delta());
  return region;
}

Certificate certify_case(std::string_view case_id) {
  Certificate c;
  c.case_id = std::string(case_id);
  c.target = AE(8);
  if (case_id == "128") build_128(c);
  else if (case_id == "119") build_119(c);
  else throw PreconditionError("unknown case '" + std::string(case_id) + "' (expected 128 or 119)");
  c.verdict = compute_verdict(c);
  return c;
}

VerificationResult verify_certificate(const Certificate& cert) {
  VerificationResult r;
  std::vector<CertificateStep> replayed;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& s = cert.steps[i];
    if (s.id != static_cast<int>(i) + 1) {
      r.failing_step = s.id;
      r.message = "step ids must be consecutive from 1";
      return r;
    }
    try {
      Outcome o = Replayer(replayed, s.id).run(s.rule, s.inputs);
      std::string mismatch;
      if (!(o.output == s.output)) mismatch = "output " + s.output.to_string() + " != recomputed " + o.output.to_string();
      else if (o.details != s.details) mismatch = "details differ from recomputation";
      else if (o.concluding != s.concluding) mismatch = "concluding flag differs";
      if (!mismatch.empty()) {
        r.failing_step = s.id;
        r.message = mismatch;
        return r;
      }
    } catch (const CertificateError& e) {
      r.failing_step = e.step();
      r.message = e.what();
      return r;
    }
    replayed.push_back(s);
  }
  Certificate check = cert;
  if (compute_verdict(check) != cert.verdict) {
    r.message = "stored verdict disagrees with the concluding exponents";
    return r;
  }
  r.ok = true;
  r.message = cert.verdict ? "verified; every concluding exponent is below the target"
                           : "verified; verdict false";
  return r;
}

nlohmann::json certificate_to_json(const Certificate& cert) {
  json steps = json::array();
  for (const auto& s : cert.steps) steps.push_back(step_to_json(s));
  return {{"schema", "splitcubic-certificate"},
          {"schema_version", kCertificateSchemaVersion},
          {"case", cert.case_id},
          {"target", to_json(cert.target)},
          {"steps", steps},
          {"verdict", cert.verdict}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kCertificateSchemaVersion)
      throw PreconditionError("unsupported certificate schema version");
    Certificate c;
    c.case_id = j.at("case").get<std::string>();
    c.target = augmented_from_json(j.at("target"));
    for (const auto& s : j.at("steps")) {
      CertificateStep step;
      step.id = s.at("id").get<int>();
      step.rule = rule_from_name(s.at("rule").get<std::string>());
      step.claim = s.value("claim", "");
      step.inputs = s.at("inputs");
      step.output = augmented_from_json(s.at("output"));
      step.details = s.at("details");
      step.concluding = s.at("concluding").get<bool>();
      c.steps.push_back(std::move(step));
    }
    c.verdict = j.at("verdict").get<bool>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace splitcubic
