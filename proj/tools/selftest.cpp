#include <functional>

#include "cli.hpp"
#include "splitcubic/certificate.hpp"
#include "splitcubic/exponents.hpp"
#include "splitcubic/local.hpp"

namespace splitcubic::cli {

using nlohmann::json;

namespace {

Rational q(const char* s) { return parse_rational(s); }

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success, otherwise what differed
};

std::string expect(bool ok, const std::string& got) { return ok ? "" : got; }

std::string expect_params(const char* n, const char* t, const char* lambda, const char* xi, const char* rho2,
                          const char* pi2) {
  const auto p = lemma8_params(q(n), q(t), q(lambda));
  bool ok = p.xi == q(xi) && p.pi2 == q(pi2);
  if (rho2 != nullptr) ok = ok && p.rho2 == q(rho2);
  return expect(ok, "Xi=" + to_string(p.xi) + " rho2=" + to_string(p.rho2) + " pi2=" + to_string(p.pi2));
}

std::string expect_lemma9(const char* region, const char* value) {
  const auto e = lemma9_exponent(parse_region(region));
  return expect(e == AugmentedExponent(q(value)) + AugmentedExponent::epsilon(1), e.to_string());
}

// rational parts of the outputs of every step using `rule`, in order
std::vector<Rational> outputs_of(const Certificate& c, Rule rule) {
  std::vector<Rational> r;
  for (const auto& s : c.steps)
    if (s.rule == rule) r.push_back(s.output.value);
  return r;
}

std::string join(const std::vector<Rational>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + to_string(x);
  return s;
}

CubicForm n1() {
  CubicForm f(3);
  f.add_term(0, 0, 0, 1);
  f.add_term(1, 1, 1, 2);
  f.add_term(2, 2, 2, 4);
  f.add_term(0, 1, 2, 1);
  return f;
}

}  // namespace

json selftest_checks() {
  const std::vector<Check> checks = {
      {"Mordell form at e4 is 7",
       [] {
         std::vector<std::int64_t> e4(9, 0);
         e4[3] = 1;
         const BigInt v = evaluate(make_mordell_form(), std::span<const std::int64_t>(e4));
         return expect(v == 7, v.get_str());
       }},
      {"Mordell form has 12 monomials and x5^3 coefficient 14",
       [] {
         const auto f = make_mordell_form();
         return expect(f.size() == 12 && f.coefficient(4, 4, 4) == 14, std::to_string(f.size()) + " monomials");
       }},
      {"Mordell form splits into {1,2,3},{4,5,6},{7,8,9}",
       [] {
         const auto s = split_components(make_mordell_form());
         const std::vector<std::vector<int>> want{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};
         return expect(s.blocks == want, std::to_string(s.blocks.size()) + " blocks");
       }},
      {"N1 has only the trivial zero mod 7",
       [] {
         const auto c = count_zeros_mod(n1(), 7, 1);
         return expect(c == 1, std::to_string(c));
       }},
      {"Mordell form: 7-adic descent certificate with G = 0",
       [] {
         const auto f = make_mordell_form();
         const auto out = build_descent_certificate(f, 7, parse_blocks("1,2,3/4,5,6/7,8,9", 9));
         return expect(out.certificate.has_value() && out.certificate->g.is_zero(), "no certificate");
       }},
      {"params (8, 7/4, 8): Xi = 11/20, rho2 = 0, pi2 = 5/2", [] { return expect_params("8", "7/4", "8", "11/20", "0", "5/2"); }},
      {"params (9, 1, 8): Xi = 25/31, rho2 = 1/5, pi2 = 11/5", [] { return expect_params("9", "1", "8", "25/31", "1/5", "11/5"); }},
      {"params (9, 539/620, 8): Xi = 1145/1922, pi2 = 1867/775",
       [] { return expect_params("9", "539/620", "8", "1145/1922", nullptr, "1867/775"); }},
      {"params (8, 3/2, 8): Xi = 0, rho2 = 0, pi2 = 3", [] { return expect_params("8", "3/2", "8", "0", "0", "3"); }},
      {"lemma7 (10, 1, 21/40, 11/20, 0, 1/2) = 127/16",
       [] {
         const auto b = lemma7_bound(Rational(10), Rational(1), AugmentedExponent(q("21/40")), AugmentedExponent(q("11/20")), Rational(0),
                                     AugmentedExponent(q("1/2")));
         return expect(b.value == q("127/16") && b.big_delta == 0, b.to_string());
       }},
      {"remark14 (9, 2, 1/2, 1145/1922, 1/5, 458/775) = 8 - Delta/8",
       [] {
         const auto b = remark14_bound(Rational(9), Rational(2), AugmentedExponent(q("1/2")), AugmentedExponent(q("1145/1922")),
                                       q("1/5"), AugmentedExponent(q("458/775")));
         return expect(b.value == 8 && b.big_delta == q("-1/8"), b.to_string());
       }},
      {"lemma9 on a <= 25/31, b >= a/5 + 11/5 is 539/310", [] { return expect_lemma9("a<=25/31,b>=a/5+11/5", "539/310"); }},
      {"lemma9 on a <= 1145/1922, b >= a/5 + 1867/775 is 1",
       [] { return expect_lemma9("a<=1145/1922,b>=a/5+1867/775", "1"); }},
      {"certificate 128 closes at 127/16 and replays",
       [] {
         const auto c = certify_case("128");
         const auto r = verify_certificate(certificate_from_json(certificate_to_json(c)));
         const auto& last = c.steps.back();
         // Lemma 8 steps consume Xi = 11/20 then Xi = 0, pi2 = 3; the swap error is 21/40
         const auto& p1 = c.steps[3].details.at("params");
         const auto& p2 = c.steps[7].details.at("params");
         const bool ladder = rational_from_json(p1.at("xi")) == q("11/20") && rational_from_json(p2.at("xi")) == 0 &&
                             rational_from_json(p2.at("pi2")) == 3 && c.steps[4].output.value == q("21/40");
         return expect(c.verdict && r.ok && ladder && last.output.value == q("127/16"),
                       r.message + " steps: " + join(outputs_of(c, Rule::Lemma6Swap)));
       }},
      {"certificate 119 runs the ladder 1 -> 539/620 -> 1/2 and closes at 8 - Delta/8",
       [] {
         const auto c = certify_case("119");
         const auto r = verify_certificate(certificate_from_json(certificate_to_json(c)));
         const auto& last = c.steps.back();
         const auto t = outputs_of(c, Rule::Holder);
         const auto l9 = outputs_of(c, Rule::Lemma9);
         const bool ladder = t == std::vector<Rational>{1, q("539/620"), q("1/2")} && l9.size() == 4 &&
                             4 * l9[0] == q("539/310") && 4 * l9[2] == 1;
         return expect(c.verdict && r.ok && ladder && last.output.value == 8 && last.output.big_delta == q("-1/8"),
                       r.message + " t ladder: " + join(t) + " lemma9: " + join(l9));
       }},
  };
  json out = json::array();
  for (const auto& c : checks) {
    std::string detail;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    out.push_back({{"name", c.name}, {"ok", detail.empty()}, {"detail", detail}});
  }
  return out;
}

}  // namespace splitcubic::cli
