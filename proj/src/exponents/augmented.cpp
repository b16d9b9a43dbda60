#include "splitcubic/augmented.hpp"

namespace splitcubic {

namespace {

std::strong_ordering cmp_rational(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

nlohmann::json coeff_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

Rational coeff_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw PreconditionError("exponent coefficient must be an integer or a \"p/q\" string");
}

}  // namespace

int AugmentedExponent::sign_of_infinitesimal_part() const {
  for (const Rational* c : {&big_delta, &delta, &eps})
    if (*c != 0) return sgn(*c);
  return 0;
}

AugmentedExponent& AugmentedExponent::operator+=(const AugmentedExponent& o) {
  value += o.value;
  big_delta += o.big_delta;
  delta += o.delta;
  eps += o.eps;
  return *this;
}

AugmentedExponent& AugmentedExponent::operator-=(const AugmentedExponent& o) {
  value -= o.value;
  big_delta -= o.big_delta;
  delta -= o.delta;
  eps -= o.eps;
  return *this;
}

AugmentedExponent& AugmentedExponent::operator*=(const Rational& s) {
  value *= s;
  big_delta *= s;
  delta *= s;
  eps *= s;
  return *this;
}

std::strong_ordering operator<=>(const AugmentedExponent& a, const AugmentedExponent& b) {
  if (auto c = cmp_rational(a.value, b.value); c != 0) return c;
  if (auto c = cmp_rational(a.big_delta, b.big_delta); c != 0) return c;
  if (auto c = cmp_rational(a.delta, b.delta); c != 0) return c;
  return cmp_rational(a.eps, b.eps);
}

const AugmentedExponent& max(const AugmentedExponent& a, const AugmentedExponent& b) {
  return (a < b) ? b : a;
}

const AugmentedExponent& min(const AugmentedExponent& a, const AugmentedExponent& b) {
  return (b < a) ? b : a;
}

std::string AugmentedExponent::to_string() const {
  std::string s = value.get_str();
  auto term = [&s](const Rational& c, const char* sym) {
    if (c == 0) return;
    const Rational mag = abs(c);
    s += (c < 0) ? " - " : " + ";
    if (mag != 1) s += mag.get_str() + "*";
    s += sym;
  };
  term(big_delta, "Delta");
  term(delta, "delta");
  term(eps, "eps");
  return s;
}

nlohmann::json to_json(const AugmentedExponent& e) {
  return {{"r", e.value.get_str()},
          {"mD", coeff_json(e.big_delta)},
          {"md", coeff_json(e.delta)},
          {"me", coeff_json(e.eps)}};
}

AugmentedExponent augmented_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("r"))
    throw PreconditionError("augmented exponent must be an object with \"r\"");
  AugmentedExponent e(parse_rational(j.at("r").get<std::string>()));
  if (j.contains("mD")) e.big_delta = coeff_from_json(j.at("mD"));
  if (j.contains("md")) e.delta = coeff_from_json(j.at("md"));
  if (j.contains("me")) e.eps = coeff_from_json(j.at("me"));
  return e;
}

nlohmann::json rational_to_json(const Rational& q) { return q.get_str(); }

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  throw PreconditionError("expected a \"p/q\" rational");
}

}  // namespace splitcubic
