#include <cctype>
#include <optional>
#include <sstream>

#include "splitcubic/exponents.hpp"

namespace splitcubic {

namespace {

using AE = AugmentedExponent;
using Direction = std::array<Rational, 2>;

AE row_lhs(const LinearInequality& row, const ExponentPoint& p) {
  return p.a * row.ca + p.b * row.cb;
}

bool same_direction(const Direction& x, const Direction& y) {
  return x[0] * y[1] == x[1] * y[0] && x[0] * y[0] + x[1] * y[1] > 0;
}

}  // namespace

ExponentPolytope::ExponentPolytope(std::string name) : name_(std::move(name)) {
  rows_.push_back({-1, 0, AE(0)});
  rows_.push_back({0, -1, AE(0)});
}

void ExponentPolytope::add_le(const Rational& ca, const Rational& cb, const AE& rhs) {
  if (ca == 0 && cb == 0) {
    if (rhs < AE(0)) rows_.push_back({0, 0, rhs});  // infeasible; kept so the region is empty
    return;
  }
  rows_.push_back({ca, cb, rhs});
}

void ExponentPolytope::add_ge(const Rational& ca, const Rational& cb, const AE& rhs) {
  add_le(-ca, -cb, -rhs);
}

bool ExponentPolytope::contains(const ExponentPoint& p) const {
  for (const auto& row : rows_)
    if (row.rhs < row_lhs(row, p)) return false;
  return true;
}

std::vector<ExponentPoint> ExponentPolytope::vertices() const {
  std::vector<ExponentPoint> out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t j = i + 1; j < rows_.size(); ++j) {
      const auto& r = rows_[i];
      const auto& s = rows_[j];
      const Rational det = r.ca * s.cb - s.ca * r.cb;
      if (det == 0) continue;
      ExponentPoint p{(r.rhs * s.cb - s.rhs * r.cb) / det, (s.rhs * r.ca - r.rhs * s.ca) / det};
      if (!contains(p)) continue;
      bool seen = false;
      for (const auto& q : out) seen = seen || q == p;
      if (!seen) out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Direction> ExponentPolytope::recession_rays() const {
  std::vector<Direction> out;
  for (const auto& row : rows_) {
    if (row.ca == 0 && row.cb == 0) continue;
    for (const Direction& d : {Direction{row.cb, -row.ca}, Direction{-row.cb, row.ca}}) {
      bool inside = true;
      for (const auto& other : rows_) inside = inside && other.ca * d[0] + other.cb * d[1] <= 0;
      if (!inside) continue;
      bool seen = false;
      for (const auto& e : out) seen = seen || same_direction(e, d);
      if (!seen) out.push_back(d);
    }
  }
  return out;
}

ExponentPolytope ExponentPolytope::intersected(const LinearInequality& row) const {
  ExponentPolytope copy = *this;
  copy.add_le(row.ca, row.cb, row.rhs);
  return copy;
}

std::string ExponentPolytope::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 2; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    if (!first) os << ", ";
    first = false;
    LinearExponentForm lhs(AE(0), {{'a', row.ca}, {'b', row.cb}});
    os << lhs.to_string() << " <= " << row.rhs.to_string();
  }
  return first ? std::string("a >= 0, b >= 0") : os.str();
}

Maximum maximize(const ExponentPolytope& region, const std::vector<LinearExponentForm>& terms,
                 const std::vector<std::string>& labels) {
  if (terms.empty() || terms.size() != labels.size())
    throw PreconditionError("maximize needs one label per objective term");
  const auto verts = region.vertices();
  if (verts.empty()) throw PreconditionError("empty region '" + region.name() + "'");
  for (const auto& d : region.recession_rays())
    for (const auto& term : terms)
      if (term.coefficient('a') * d[0] + term.coefficient('b') * d[1] > 0)
        throw PreconditionError("unbounded bound");
  std::optional<Maximum> best;
  for (const auto& v : verts) {
    const std::map<char, AE> point{{'a', v.a}, {'b', v.b}};
    for (std::size_t k = 0; k < terms.size(); ++k) {
      AE value = terms[k].evaluate(point);
      if (!best || best->value < value) best = Maximum{std::move(value), v, labels[k]};
    }
  }
  return *best;
}

Lemma9Result lemma9_maximum(const ExponentPolytope& region) {
  using F = LinearExponentForm;
  const std::vector<F> large_b{F(AE(4), {{'b', -1}}), F(AE(0), {{'a', Rational(7, 2)}, {'b', -1}}),
                               F(AE(2), {{'a', 2}, {'b', -1}})};
  const std::vector<std::string> large_labels{"4-b", "7a/2-b", "2a-b+2"};
  const std::vector<F> small_b{F(AE(0), {{'b', Rational(1, 3)}}),
                               F(AE(6), {{'a', Rational(7, 2)}, {'b', -3}}),
                               F(AE(2), {{'a', 2}, {'b', -1}})};
  const std::vector<std::string> small_labels{"b/3", "7a/2-3b+6", "2a-b+2"};

  std::optional<Lemma9Result> best;
  const ExponentPolytope upper = region.intersected({0, -1, AE(-3)});
  if (!upper.empty()) {
    Maximum m = maximize(upper, large_b, large_labels);
    best = Lemma9Result{m.value, "b>=3", m};
  }
  const ExponentPolytope lower = region.intersected({0, 1, AE(3)});
  if (!lower.empty()) {
    Maximum m = maximize(lower, small_b, small_labels);
    if (!best || best->value < m.value) best = Lemma9Result{m.value, "b<=3", m};
  }
  if (!best) throw PreconditionError("empty region '" + region.name() + "'");
  best->value += AE::epsilon();
  return *best;
}

AE lemma9_exponent(const ExponentPolytope& region) { return lemma9_maximum(region).value; }

// ---- region parser ---------------------------------------------------------

namespace {

struct Affine {
  Rational ca, cb;
  AE constant;

  bool is_constant() const { return ca == 0 && cb == 0; }
  bool is_scalar() const { return is_constant() && constant.is_rational(); }
};

Affine operator+(const Affine& x, const Affine& y) {
  return {x.ca + y.ca, x.cb + y.cb, x.constant + y.constant};
}
Affine scaled(const Affine& x, const Rational& s) { return {x.ca * s, x.cb * s, x.constant * s}; }

class RegionParser {
 public:
  RegionParser(std::string_view text, ExponentPolytope& out) : s_(text), out_(out) {}

  void parse() {
    skip_space();
    if (at_end()) throw error("empty region");
    constraint();
    while (true) {
      skip_space();
      if (at_end()) break;
      if (s_[pos_] != ',') throw error("expected ','");
      ++pos_;
      constraint();
    }
  }

 private:
  enum class Rel { le, ge, eq };

  PreconditionError error(const std::string& what) const {
    return PreconditionError("region parse error at offset " + std::to_string(pos_) + ": " +
                             what);
  }
  bool at_end() const { return pos_ >= s_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool consume(std::string_view tok) {
    skip_space();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  std::optional<Rel> relation() {
    if (consume("<=") || consume("\xE2\x89\xA4") || consume("<")) return Rel::le;
    if (consume(">=") || consume("\xE2\x89\xA5") || consume(">")) return Rel::ge;
    if (consume("==") || consume("=")) return Rel::eq;
    return std::nullopt;
  }

  void add(const Affine& lhs, Rel rel, const Affine& rhs) {
    const Affine diff = lhs + scaled(rhs, -1);  // diff rel 0
    if (rel != Rel::ge) out_.add_le(diff.ca, diff.cb, -diff.constant);
    if (rel != Rel::le) out_.add_ge(diff.ca, diff.cb, -diff.constant);
  }

  void constraint() {
    Affine left = expr();
    auto rel = relation();
    if (!rel) throw error("expected a relation (<=, >=, =)");
    while (rel) {
      Affine right = expr();
      add(left, *rel, right);
      left = right;
      rel = relation();
    }
  }

  Affine expr() {
    skip_space();
    Affine acc;
    bool negate = false;
    if (consume("-")) negate = true;
    else consume("+");
    acc = term();
    if (negate) acc = scaled(acc, -1);
    while (true) {
      if (consume("+")) acc = acc + term();
      else if (consume("-")) acc = acc + scaled(term(), -1);
      else return acc;
    }
  }

  Affine multiply(const Affine& x, const Affine& y) {
    if (x.is_scalar()) return scaled(y, x.constant.value);
    if (y.is_scalar()) return scaled(x, y.constant.value);
    throw error("product of two non-constant quantities");
  }

  Affine term() {
    Affine acc = factor();
    while (true) {
      skip_space();
      if (consume("*")) {
        acc = multiply(acc, factor());
      } else if (consume("/")) {
        Affine d = factor();
        if (!d.is_scalar() || d.constant.value == 0) throw error("division by a non-constant or zero");
        acc = scaled(acc, Rational(1) / d.constant.value);
      } else if (!at_end() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '(' ||
                               static_cast<unsigned char>(s_[pos_]) >= 0x80)) {
        acc = multiply(acc, factor());  // implicit product such as "2a"
      } else {
        return acc;
      }
    }
  }

  Affine factor() {
    skip_space();
    if (at_end()) throw error("unexpected end of input");
    if (consume("(")) {
      Affine inner = expr();
      if (!consume(")")) throw error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (!at_end() && s_[pos_] == '.') throw error("decimal numbers are not accepted; use p/q");
      return {0, 0, AE(Rational(std::string(s_.substr(start, pos_ - start))))};
    }
    static const std::pair<std::string_view, int> symbols[] = {
        {"Delta", 0}, {"\xCE\x94", 0}, {"delta", 1}, {"\xCE\xB4", 1},
        {"eps", 2},   {"\xCE\xB5", 2}, {"a", 3},     {"b", 4}};
    for (const auto& [name, kind] : symbols) {
      if (s_.substr(pos_, name.size()) != name) continue;
      pos_ += name.size();
      switch (kind) {
        case 0: return {0, 0, AE::Delta()};
        case 1: return {0, 0, AE::small_delta()};
        case 2: return {0, 0, AE::epsilon()};
        case 3: return {1, 0, AE(0)};
        default: return {0, 1, AE(0)};
      }
    }
    throw error("unexpected character '" + std::string(1, s_[pos_]) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  ExponentPolytope& out_;
};

}  // namespace

ExponentPolytope parse_region(std::string_view text, std::string name) {
  ExponentPolytope out(std::move(name));
  RegionParser(text, out).parse();
  return out;
}

}  // namespace splitcubic
