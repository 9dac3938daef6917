#include "derinv/slopes.hpp"

#include "derinv/errors.hpp"

namespace derinv {

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    int64_t den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(std::stoll(s.substr(0, slash)), den);
  } catch (const std::logic_error&) {
    throw ParseError("not a rational number: '" + s + "'");
  }
}

Rational floor_div(const Rational& r) {
  int64_t n = r.numerator(), d = r.denominator();
  int64_t q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return Rational(q);
}

SlopeMultiset::SlopeMultiset(std::initializer_list<std::pair<Rational, int64_t>> init) {
  for (const auto& [s, m] : init) add(s, m);
}

void SlopeMultiset::add(const Rational& slope, int64_t mult) {
  if (mult < 0) throw DomainError("negative slope multiplicity");
  if (mult == 0) return;
  entries_[slope] += mult;
}

int64_t SlopeMultiset::rank() const {
  int64_t r = 0;
  for (const auto& [s, m] : entries_) r += m;
  return r;
}

int64_t SlopeMultiset::multiplicity(const Rational& slope) const {
  auto it = entries_.find(slope);
  return it == entries_.end() ? 0 : it->second;
}

SlopeMultiset& SlopeMultiset::operator+=(const SlopeMultiset& o) {
  for (const auto& [s, m] : o.entries_) add(s, m);
  return *this;
}

std::string SlopeMultiset::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [s, m] : entries_) {
    if (!first) out += ", ";
    first = false;
    out += format_rational(s) + ":" + std::to_string(m);
  }
  return out + "}";
}

SlopeMultiset shift(const SlopeMultiset& s, const Rational& by) {
  SlopeMultiset out;
  for (const auto& [l, m] : s.entries()) out.add(l + by, m);
  return out;
}

SlopeMultiset tate_twist(const SlopeMultiset& s, int64_t n) { return shift(s, Rational(n)); }

SlopeMultiset slope_part(const SlopeMultiset& s, const SlopeInterval& iv) {
  SlopeMultiset out;
  for (const auto& [l, m] : s.entries())
    if (iv.contains(l)) out.add(l, m);
  return out;
}

nlohmann::json to_json(const SlopeMultiset& s) {
  auto arr = nlohmann::json::array();
  for (const auto& [l, m] : s.entries()) arr.push_back({l.numerator(), l.denominator(), m});
  return arr;
}

SlopeMultiset slopes_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("slope multiset must be an array of [num, den, mult]");
  SlopeMultiset out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw ParseError("slope entry must be [num, den, mult]");
    int64_t den = e[1].get<int64_t>();
    if (den <= 0) throw ParseError("slope denominator must be positive");
    int64_t mult = e[2].get<int64_t>();
    if (mult <= 0) throw ParseError("slope multiplicity must be positive");
    out.add(Rational(e[0].get<int64_t>(), den), mult);
  }
  return out;
}

}  // namespace derinv
