#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

namespace derinv {

using Rational = boost::rational<int64_t>;

std::string format_rational(const Rational& r);
Rational parse_rational(const std::string& s);
Rational floor_div(const Rational& r);  // largest integer <= r, as a Rational

// Half-open [lo, hi); a missing end is infinite.
struct SlopeInterval {
  std::optional<Rational> lo, hi;
  static SlopeInterval all() { return {}; }
  static SlopeInterval window(Rational lo, Rational hi) { return {lo, hi}; }
  bool contains(const Rational& x) const { return (!lo || x >= *lo) && (!hi || x < *hi); }
};

class SlopeMultiset {
 public:
  SlopeMultiset() = default;
  SlopeMultiset(std::initializer_list<std::pair<Rational, int64_t>> init);

  // Zero multiplicity is a no-op; negative throws DomainError.
  void add(const Rational& slope, int64_t mult);
  int64_t rank() const;
  int64_t multiplicity(const Rational& slope) const;
  bool empty() const { return entries_.empty(); }
  const std::map<Rational, int64_t>& entries() const { return entries_; }

  SlopeMultiset& operator+=(const SlopeMultiset& o);
  friend SlopeMultiset operator+(SlopeMultiset a, const SlopeMultiset& b) { return a += b; }
  friend bool operator==(const SlopeMultiset&, const SlopeMultiset&) = default;

  // "{0:1, 1:20, 2:1}"
  std::string to_string() const;

 private:
  std::map<Rational, int64_t> entries_;
};

SlopeMultiset shift(const SlopeMultiset& s, const Rational& by);
// (n) shifts every slope by n.
SlopeMultiset tate_twist(const SlopeMultiset& s, int64_t n);
SlopeMultiset slope_part(const SlopeMultiset& s, const SlopeInterval& iv);

// [[num, den, mult], ...]
nlohmann::json to_json(const SlopeMultiset& s);
SlopeMultiset slopes_from_json(const nlohmann::json& j);

}  // namespace derinv
