#include <doctest.h>

#include <algorithm>

#include "derinv/catalog.hpp"
#include "derinv/errors.hpp"
#include "derinv/profile.hpp"
#include "helpers.hpp"

using namespace derinv;
using namespace derinv::testing;

namespace {

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
  return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("JSON round trip over the catalog") {
  for (const auto& e : builtin_catalog()) {
    CAPTURE(e.key);
    auto j = to_json(e.profile);
    CHECK(to_json(profile_from_json(j)) == j);
  }
}

TEST_CASE("unknown fields and bad types are parse errors") {
  auto j = to_json(lookup("k3:h:2").profile);
  j["colour"] = "blue";
  CHECK_THROWS_AS(profile_from_json(j), ParseError);
  j = to_json(lookup("k3:h:2").profile);
  j["p"] = "three";
  CHECK_THROWS_AS(profile_from_json(j), ParseError);
}

TEST_CASE("charpoly coefficients accept decimal strings") {
  auto j = to_json(lookup("curve:1:1").profile);
  j["charpolys"]["1"] = nlohmann::json::array({1, "-1", "3"});
  auto P = profile_from_json(j);
  CHECK(P.charpolys.at(1)[2] == 3);
  CHECK(validate_profile(P).empty());
  j["charpolys"]["1"] = nlohmann::json::array({1, 0, 3});
  CHECK(mentions(validate_profile(profile_from_json(j)), "charpoly"));
}

TEST_CASE("validation catches broken data") {
  auto P = lookup("k3:ss:2").profile;
  CHECK(validate_profile(P).empty());

  auto Q = P;
  Q.dominoes->push_back({1, 2, {1}});
  CHECK(!validate_profile(Q).empty());

  Q = P;
  Q.dominoes = std::vector<DominoSpec>{{0, 1, {1}}};
  CHECK(!validate_profile(Q).empty());

  Q = P;
  Q.twist = TwistInfo{2};
  CHECK(!validate_profile(Q).empty());

  Q = P;
  Q.p = 4;
  CHECK(!validate_profile(Q).empty());

  Q = P;
  Q.descent_differentials = {{1, 1}};
  CHECK(!validate_profile(Q).empty());

  auto B = load_profile(data_path("profiles/broken_duality.json"));
  auto msgs = validate_profile(B);
  CHECK(mentions(msgs, "constraint1"));
}

TEST_CASE("domino table access") {
  auto P = lookup("k3:ss:4").profile;
  CHECK(P.T(0, 2) == 1);
  CHECK(P.T(1, 1) == 0);
  CHECK(P.T(7, 7) == 0);
  REQUIRE(P.domino_at(0, 2));
  CHECK(P.domino_at(0, 2)->constituents == std::vector<int64_t>{4});
  P.dominoes.reset();
  CHECK_THROWS_AS(P.T(0, 2), InsufficientDataError);
}

TEST_CASE("allowed domino positions") {
  CHECK(domino_position_allowed(2, 0, 2));
  CHECK(!domino_position_allowed(2, 1, 2));
  CHECK(!domino_position_allowed(2, 0, 1));
  CHECK(domino_position_allowed(3, 1, 2));
  CHECK(domino_position_allowed(3, 0, 3));
  CHECK(!domino_position_allowed(1, 0, 1));
}

TEST_CASE("twists") {
  CHECK(make_twist(3, 1).ord_alpha == 1);
  CHECK(make_twist(3, 27).twisted());
  CHECK_THROWS_AS(make_twist(3, 6), DomainError);
  CHECK_THROWS_AS(make_twist(3, 0), DomainError);
}

TEST_CASE("profiles load from disk") {
  for (const char* f : {"profiles/enriques_classical_p2.json", "profiles/synthetic_non_mo.json"}) {
    auto P = load_profile(data_path(f));
    CHECK(validate_profile(P).empty());
  }
  CHECK_THROWS_AS(load_profile(data_path("profiles/missing.json")), ParseError);
}
