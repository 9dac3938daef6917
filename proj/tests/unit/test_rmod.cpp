#include <doctest.h>

#include "derinv/errors.hpp"
#include "derinv/rmod.hpp"
#include "helpers.hpp"

using namespace derinv;
using namespace derinv::testing;

TEST_CASE("shipped fixtures satisfy the Raynaud relations") {
  auto paths = rmod_fixture_paths();
  CHECK(paths.size() >= 20);
  for (const auto& path : paths) {
    CAPTURE(path);
    auto viol = check_relations(load_rmodule(path));
    CHECK(viol.empty());
  }
}

TEST_CASE("the broken fixture names the failed relation") {
  auto viol = check_relations(load_rmodule(data_path("fixtures/broken/fdv_u2.json")));
  REQUIRE(!viol.empty());
  CHECK(viol.front().relation == "FdV=d");
  CHECK(format_violation(viol.front()).find("FdV=d violation at degree 0") == 0);
}

TEST_CASE("U_sigma is a one-dimensional domino") {
  for (uint32_t p : {2u, 3u}) {
    for (int s = 1; s <= 10; ++s) {
      for (int m : {s + 2, s + 4}) {
        CAPTURE(s);
        auto U = u_sigma(p, s, m);
        CHECK(check_relations(U).empty());
        CHECK(kernel_length_of_d(U, 0) == s);
        CHECK(v_inf_Z(U, 0).length == 0);
        CHECK(f_inf_B(U, 1).length == U.length(1));
        CHECK(domino_number(U, 0) == 1);
        auto cs = chain_stats(U, 0);
        CHECK(cs.kernel_steps <= U.length(0) + 2);
      }
    }
  }
}

TEST_CASE("direct sums add domino numbers") {
  auto S = direct_sum(u_sigma(3, 1, 3), u_sigma(3, 4, 6));
  CHECK(check_relations(S).empty());
  CHECK(domino_number(S, 0) == 2);
  CHECK(kernel_length_of_d(S, 0) == 5);
}

TEST_CASE("a module without dominoes") {
  auto R = GaloisRing::get(3, 1, 2);
  RDegree d0;
  d0.ann = {2};
  d0.F = zeros(*R, 1, 1);
  d0.F(0, 0) = R->one();
  d0.V = zeros(*R, 1, 1);
  d0.V(0, 0) = R->p_power(1);
  RModuleExplicit W(R, 0, {d0, RDegree{}});
  CHECK(check_relations(W).empty());
  CHECK(domino_number(W, 0) == 0);
}

TEST_CASE("additivity on split extensions") {
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 3; ++b) {
      for (bool scramble : {false, true}) {
        auto E = split_extension(3, a, b, scramble);
        CHECK(check_relations(E.M).empty());
        auto res = T_additivity_check(E.L, E.M, E.N, E.f, E.g);
        CHECK(res.additive);
        REQUIRE(res.per_degree.size() == 1);
        CHECK(res.per_degree[0].second == std::array<int64_t, 3>{1, 2, 1});
      }
    }
  }
}

TEST_CASE("additivity on a non-split extension") {
  auto E = nonsplit_extension(3, 2);
  CHECK(check_relations(E.M).empty());
  CHECK(check_relations(E.L).empty());
  auto res = T_additivity_check(E.L, E.M, E.N, E.f, E.g);
  CHECK(res.additive);
  CHECK(res.per_degree[0].second == std::array<int64_t, 3>{1, 1, 0});
}

TEST_CASE("additivity rejects non-exact input") {
  auto E = split_extension(3, 1, 2, false);
  E.g.maps[0] = zeros(*E.M.ring(), E.g.maps[0].rows, E.g.maps[0].cols);
  CHECK_THROWS_AS(T_additivity_check(E.L, E.M, E.N, E.f, E.g), DomainError);
}

TEST_CASE("change of basis keeps the relations") {
  auto U = u_sigma(5, 2, 6);
  const auto& R = *U.ring();
  auto V = change_basis(U, {random_invertible(R, U.generators(0)), random_invertible(R, U.generators(1))});
  CHECK(check_relations(V).empty());
  CHECK(domino_number(V, 0) == 1);
  CHECK(kernel_length_of_d(V, 0) == 2);
}

TEST_CASE("JSON round trip") {
  auto U = u_sigma(3, 3, 6);
  auto V = rmodule_from_json(to_json(U));
  CHECK(to_json(V) == to_json(U));
  auto j = to_json(U);
  j["F"][0].erase(0);
  CHECK_THROWS(rmodule_from_json(j));
}

TEST_CASE("ill-defined maps are rejected") {
  auto R = GaloisRing::get(3, 1, 2);
  RDegree d0, d1;
  d0.ann = {1};
  d1.ann = {2};
  d0.d = zeros(*R, 1, 1);
  d0.d(0, 0) = R->one();  // W/p -> W/p^2 sending 1 to 1 is not well defined
  CHECK_THROWS_AS(RModuleExplicit(R, 0, {d0, d1}), PresentationError);
}

TEST_CASE("graded structures") {
  GradedRStructure M;
  M.lo = 0;
  M.entries.resize(3);
  M.entries[0].outgoing.constituents = {1};
  M.entries[0].outgoing_nonzero = true;
  CHECK(!finitely_generated(M, 0));
  CHECK(!finitely_generated(M, 1));
  CHECK(finitely_generated(M, 2));
  CHECK(validate_structure(M).empty());
  M.entries[2].outgoing_nonzero = true;
  CHECK(!validate_structure(M).empty());
}
