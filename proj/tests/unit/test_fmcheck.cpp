#include <doctest.h>

#include "derinv/catalog.hpp"
#include "derinv/fmcheck.hpp"
#include "helpers.hpp"

using namespace derinv;
using namespace derinv::testing;

namespace {

Verdict verdict(const ObstructionReport& R, const std::string& id) {
  const Check* c = R.find(id);
  REQUIRE(c);
  return c->verdict;
}

}  // namespace

TEST_CASE("Artin invariant separates supersingular K3 surfaces") {
  auto R = compare(lookup("k3:ss:1").profile, lookup("k3:ss:2").profile);
  CHECK(R.obstruction());
  CHECK(R.exit_code() == 2);
  CHECK(verdict(R, "x") == Verdict::Mismatch);
  CHECK(verdict(R, "ii") == Verdict::Match);
  REQUIRE(R.first_mismatch());
  CHECK(R.first_mismatch()->id == "x");
}

TEST_CASE("height separates finite height from supersingular") {
  auto R = compare(lookup("k3:h:3").profile, lookup("k3:ss:5").profile);
  CHECK(R.obstruction());
  CHECK(verdict(R, "ii") == Verdict::Mismatch);
  CHECK(verdict(R, "iii") == Verdict::Mismatch);
  CHECK(verdict(R, "ix") == Verdict::Mismatch);
}

TEST_CASE("every catalog entry matches itself") {
  for (const auto& e : builtin_catalog()) {
    CAPTURE(e.key);
    auto R = compare(e.profile, e.profile);
    CHECK(!R.obstruction());
    CHECK(R.exit_code() == 0);
    CHECK(explain(R).find("no obstruction from implemented invariants") != std::string::npos);
  }
}

TEST_CASE("comparison is symmetric") {
  const auto& cat = builtin_catalog();
  for (size_t i = 0; i < cat.size(); i += 3) {
    for (size_t j = 1; j < cat.size(); j += 4) {
      auto ab = compare(cat[i].profile, cat[j].profile);
      auto ba = compare(cat[j].profile, cat[i].profile);
      REQUIRE(ab.checks.size() == ba.checks.size());
      for (size_t k = 0; k < ab.checks.size(); ++k) CHECK(ab.checks[k].verdict == ba.checks[k].verdict);
    }
  }
}

TEST_CASE("different dimensions stop at the gate") {
  auto R = compare(lookup("P:2").profile, lookup("P:3").profile);
  CHECK(R.obstruction());
  CHECK(R.first_mismatch()->id == "dim");
}

TEST_CASE("hypotheses are audited") {
  auto R = compare(lookup("abelian:2:2").profile, lookup("abelian:2:1").profile);
  const Check* ix = R.find("ix");
  REQUIRE(ix);
  CHECK(!ix->applicable);
  const Check* x = R.find("x");
  REQUIRE(x);
  CHECK(!x->applicable);
}

TEST_CASE("missing data gives insufficient verdicts") {
  auto A = lookup("abelian:2:1").profile, B = A;
  for (auto* P : {&A, &B}) {
    P->hodge.reset();
    P->dominoes.reset();
    P->charpolys.clear();
  }
  auto R = compare(A, B);
  CHECK(verdict(R, "vi") == Verdict::InsufficientData);
  CHECK(verdict(R, "xi") == Verdict::InsufficientData);
  CHECK(!R.obstruction());
}

TEST_CASE("adding matching data never creates a mismatch") {
  auto A = lookup("curve:2:1").profile;
  auto stripped = A;
  stripped.charpolys.clear();
  auto before = compare(stripped, stripped);
  auto after = compare(A, A);
  for (size_t k = 0; k < after.checks.size(); ++k)
    if (before.checks[k].verdict == Verdict::Match) CHECK(after.checks[k].verdict == Verdict::Match);
}

TEST_CASE("surface Hodge tables follow from TR slopes and h_W") {
  const auto& cat = builtin_catalog();
  int replays = 0;
  for (const auto& a : cat) {
    for (const auto& b : cat) {
      if (a.profile.d != 2 || b.profile.d != 2) continue;
      auto R = compare(a.profile, b.profile);
      if (verdict(R, "ii") == Verdict::Match && verdict(R, "viii") == Verdict::Match) {
        ++replays;
        CHECK(verdict(R, "xi") == Verdict::Match);
      }
    }
  }
  CHECK(replays > 0);
}

TEST_CASE("non Mazur-Ogus surface against a K3") {
  auto A = load_profile(data_path("profiles/synthetic_non_mo.json"));
  auto B = lookup("k3:h:1").profile;
  B.p = A.p;
  B.charpolys.clear();
  auto R = compare(A, B);
  CHECK(R.obstruction());
  CHECK(verdict(R, "xii") == Verdict::Mismatch);
  CHECK(to_json(R)["obstruction"] == true);
}
