#include <doctest.h>

#include "derinv/errors.hpp"
#include "derinv/field.hpp"
#include "derinv/witt.hpp"
#include "helpers.hpp"

using namespace derinv;
using namespace derinv::testing;

TEST_CASE("field arithmetic") {
  auto F = GroundField::get(3, 2);
  CHECK(F->order() == 9);
  for (uint32_t c = 1; c < 9; ++c) CHECK(F->mul(Fq{c}, F->inv(Fq{c})) == F->one());
  Fq t = F->generator();
  CHECK(F->frob(F->frob(t, 1), -1) == t);
  CHECK(F->frob(t, 2) == t);
  CHECK(F->parse(F->format(F->add(t, F->one()))) == F->add(t, F->one()));
  CHECK_THROWS_AS(GroundField::get(4, 1), DomainError);
  CHECK_THROWS_AS(F->inv(F->zero()), DomainError);
}

TEST_CASE("Conway modulus for small fields") {
  // t^2 + 2t + 2 over F_3, t^3 + t + 1 over F_2
  CHECK(GroundField::get(3, 2)->modulus() == std::vector<uint32_t>{2, 2, 1});
  CHECK(GroundField::get(2, 3)->modulus() == std::vector<uint32_t>{1, 1, 0, 1});
  CHECK(GroundField::get(5, 1)->generator() == Fq{2});
}

TEST_CASE("W_n(F_p) matches Z/p^n") {
  for (uint32_t p : {2u, 3u, 5u}) {
    auto F = GroundField::get(p, 1);
    for (int n = 1; n <= 4; ++n) {
      uint64_t N = ipow(p, n);
      for (int s = 0; s < 50; ++s) {
        WittVector x = random_witt(F, n), y = random_witt(F, n);
        uint64_t a = witt_to_int(x), b = witt_to_int(y);
        CHECK(int_to_witt(F, n, a) == x);
        CHECK(witt_to_int(add(x, y)) == (a + b) % N);
        CHECK(witt_to_int(mul(x, y)) == a * b % N);
        CHECK(witt_to_int(sub(x, y)) == (a + N - b) % N);
        CHECK(witt_to_int(verschiebung(x)) == p * a % N);
        CHECK(frobenius(x) == x);
      }
    }
  }
}

TEST_CASE("ghost components are additive and multiplicative") {
  auto F = GroundField::get(3, 1);
  for (int s = 0; s < 50; ++s) {
    WittVector x = random_witt(F, 4), y = random_witt(F, 4);
    auto gx = ghost(x), gy = ghost(y), gs = ghost(add(x, y)), gp = ghost(mul(x, y));
    for (int i = 0; i < 4; ++i) {
      uint64_t m = ipow(3, i + 1);
      CHECK((gx[i] + gy[i]) % m == gs[i] % m);
      CHECK(gx[i] % m * (gy[i] % m) % m == gp[i] % m);
    }
  }
}

TEST_CASE("the small worked sum") {
  auto F = GroundField::get(3, 1);
  WittVector one(F, {F->one(), F->zero()});
  CHECK(format_witt(add(one, one)) == "(2,1)");
  WittVector two = WittVector::from_int(F, 2, 2);
  CHECK(format_witt(two) == "(2,1)");
}

TEST_CASE("W_n(F_9) ring structure") {
  auto F = GroundField::get(3, 2);
  for (int s = 0; s < 40; ++s) {
    WittVector x = random_witt(F, 3), y = random_witt(F, 3), z = random_witt(F, 3);
    CHECK(add(x, y) == add(y, x));
    CHECK(mul(x, y) == mul(y, x));
    CHECK(mul(x, add(y, z)) == add(mul(x, y), mul(x, z)));
    CHECK(mul(mul(x, y), z) == mul(x, mul(y, z)));
    CHECK(frobenius(mul(x, y)) == mul(frobenius(x), frobenius(y)));
    CHECK(frobenius(add(x, y)) == add(frobenius(x), frobenius(y)));
    CHECK(frobenius(frobenius(x)) == x);
    CHECK(frobenius(verschiebung(x)) == mul_by_p(x));
    CHECK(verschiebung(frobenius(x)) == mul_by_p(x));
    CHECK(mul(verschiebung(x), y) == verschiebung(mul(x, frobenius(y))));
    CHECK(add(x, neg(x)).is_zero());
  }
}

TEST_CASE("Teichmuller lifts are multiplicative") {
  auto F = GroundField::get(5, 2);
  for (int s = 0; s < 20; ++s) {
    Fq a{uint32_t(uniform(0, 24))}, b{uint32_t(uniform(0, 24))};
    CHECK(mul(teichmuller(F, a, 3), teichmuller(F, b, 3)) == teichmuller(F, F->mul(a, b), 3));
  }
}

TEST_CASE("precision is explicit") {
  auto F = GroundField::get(2, 1);
  WittVector x = WittVector::one(F, 3), y = WittVector::one(F, 2);
  CHECK_THROWS_AS(add(x, y), ShapeError);
  CHECK(add(truncate(x, 2), y) == WittVector::from_int(F, 2, 2));
  CHECK_THROWS_AS(add(WittVector::one(F, 2), WittVector::one(GroundField::get(3, 1), 2)), ShapeError);
}

TEST_CASE("Galois ring agrees with Witt arithmetic") {
  auto R = GaloisRing::get(3, 2, 3);
  auto F = R->field();
  for (int s = 0; s < 30; ++s) {
    WittVector x = random_witt(F, 3), y = random_witt(F, 3);
    CHECK(from_ring(*R, R->add(to_ring(x), to_ring(y))) == add(x, y));
    CHECK(from_ring(*R, R->mul(to_ring(x), to_ring(y))) == mul(x, y));
    CHECK(from_ring(*R, R->sigma(to_ring(x), 1)) == frobenius(x));
  }
}

TEST_CASE("structure polynomials are cached") {
  const auto& a = WittPolynomials::get(3, 3);
  const auto& b = WittPolynomials::get(3, 3);
  CHECK(&a == &b);
  CHECK(a.term_count() > 0);
  // S_0 = X_0 + Y_0
  CHECK(a.sum(0).size() == 2);
}
