#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace derinv {

// Element of F_q, encoded as sum c_i p^i where c_i is the coefficient of t^i.
struct Fq {
  uint32_t code = 0;
  friend bool operator==(Fq, Fq) = default;
  friend auto operator<=>(Fq, Fq) = default;
};

// F_q = F_p[t]/(m(t)), m the first primitive monic polynomial in Conway
// order. For a = 1 this is t - g with g the least primitive root, so the
// encoding of an element is just its residue.
class GroundField {
 public:
  static constexpr uint64_t kMaxOrder = 1u << 20;

  // Cached per (p, a). Throws DomainError for non-prime p or q too large.
  static std::shared_ptr<const GroundField> get(uint32_t p, uint32_t a);

  uint32_t p() const { return p_; }
  uint32_t degree() const { return a_; }
  uint32_t order() const { return q_; }
  // Low-to-high coefficients, size a+1, monic.
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  Fq zero() const { return Fq{0}; }
  Fq one() const { return Fq{1}; }
  Fq from_int(int64_t v) const;
  Fq generator() const;  // the class of t

  Fq add(Fq x, Fq y) const;
  Fq sub(Fq x, Fq y) const;
  Fq neg(Fq x) const;
  Fq mul(Fq x, Fq y) const;
  Fq inv(Fq x) const;  // DomainError on zero
  Fq pow(Fq x, uint64_t e) const;
  // Discrete log base t for x != 0, and its inverse (e taken mod q-1).
  uint32_t log(Fq x) const { return log_[x.code]; }
  Fq exp(uint64_t e) const { return Fq{exp_[e % (q_ - 1)]}; }
  // x^(p^k) for any integer k (negative k inverts the Frobenius).
  Fq frob(Fq x, int64_t k) const;

  std::vector<uint32_t> coeffs(Fq x) const;
  Fq from_coeffs(const std::vector<uint32_t>& c) const;

  // Integers for a = 1, polynomials in t otherwise ("2t^2+t+1").
  std::string format(Fq x) const;
  Fq parse(std::string_view s) const;

  bool operator==(const GroundField& o) const { return p_ == o.p_ && a_ == o.a_; }

 private:
  GroundField(uint32_t p, uint32_t a);

  uint32_t p_, a_, q_;
  std::vector<uint32_t> modulus_;
  std::vector<uint32_t> exp_;  // exp_[k] = t^k, k in [0, q-2]
  std::vector<uint32_t> log_;  // log_[x] for x != 0
};

using FieldPtr = std::shared_ptr<const GroundField>;

bool is_prime(uint64_t n);
std::vector<uint64_t> prime_factors(uint64_t n);

}  // namespace derinv
