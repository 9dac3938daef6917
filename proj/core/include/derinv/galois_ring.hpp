#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "derinv/field.hpp"

namespace derinv {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

// Element of GR(p^n, a) = (Z/p^n)[t]/(M), coefficients low to high in [0, p^n).
struct GrElem {
  std::vector<uint64_t> c;
  friend bool operator==(const GrElem&, const GrElem&) = default;
};

// The Galois ring realization of W_n(F_q). M is the integer lift of the
// field modulus, so reduction mod p recovers F_q with the same encoding.
class GaloisRing {
 public:
  // Requires p^n < 2^62.
  static std::shared_ptr<const GaloisRing> get(uint32_t p, uint32_t a, int n);

  const FieldPtr& field() const { return field_; }
  uint32_t p() const { return field_->p(); }
  uint32_t degree() const { return field_->degree(); }
  int precision() const { return n_; }
  uint64_t modulus() const { return N_; }

  GrElem zero() const;
  GrElem one() const;
  GrElem from_int(int64_t v) const;
  // p^k as an element (zero once k >= n).
  GrElem p_power(int k) const;

  GrElem add(const GrElem& x, const GrElem& y) const;
  GrElem sub(const GrElem& x, const GrElem& y) const;
  GrElem neg(const GrElem& x) const;
  GrElem mul(const GrElem& x, const GrElem& y) const;
  GrElem mul_int(const GrElem& x, int64_t k) const;
  GrElem pow(GrElem x, uint64_t e) const;

  bool is_zero(const GrElem& x) const;
  // p-adic valuation, n for zero.
  int valuation(const GrElem& x) const;
  // Units only; DomainError otherwise.
  GrElem inverse(const GrElem& x) const;
  // x / p^k for val(x) >= k. The top k digits of the result are zero.
  GrElem div_p_pow(const GrElem& x, int k) const;

  Fq residue(const GrElem& x) const;
  // Digit lift of a field element (coefficients in [0, p)).
  GrElem lift(Fq x) const;
  GrElem teichmuller(Fq x) const;

  // sigma^e, e any integer.
  GrElem sigma(const GrElem& x, int64_t e = 1) const;

  // W_n(F_q) coordinates <-> ring element.
  GrElem from_witt(const std::vector<Fq>& coords) const;
  std::vector<Fq> to_witt(const GrElem& x) const;

 private:
  GaloisRing(uint32_t p, uint32_t a, int n);
  uint64_t mm(uint64_t x, uint64_t y) const {
    return uint64_t(u128(x) * y % N_);
  }
  GrElem eval_at(const GrElem& x, const std::vector<GrElem>& powers) const;

  FieldPtr field_;
  int n_;
  uint64_t N_;
  std::vector<uint64_t> M_;                    // monic, size a+1
  std::vector<std::vector<GrElem>> sigma_pow_;  // sigma_pow_[e][i] = sigma^e(t)^i
};

using RingPtr = std::shared_ptr<const GaloisRing>;

}  // namespace derinv
