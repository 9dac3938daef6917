#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "derinv/field.hpp"
#include "derinv/galois_ring.hpp"

namespace derinv {

class WittVector {
 public:
  WittVector(FieldPtr field, std::vector<Fq> coords);
  static WittVector zero(FieldPtr field, int n);
  static WittVector one(FieldPtr field, int n);
  static WittVector from_int(FieldPtr field, int n, int64_t k);

  const FieldPtr& field() const { return field_; }
  int precision() const { return int(coords_.size()); }
  const std::vector<Fq>& coords() const { return coords_; }
  Fq operator[](size_t i) const { return coords_[i]; }
  bool is_zero() const;

  friend bool operator==(const WittVector& x, const WittVector& y) {
    return *x.field_ == *y.field_ && x.coords_ == y.coords_;
  }

 private:
  FieldPtr field_;
  std::vector<Fq> coords_;
};

// Ring operations evaluate cached structure polynomials. Operands must share
// field and precision; a mismatch throws ShapeError.
WittVector add(const WittVector& x, const WittVector& y);
WittVector sub(const WittVector& x, const WittVector& y);
WittVector mul(const WittVector& x, const WittVector& y);
WittVector neg(const WittVector& x);
WittVector frobenius(const WittVector& x);
WittVector verschiebung(const WittVector& x);
WittVector mul_by_p(const WittVector& x);
WittVector teichmuller(FieldPtr field, Fq a, int n);
// Explicit precision drop; the only way precision ever changes.
WittVector truncate(const WittVector& x, int n);

// Ghost components w_i = sum_{j<=i} p^j lift(x_j)^{p^(i-j)} mod p^n. The
// default lift sends an element to its integer code, which is the canonical
// residue lift over F_p.
using IntLift = std::function<uint64_t(Fq)>;
std::vector<uint64_t> ghost(const WittVector& x, const IntLift& lift = {});

// Galois ring conversions, used by the matrix code.
GrElem to_ring(const WittVector& x);
WittVector from_ring(const GaloisRing& R, const GrElem& r);

// The cached structure polynomials S_k (sum) and P_k (product) mod p in the
// variables X_0..X_{n-1}, Y_0..Y_{n-1}.
class WittPolynomials {
 public:
  struct Term {
    uint32_t coef;
    std::vector<std::pair<uint16_t, uint32_t>> powers;  // (variable, exponent)
  };
  static const WittPolynomials& get(uint32_t p, int n);

  const std::vector<Term>& sum(int k) const { return sum_[k]; }
  const std::vector<Term>& prod(int k) const { return prod_[k]; }
  size_t term_count() const;

 private:
  WittPolynomials(uint32_t p, int n);
  std::vector<std::vector<Term>> sum_, prod_;
};

std::string format_witt(const WittVector& x);

}  // namespace derinv
