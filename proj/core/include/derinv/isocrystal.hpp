#pragma once

#include <gmpxx.h>

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "derinv/linalg.hpp"
#include "derinv/slopes.hpp"
#include "derinv/witt.hpp"

namespace derinv {

// A sigma^e-linear map Phi(x) = A sigma^e(x) on W_n(F_q)^m.
struct FrobeniusMatrix {
  RingPtr ring;
  GrMatrix A;
  int64_t e = 1;

  size_t rank() const { return A.rows; }
};

FrobeniusMatrix frobenius_matrix(RingPtr ring, GrMatrix A, int64_t e = 1);
// Entries as Witt vectors; all must share field and precision.
FrobeniusMatrix frobenius_matrix(const std::vector<std::vector<WittVector>>& entries, int64_t e = 1);
// Companion matrix of T^m + c_{m-1} T^{m-1} + ... + c_0, coefficients leading
// first with leading coefficient 1.
FrobeniusMatrix companion(RingPtr ring, const std::vector<mpz_class>& monic_desc, int64_t e = 1);

// Slopes of Phi from the Newton polygon of the linearized map, divided by the
// number of twists. Throws PrecisionError if a vertex is ambiguous.
SlopeMultiset newton_slopes(const FrobeniusMatrix& M);

// Coefficients leading first ("T^2 - 6T + 27" is {1, -6, 27}). Trailing zero
// coefficients are zero roots and are dropped. DomainError on the zero
// polynomial or q not a prime power.
SlopeMultiset newton_from_charpoly(const std::vector<mpz_class>& coeffs_desc, const mpz_class& q);
SlopeMultiset newton_from_charpoly(const std::vector<int64_t>& coeffs_desc, int64_t q);

// Lower convex hull of (i, v_i), i ascending, as root valuations.
// Missing entries (nullopt) are points at infinity.
SlopeMultiset newton_polygon(const std::vector<std::optional<int64_t>>& vals_by_degree);

struct CrystallineSlopeData {
  int d = 0;
  std::vector<SlopeMultiset> degrees;  // size 2d+1
  std::optional<std::vector<int64_t>> betti;  // declared b_i, if any
};

struct CrysViolation {
  std::string constraint;  // constraint1 | constraint2 | range | rank | shape
  int degree;
  Rational slope;
  std::string detail;
};

std::vector<CrysViolation> validate_crys(const CrystallineSlopeData& data);

// Rank of the [0,1) part of H^d, or nullopt for infinite height.
std::optional<int64_t> height(const CrystallineSlopeData& data);

std::string format_violation(const CrysViolation& v);

}  // namespace derinv
