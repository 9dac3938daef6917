#pragma once

#include <optional>
#include <vector>

#include "derinv/galois_ring.hpp"

namespace derinv {

struct GrMatrix {
  size_t rows = 0, cols = 0;
  std::vector<GrElem> a;  // row-major

  GrElem& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  const GrElem& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  friend bool operator==(const GrMatrix&, const GrMatrix&) = default;
};

GrMatrix zeros(const GaloisRing& R, size_t rows, size_t cols);
GrMatrix identity(const GaloisRing& R, size_t m);
GrMatrix mul(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B);
GrMatrix add(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B);
GrMatrix sub(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B);
GrMatrix scale(const GaloisRing& R, const GrMatrix& A, const GrElem& s);
GrMatrix sigma(const GaloisRing& R, const GrMatrix& A, int64_t e);
GrMatrix hcat(const GrMatrix& A, const GrMatrix& B);
GrMatrix block_diag(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B);
GrMatrix column(const GrMatrix& A, size_t j);
GrMatrix select_columns(const GrMatrix& A, const std::vector<size_t>& js);
bool is_zero(const GaloisRing& R, const GrMatrix& A);

// Division-free characteristic polynomial det(T I - A), leading coefficient first.
std::vector<GrElem> charpoly(const GaloisRing& R, const GrMatrix& A);

// P A Q = D with P, Q invertible and D diagonal with entries p^{diag[l]}
// (diag[l] = n means zero). diag has min(rows, cols) entries.
struct Smith {
  GrMatrix P, Q;
  std::vector<int> diag;
};
Smith smith(const GaloisRing& R, const GrMatrix& A);

GrMatrix inverse(const GaloisRing& R, const GrMatrix& A);  // DomainError if singular

// Columns generating {x : A x = 0}.
GrMatrix kernel(const GaloisRing& R, const GrMatrix& A);

// Finite-length modules M = (+)_i W_n / p^{ann[i]} as quotients of free modules.
GrMatrix relation_matrix(const GaloisRing& R, const std::vector<int>& ann);
// Columns generating {x in W_n^s : A x = 0 in the module with annihilators ann_t}.
GrMatrix module_kernel(const GaloisRing& R, const GrMatrix& A, const std::vector<int>& ann_t);
// Length of the submodule of M generated by the columns of G.
int span_length(const GaloisRing& R, const GrMatrix& G, const std::vector<int>& ann);
int module_length(const std::vector<int>& ann);
// c with G c = y in M, or nullopt.
std::optional<GrMatrix> solve(const GaloisRing& R, const GrMatrix& G, const std::vector<int>& ann, const GrMatrix& y);
// Reduce each coordinate of a column vector mod p^{ann[i]}.
GrMatrix reduce(const GaloisRing& R, const GrMatrix& x, const std::vector<int>& ann);

}  // namespace derinv
