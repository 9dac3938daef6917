#include "derinv/linalg.hpp"

#include "derinv/errors.hpp"

namespace derinv {

GrMatrix zeros(const GaloisRing& R, size_t rows, size_t cols) {
  return GrMatrix{rows, cols, std::vector<GrElem>(rows * cols, R.zero())};
}

GrMatrix identity(const GaloisRing& R, size_t m) {
  GrMatrix I = zeros(R, m, m);
  for (size_t i = 0; i < m; ++i) I(i, i) = R.one();
  return I;
}

GrMatrix mul(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B) {
  if (A.cols != B.rows) throw ShapeError("matrix product shape mismatch");
  GrMatrix C = zeros(R, A.rows, B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t k = 0; k < A.cols; ++k) {
      const GrElem& aik = A(i, k);
      if (R.is_zero(aik)) continue;
      for (size_t j = 0; j < B.cols; ++j) C(i, j) = R.add(C(i, j), R.mul(aik, B(k, j)));
    }
  return C;
}

GrMatrix add(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw ShapeError("matrix sum shape mismatch");
  GrMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.add(A.a[i], B.a[i]);
  return C;
}

GrMatrix sub(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw ShapeError("matrix difference shape mismatch");
  GrMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
  return C;
}

GrMatrix scale(const GaloisRing& R, const GrMatrix& A, const GrElem& s) {
  GrMatrix C = A;
  for (auto& x : C.a) x = R.mul(x, s);
  return C;
}

GrMatrix sigma(const GaloisRing& R, const GrMatrix& A, int64_t e) {
  if (R.degree() == 1) return A;
  GrMatrix C = A;
  for (auto& x : C.a) x = R.sigma(x, e);
  return C;
}

GrMatrix hcat(const GrMatrix& A, const GrMatrix& B) {
  if (A.rows != B.rows) throw ShapeError("hcat row mismatch");
  GrMatrix C{A.rows, A.cols + B.cols, {}};
  C.a.reserve(C.rows * C.cols);
  for (size_t i = 0; i < A.rows; ++i) {
    for (size_t j = 0; j < A.cols; ++j) C.a.push_back(A(i, j));
    for (size_t j = 0; j < B.cols; ++j) C.a.push_back(B(i, j));
  }
  return C;
}

GrMatrix block_diag(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B) {
  GrMatrix C = zeros(R, A.rows + B.rows, A.cols + B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
  for (size_t i = 0; i < B.rows; ++i)
    for (size_t j = 0; j < B.cols; ++j) C(A.rows + i, A.cols + j) = B(i, j);
  return C;
}

GrMatrix column(const GrMatrix& A, size_t j) { return select_columns(A, {j}); }

GrMatrix select_columns(const GrMatrix& A, const std::vector<size_t>& js) {
  GrMatrix C{A.rows, js.size(), {}};
  C.a.reserve(C.rows * C.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j : js) C.a.push_back(A(i, j));
  return C;
}

bool is_zero(const GaloisRing& R, const GrMatrix& A) {
  for (const auto& x : A.a)
    if (!R.is_zero(x)) return false;
  return true;
}

std::vector<GrElem> charpoly(const GaloisRing& R, const GrMatrix& A) {
  if (A.rows != A.cols) throw ShapeError("characteristic polynomial of a non-square matrix");
  size_t m = A.rows;
  if (m == 0) return {R.one()};
  // Berkowitz: extend the characteristic polynomial of the leading r x r block
  // by a Toeplitz product.
  std::vector<GrElem> v{R.one(), R.neg(A(0, 0))};
  for (size_t r = 1; r < m; ++r) {
    std::vector<GrElem> t;
    t.push_back(R.one());
    t.push_back(R.neg(A(r, r)));
    std::vector<GrElem> w(r);  // A_r^k S
    for (size_t i = 0; i < r; ++i) w[i] = A(i, r);
    for (size_t k = 0; k < r; ++k) {
      GrElem dot = R.zero();
      for (size_t i = 0; i < r; ++i) dot = R.add(dot, R.mul(A(r, i), w[i]));
      t.push_back(R.neg(dot));
      if (k + 1 == r) break;
      std::vector<GrElem> nw(r, R.zero());
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) nw[i] = R.add(nw[i], R.mul(A(i, j), w[j]));
      w = std::move(nw);
    }
    std::vector<GrElem> nv(r + 2, R.zero());
    for (size_t i = 0; i < r + 2; ++i)
      for (size_t j = 0; j <= std::min(i, r); ++j) nv[i] = R.add(nv[i], R.mul(t[i - j], v[j]));
    v = std::move(nv);
  }
  return v;
}

namespace {

void swap_rows(GrMatrix& M, size_t i, size_t j) {
  if (i == j) return;
  for (size_t c = 0; c < M.cols; ++c) std::swap(M(i, c), M(j, c));
}

void swap_cols(GrMatrix& M, size_t i, size_t j) {
  if (i == j) return;
  for (size_t r = 0; r < M.rows; ++r) std::swap(M(r, i), M(r, j));
}

// row_i -= f * row_l
void row_axpy(const GaloisRing& R, GrMatrix& M, size_t i, size_t l, const GrElem& f) {
  for (size_t c = 0; c < M.cols; ++c)
    if (!R.is_zero(M(l, c))) M(i, c) = R.sub(M(i, c), R.mul(f, M(l, c)));
}

void col_axpy(const GaloisRing& R, GrMatrix& M, size_t j, size_t l, const GrElem& f) {
  for (size_t r = 0; r < M.rows; ++r)
    if (!R.is_zero(M(r, l))) M(r, j) = R.sub(M(r, j), R.mul(f, M(r, l)));
}

}  // namespace

Smith smith(const GaloisRing& R, const GrMatrix& A) {
  int n = R.precision();
  GrMatrix D = A;
  GrMatrix P = identity(R, A.rows), Q = identity(R, A.cols);
  size_t lim = std::min(A.rows, A.cols);
  std::vector<int> diag(lim, n);
  for (size_t l = 0; l < lim; ++l) {
    int best = n;
    size_t bi = l, bj = l;
    for (size_t i = l; i < D.rows && best > 0; ++i)
      for (size_t j = l; j < D.cols; ++j) {
        int v = R.valuation(D(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == n) break;
    swap_rows(D, l, bi);
    swap_rows(P, l, bi);
    swap_cols(D, l, bj);
    swap_cols(Q, l, bj);
    GrElem u = R.inverse(R.div_p_pow(D(l, l), best));
    for (size_t c = 0; c < D.cols; ++c) D(l, c) = R.mul(D(l, c), u);
    for (size_t c = 0; c < P.cols; ++c) P(l, c) = R.mul(P(l, c), u);
    for (size_t i = l + 1; i < D.rows; ++i) {
      if (R.is_zero(D(i, l))) continue;
      GrElem f = R.div_p_pow(D(i, l), best);
      row_axpy(R, D, i, l, f);
      row_axpy(R, P, i, l, f);
    }
    for (size_t j = l + 1; j < D.cols; ++j) {
      if (R.is_zero(D(l, j))) continue;
      GrElem f = R.div_p_pow(D(l, j), best);
      col_axpy(R, D, j, l, f);
      col_axpy(R, Q, j, l, f);
    }
    diag[l] = best;
  }
  return Smith{std::move(P), std::move(Q), std::move(diag)};
}

GrMatrix inverse(const GaloisRing& R, const GrMatrix& A) {
  if (A.rows != A.cols) throw ShapeError("inverse of a non-square matrix");
  // D = P A Q with D = I, so A^{-1} = Q P.
  Smith s = smith(R, A);
  for (int k : s.diag)
    if (k != 0) throw DomainError("matrix is not invertible over W_n");
  return mul(R, s.Q, s.P);
}

GrMatrix kernel(const GaloisRing& R, const GrMatrix& A) {
  int n = R.precision();
  Smith s = smith(R, A);
  // A x = 0 iff D y = 0 with x = Q y.
  GrMatrix Y = zeros(R, A.cols, A.cols);
  size_t used = 0;
  for (size_t l = 0; l < A.cols; ++l) {
    int k = l < s.diag.size() ? s.diag[l] : n;
    if (k == 0) continue;
    Y(l, used) = R.p_power(n - k);
    ++used;
  }
  std::vector<size_t> js(used);
  for (size_t i = 0; i < used; ++i) js[i] = i;
  return mul(R, s.Q, select_columns(Y, js));
}

GrMatrix relation_matrix(const GaloisRing& R, const std::vector<int>& ann) {
  GrMatrix D = zeros(R, ann.size(), ann.size());
  for (size_t i = 0; i < ann.size(); ++i) D(i, i) = R.p_power(ann[i]);
  return D;
}

GrMatrix module_kernel(const GaloisRing& R, const GrMatrix& A, const std::vector<int>& ann_t) {
  if (A.rows != ann_t.size()) throw ShapeError("module_kernel: row count does not match target");
  GrMatrix K = kernel(R, hcat(A, relation_matrix(R, ann_t)));
  GrMatrix out{A.cols, K.cols, {}};
  out.a.assign(K.a.begin(), K.a.begin() + A.cols * K.cols);
  return out;
}

int module_length(const std::vector<int>& ann) {
  int s = 0;
  for (int e : ann) s += e;
  return s;
}

int span_length(const GaloisRing& R, const GrMatrix& G, const std::vector<int>& ann) {
  if (G.rows != ann.size()) throw ShapeError("span_length: row count does not match module");
  Smith s = smith(R, hcat(G, relation_matrix(R, ann)));
  int quotient = 0;
  for (size_t l = 0; l < ann.size(); ++l) quotient += s.diag[l];
  return module_length(ann) - quotient;
}

std::optional<GrMatrix> solve(const GaloisRing& R, const GrMatrix& G, const std::vector<int>& ann, const GrMatrix& y) {
  if (G.rows != ann.size() || y.rows != ann.size() || y.cols != 1) throw ShapeError("solve: shape mismatch");
  int n = R.precision();
  GrMatrix H = hcat(G, relation_matrix(R, ann));
  Smith s = smith(R, H);
  // H z = y  <=>  D (Q^{-1} z) = P y
  GrMatrix b = mul(R, s.P, y);
  GrMatrix w = zeros(R, H.cols, 1);
  for (size_t i = 0; i < H.rows; ++i) {
    int k = s.diag[i];
    if (R.valuation(b(i, 0)) < k) return std::nullopt;
    if (k < n) w(i, 0) = R.div_p_pow(b(i, 0), k);
  }
  GrMatrix z = mul(R, s.Q, w);
  GrMatrix c{G.cols, 1, {}};
  c.a.assign(z.a.begin(), z.a.begin() + G.cols);
  return c;
}

GrMatrix reduce(const GaloisRing& R, const GrMatrix& x, const std::vector<int>& ann) {
  GrMatrix out = x;
  uint64_t p = R.p();
  for (size_t i = 0; i < x.rows; ++i) {
    uint64_t pk = 1;
    for (int e = 0; e < ann[i] && e < R.precision(); ++e) pk *= p;
    if (ann[i] >= R.precision()) continue;
    for (size_t j = 0; j < x.cols; ++j)
      for (auto& c : out(i, j).c) c %= pk;
  }
  return out;
}

}  // namespace derinv
