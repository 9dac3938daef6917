#include "derinv/rmod.hpp"

#include <array>

#include "derinv/errors.hpp"
#include "derinv/witt.hpp"

namespace derinv {

namespace {

GrMatrix vcat(const GaloisRing& R, const GrMatrix& A, const GrMatrix& B) {
  if (A.rows == 0) return B;
  if (A.cols != B.cols) throw ShapeError("vcat column mismatch");
  GrMatrix C = zeros(R, A.rows + B.rows, A.cols);
  std::copy(A.a.begin(), A.a.end(), C.a.begin());
  std::copy(B.a.begin(), B.a.end(), C.a.begin() + A.a.size());
  return C;
}

GrMatrix unit(const GaloisRing& R, size_t g, size_t j) {
  GrMatrix e = zeros(R, g, 1);
  e(j, 0) = R.one();
  return e;
}

void check_map(const GaloisRing& R, const GrMatrix& A, const std::vector<int>& src, const std::vector<int>& dst,
               const std::string& what) {
  if (A.rows != dst.size() || A.cols != src.size())
    throw PresentationError(what + ": expected " + std::to_string(dst.size()) + "x" + std::to_string(src.size()) +
                            " matrix, got " + std::to_string(A.rows) + "x" + std::to_string(A.cols));
  for (size_t r = 0; r < A.rows; ++r)
    for (size_t c = 0; c < A.cols; ++c)
      if (R.valuation(A(r, c)) + src[c] < dst[r])
        throw PresentationError(what + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                                ") does not respect annihilators");
}

// x == y in M^i modulo the truncation boundary
bool equal_mod(const GaloisRing& R, const RDegree& deg, const GrMatrix& x, const GrMatrix& y) {
  GrMatrix diff = sub(R, x, y);
  if (is_zero(R, reduce(R, diff, deg.ann))) return true;
  if (deg.boundary.cols == 0) return false;
  return solve(R, deg.boundary, deg.ann, diff).has_value();
}

std::string vec_string(const GaloisRing& R, const GrMatrix& x) {
  std::string s = "[";
  for (size_t i = 0; i < x.rows; ++i) {
    if (i) s += ",";
    s += format_witt(from_ring(R, x(i, 0)));
  }
  return s + "]";
}

struct Quotient {
  std::vector<int> ann;
  GrMatrix P;        // coordinates: rows `kept` of P x
  GrMatrix lifts;    // columns: lifts of the new generators
  std::vector<size_t> kept;
};

// M / (submodule generated by Z)
Quotient quotient(const GaloisRing& R, const std::vector<int>& ann, const GrMatrix& Z) {
  Smith s = smith(R, hcat(relation_matrix(R, ann), Z));
  Quotient q;
  q.P = s.P;
  GrMatrix Pinv = inverse(R, s.P);
  for (size_t l = 0; l < ann.size(); ++l) {
    int k = s.diag[l];
    if (k > 0) {
      q.kept.push_back(l);
      q.ann.push_back(k);
    }
  }
  q.lifts = select_columns(Pinv, q.kept);
  return q;
}

GrMatrix project(const GaloisRing& R, const Quotient& q, const GrMatrix& x) {
  GrMatrix y = mul(R, q.P, x);
  GrMatrix out = zeros(R, q.kept.size(), x.cols);
  for (size_t r = 0; r < q.kept.size(); ++r)
    for (size_t c = 0; c < x.cols; ++c) out(r, c) = y(q.kept[r], c);
  return reduce(R, out, q.ann);
}

struct Sub {
  std::vector<int> ann;
  GrMatrix gens;  // in ambient coordinates
  std::vector<int> ambient_ann;
};

Sub submodule(const GaloisRing& R, const std::vector<int>& ambient, const GrMatrix& G) {
  GrMatrix rel = module_kernel(R, G, ambient);
  Smith s = smith(R, rel);
  GrMatrix Gp = mul(R, G, inverse(R, s.P));
  Sub out;
  out.ambient_ann = ambient;
  std::vector<size_t> kept;
  for (size_t l = 0; l < G.cols; ++l) {
    int k = l < s.diag.size() ? s.diag[l] : R.precision();
    if (k > 0) {
      kept.push_back(l);
      out.ann.push_back(k);
    }
  }
  out.gens = select_columns(Gp, kept);
  return out;
}

GrMatrix coords_in(const GaloisRing& R, const Sub& S, const GrMatrix& w, const char* what) {
  GrMatrix out = zeros(R, S.ann.size(), w.cols);
  for (size_t c = 0; c < w.cols; ++c) {
    auto sol = solve(R, S.gens, S.ambient_ann, column(w, c));
    if (!sol) throw DomainError(std::string("submodule is not stable under ") + what);
    for (size_t r = 0; r < S.ann.size(); ++r) out(r, c) = (*sol)(r, 0);
  }
  return reduce(R, out, S.ann);
}

GrMatrix apply_semilinear(const GaloisRing& R, const GrMatrix& A, const GrMatrix& x, int64_t e) {
  return mul(R, A, sigma(R, x, e));
}

}  // namespace

RModuleExplicit::RModuleExplicit(RingPtr ring, int lo, std::vector<RDegree> degrees, std::optional<Truncation> trunc)
    : ring_(std::move(ring)), lo_(lo), deg_(std::move(degrees)), trunc_(trunc) {
  const auto& R = *ring_;
  for (size_t k = 0; k < deg_.size(); ++k) {
    auto& D = deg_[k];
    size_t g = D.ann.size();
    size_t gn = k + 1 < deg_.size() ? deg_[k + 1].ann.size() : 0;
    if (D.F.rows == 0 && D.F.cols == 0) D.F = zeros(R, g, g);
    if (D.V.rows == 0 && D.V.cols == 0) D.V = zeros(R, g, g);
    if (D.d.rows == 0 && D.d.cols == 0) D.d = zeros(R, gn, g);
    if (D.boundary.rows == 0 && D.boundary.cols == 0) D.boundary = zeros(R, g, 0);
  }
  check_presentation();
}

const RDegree& RModuleExplicit::at(int i) const {
  if (!has(i)) throw ShapeError("degree " + std::to_string(i) + " outside the module");
  return deg_[size_t(i - lo_)];
}

int RModuleExplicit::length(int i) const { return has(i) ? module_length(at(i).ann) : 0; }

RModuleExplicit RModuleExplicit::zero(RingPtr ring, int lo, int hi) {
  return RModuleExplicit(std::move(ring), lo, std::vector<RDegree>(size_t(hi - lo + 1)));
}

void RModuleExplicit::check_presentation() const {
  const auto& R = *ring_;
  for (int i = lo(); i <= hi(); ++i) {
    const auto& D = at(i);
    std::string tag = "degree " + std::to_string(i);
    for (int e : D.ann)
      if (e < 1 || e > R.precision()) throw PresentationError(tag + ": annihilator exponent out of range");
    check_map(R, D.F, D.ann, D.ann, tag + " F");
    check_map(R, D.V, D.ann, D.ann, tag + " V");
    std::vector<int> next = has(i + 1) ? at(i + 1).ann : std::vector<int>{};
    check_map(R, D.d, D.ann, next, tag + " d");
    if (D.boundary.rows != D.ann.size()) throw PresentationError(tag + ": boundary has the wrong number of rows");
  }
}

std::vector<RelationViolation> check_relations(const RModuleExplicit& M) {
  const auto& R = *M.ring();
  std::vector<RelationViolation> out;
  GrElem pel = R.p_power(1);
  std::vector<GrElem> scalars{R.teichmuller(R.field()->generator())};
  if (R.precision() > 1) scalars.push_back(pel);
  for (int i = M.lo(); i <= M.hi(); ++i) {
    const auto& D = M.at(i);
    size_t g = D.ann.size();
    bool up = M.has(i + 1), up2 = M.has(i + 2);
    for (size_t j = 0; j < g; ++j) {
      GrMatrix e = unit(R, g, j);
      auto Fx = [&](int deg, const GrMatrix& x) { return apply_semilinear(R, M.at(deg).F, x, 1); };
      auto Vx = [&](int deg, const GrMatrix& x) { return apply_semilinear(R, M.at(deg).V, x, -1); };
      auto dx = [&](int deg, const GrMatrix& x) { return mul(R, M.at(deg).d, x); };
      auto report = [&](const char* rel, int tdeg, const GrMatrix& lhs, const GrMatrix& rhs) {
        if (equal_mod(R, M.at(tdeg), lhs, rhs)) return;
        out.push_back({rel, i, int(j), "lhs " + vec_string(R, lhs) + " != rhs " + vec_string(R, rhs)});
      };
      GrMatrix pe = scale(R, e, pel);
      report("FV=p", i, Fx(i, Vx(i, e)), pe);
      report("VF=p", i, Vx(i, Fx(i, e)), pe);
      for (const auto& a : scalars) {
        report("Fa=sigma(a)F", i, Fx(i, scale(R, e, a)), scale(R, Fx(i, e), R.sigma(a, 1)));
        report("Vsigma(a)=aV", i, Vx(i, scale(R, e, R.sigma(a, 1))), scale(R, Vx(i, e), a));
        if (up) report("da=ad", i + 1, dx(i, scale(R, e, a)), scale(R, dx(i, e), a));
      }
      if (up2) report("d^2=0", i + 2, dx(i + 1, dx(i, e)), zeros(R, M.at(i + 2).ann.size(), 1));
      if (up) {
        report("FdV=d", i + 1, Fx(i + 1, dx(i, Vx(i, e))), dx(i, e));
        report("Vd=pdV", i + 1, Vx(i + 1, dx(i, e)), scale(R, dx(i, Vx(i, e)), pel));
        report("dF=pFd", i + 1, dx(i, Fx(i, e)), scale(R, Fx(i + 1, dx(i, e)), pel));
      }
    }
  }
  return out;
}

std::string format_violation(const RelationViolation& v) {
  return v.relation + " violation at degree " + std::to_string(v.degree) + ", generator " + std::to_string(v.generator) +
         ": " + v.detail;
}

namespace {

struct KernelChain {
  GrMatrix gens;
  int length;
  int steps;
};

KernelChain kernel_chain(const RModuleExplicit& M, int i) {
  const auto& R = *M.ring();
  const auto& D = M.at(i);
  int full = module_length(D.ann);
  if (!M.has(i + 1) || M.at(i + 1).ann.empty()) return {identity(R, D.ann.size()), full, 0};
  const auto& tgt = M.at(i + 1).ann;
  GrMatrix C = D.d;
  GrMatrix stack = zeros(R, 0, D.ann.size());
  std::vector<int> ann_rep;
  int prev = full + 1;
  KernelChain kc{identity(R, D.ann.size()), full, 0};
  for (int j = 0; j <= full + 1; ++j) {
    // x in K_j iff sigma^k(C_k) x = 0 for k <= j, C_k = d V^k up to the sigma twist
    stack = vcat(R, stack, sigma(R, C, j));
    ann_rep.insert(ann_rep.end(), tgt.begin(), tgt.end());
    GrMatrix K = module_kernel(R, stack, ann_rep);
    int len = span_length(R, K, D.ann);
    kc = {K, len, j + 1};
    if (len == prev) break;
    prev = len;
    C = mul(R, C, sigma(R, D.V, -j));
  }
  return kc;
}

struct ImageChain {
  GrMatrix gens;
  int length;
  int steps;
};

ImageChain image_chain(const RModuleExplicit& M, int i) {
  const auto& R = *M.ring();
  const auto& D = M.at(i);
  if (!M.has(i - 1) || M.at(i - 1).ann.empty()) return {zeros(R, D.ann.size(), 0), 0, 0};
  const GrMatrix& dm = M.at(i - 1).d;
  GrMatrix Pi = identity(R, D.ann.size());
  GrMatrix span = zeros(R, D.ann.size(), 0);
  int prev = -1;
  ImageChain ic{span, 0, 0};
  int full = module_length(D.ann);
  for (int j = 0; j <= full + 1; ++j) {
    span = hcat(span, mul(R, Pi, sigma(R, dm, j)));
    int len = span_length(R, span, D.ann);
    ic = {span, len, j + 1};
    if (len == prev) break;
    prev = len;
    Pi = mul(R, Pi, sigma(R, D.F, j));
  }
  return ic;
}

}  // namespace

Submodule v_inf_Z(const RModuleExplicit& M, int i) {
  auto kc = kernel_chain(M, i);
  return {i, kc.gens, kc.length};
}

Submodule f_inf_B(const RModuleExplicit& M, int i) {
  auto ic = image_chain(M, i);
  return {i, ic.gens, ic.length};
}

ChainStats chain_stats(const RModuleExplicit& M, int i) {
  return {kernel_chain(M, i).steps, image_chain(M, i).steps};
}

RModuleExplicit domino_of(const RModuleExplicit& M, int i) {
  const auto& R = *M.ring();
  if (!M.has(i)) throw ShapeError("domino_of: degree outside the module");
  const auto& Mi = M.at(i);
  Quotient q = quotient(R, Mi.ann, v_inf_Z(M, i).gens);

  RDegree src;
  src.ann = q.ann;
  size_t gq = q.ann.size();
  src.F = zeros(R, gq, gq);
  src.V = zeros(R, gq, gq);
  if (gq) {
    src.F = project(R, q, apply_semilinear(R, Mi.F, q.lifts, 1));
    src.V = project(R, q, apply_semilinear(R, Mi.V, q.lifts, -1));
  }
  src.boundary = project(R, q, Mi.boundary);

  RDegree tgt;
  if (M.has(i + 1)) {
    const auto& Mj = M.at(i + 1);
    Sub B = submodule(R, Mj.ann, f_inf_B(M, i + 1).gens);
    size_t gb = B.ann.size();
    tgt.ann = B.ann;
    tgt.F = zeros(R, gb, gb);
    tgt.V = zeros(R, gb, gb);
    if (gb) {
      tgt.F = coords_in(R, B, apply_semilinear(R, Mj.F, B.gens, 1), "F");
      tgt.V = coords_in(R, B, apply_semilinear(R, Mj.V, B.gens, -1), "V");
    }
    // boundary inside B: first block of ker [B | boundary]
    if (Mj.boundary.cols && gb) {
      GrMatrix K = module_kernel(R, hcat(B.gens, Mj.boundary), Mj.ann);
      GrMatrix c = zeros(R, gb, K.cols);
      for (size_t r = 0; r < gb; ++r)
        for (size_t k = 0; k < K.cols; ++k) c(r, k) = K(r, k);
      tgt.boundary = reduce(R, c, B.ann);
    } else {
      tgt.boundary = zeros(R, gb, 0);
    }
    src.d = gq ? coords_in(R, B, mul(R, Mi.d, q.lifts), "d") : zeros(R, gb, 0);
    tgt.d = zeros(R, 0, gb);
  } else {
    tgt.F = zeros(R, 0, 0);
    tgt.V = zeros(R, 0, 0);
    tgt.d = zeros(R, 0, 0);
    tgt.boundary = zeros(R, 0, 0);
    src.d = zeros(R, 0, gq);
  }
  return RModuleExplicit(M.ring(), i, {src, tgt}, M.truncation());
}

int64_t domino_dim(const RModuleExplicit& D, int i) {
  const auto& R = *D.ring();
  for (int k = D.lo(); k <= D.hi(); ++k)
    if (k != i && k != i + 1 && !D.at(k).ann.empty()) throw DomainError("not a domino: nonzero outside degrees i, i+1");
  if (!D.has(i)) return 0;
  if (v_inf_Z(D, i).length != 0) throw DomainError("not a domino: V^{-inf}Z is nonzero in the source degree");
  if (D.has(i + 1) && f_inf_B(D, i + 1).length != D.length(i + 1))
    throw DomainError("not a domino: F^inf B is not the whole target");
  const auto& Di = D.at(i);
  return module_length(Di.ann) - span_length(R, Di.V, Di.ann);
}

int64_t domino_number(const RModuleExplicit& M, int i) { return domino_dim(domino_of(M, i), i); }

int64_t kernel_length_of_d(const RModuleExplicit& M, int i) {
  const auto& R = *M.ring();
  const auto& D = M.at(i);
  if (!M.has(i + 1)) return module_length(D.ann);
  return span_length(R, module_kernel(R, D.d, M.at(i + 1).ann), D.ann);
}

RModuleExplicit direct_sum(const RModuleExplicit& A, const RModuleExplicit& B) {
  if (A.ring() != B.ring()) throw ShapeError("direct sum over different rings");
  const auto& R = *A.ring();
  int lo = std::min(A.lo(), B.lo()), hi = std::max(A.hi(), B.hi());
  auto get = [&](const RModuleExplicit& X, int i) {
    RDegree D;
    size_t g = X.generators(i), gn = X.generators(i + 1);
    if (X.has(i)) {
      D = X.at(i);
      if (!X.has(i + 1) && i + 1 <= hi) D.d = zeros(R, 0, g);
    } else {
      D.F = zeros(R, 0, 0);
      D.V = zeros(R, 0, 0);
      D.d = zeros(R, gn, 0);
      D.boundary = zeros(R, 0, 0);
    }
    return D;
  };
  std::vector<RDegree> out;
  for (int i = lo; i <= hi; ++i) {
    RDegree a = get(A, i), b = get(B, i);
    RDegree s;
    s.ann = a.ann;
    s.ann.insert(s.ann.end(), b.ann.begin(), b.ann.end());
    s.F = block_diag(R, a.F, b.F);
    s.V = block_diag(R, a.V, b.V);
    if (i < hi) {
      s.d = block_diag(R, a.d, b.d);
    } else {
      s.d = zeros(R, 0, s.ann.size());
    }
    s.boundary = block_diag(R, a.boundary, b.boundary);
    out.push_back(std::move(s));
  }
  std::optional<Truncation> t = A.truncation() ? A.truncation() : B.truncation();
  return RModuleExplicit(A.ring(), lo, std::move(out), t);
}

AdditivityResult T_additivity_check(const RModuleExplicit& L, const RModuleExplicit& M, const RModuleExplicit& N,
                                    const RMorphism& f, const RMorphism& g) {
  const auto& R = *M.ring();
  int lo = M.lo(), hi = M.hi();
  if (L.lo() != lo || N.lo() != lo || L.hi() != hi || N.hi() != hi || f.lo != lo || g.lo != lo ||
      int(f.maps.size()) != hi - lo + 1 || int(g.maps.size()) != hi - lo + 1)
    throw ShapeError("additivity check needs L, M, N and both maps on the same degrees");
  for (int i = lo; i <= hi; ++i) {
    const auto& fi = f.maps[size_t(i - lo)];
    const auto& gi = g.maps[size_t(i - lo)];
    const auto& Li = L.at(i);
    const auto& Mi = M.at(i);
    const auto& Ni = N.at(i);
    std::string tag = " in degree " + std::to_string(i);
    try {
      check_map(R, fi, Li.ann, Mi.ann, "L->M");
      check_map(R, gi, Mi.ann, Ni.ann, "M->N");
    } catch (const PresentationError& e) {
      throw DomainError(std::string("ill-defined map: ") + e.what() + tag);
    }
    if (span_length(R, module_kernel(R, fi, Mi.ann), Li.ann) != 0) throw DomainError("L -> M is not injective" + tag);
    if (span_length(R, gi, Ni.ann) != module_length(Ni.ann)) throw DomainError("M -> N is not surjective" + tag);
    if (module_length(Mi.ann) != module_length(Li.ann) + module_length(Ni.ann))
      throw DomainError("lengths do not add up" + tag);
    GrMatrix gf = mul(R, gi, fi);
    for (size_t c = 0; c < gf.cols; ++c)
      if (!equal_mod(R, Ni, column(gf, c), zeros(R, Ni.ann.size(), 1))) throw DomainError("g o f is not zero" + tag);
    // R-linearity on generators
    auto check_lin = [&](const RModuleExplicit& S, const RModuleExplicit& T, const std::vector<GrMatrix>& h,
                         const char* name) {
      const auto& hi_ = h[size_t(i - lo)];
      const auto& Si = S.at(i);
      const auto& Ti = T.at(i);
      for (size_t j = 0; j < Si.ann.size(); ++j) {
        GrMatrix e = unit(R, Si.ann.size(), j);
        GrMatrix he = mul(R, hi_, e);
        if (!equal_mod(R, Ti, mul(R, hi_, apply_semilinear(R, Si.F, e, 1)), apply_semilinear(R, Ti.F, he, 1)) ||
            !equal_mod(R, Ti, mul(R, hi_, apply_semilinear(R, Si.V, e, -1)), apply_semilinear(R, Ti.V, he, -1)))
          throw DomainError(std::string(name) + " does not commute with F and V" + tag);
        if (i < hi) {
          const auto& hn = h[size_t(i + 1 - lo)];
          if (!equal_mod(R, T.at(i + 1), mul(R, hn, mul(R, Si.d, e)), mul(R, Ti.d, he)))
            throw DomainError(std::string(name) + " does not commute with d" + tag);
        }
      }
    };
    check_lin(L, M, f.maps, "L -> M");
    check_lin(M, N, g.maps, "M -> N");
  }
  AdditivityResult res;
  for (int i = lo; i < hi; ++i) {
    int64_t tl = domino_number(L, i), tm = domino_number(M, i), tn = domino_number(N, i);
    res.per_degree.push_back({i, {tl, tm, tn}});
    if (tm != tl + tn) res.additive = false;
  }
  return res;
}

RModuleExplicit u_sigma(uint32_t p, int sigma_, int m, int lo, int n) {
  if (sigma_ < 1) throw DomainError("U_sigma needs sigma >= 1");
  if (m < sigma_ + 2) throw DomainError("U_sigma truncation level must be at least sigma + 2");
  auto ring = GaloisRing::get(p, 1, n);
  const auto& R = *ring;
  size_t g0 = size_t(m), g1 = size_t(m - sigma_);
  RDegree d0, d1;
  d0.ann.assign(g0, 1);
  d1.ann.assign(g1, 1);
  d0.F = zeros(R, g0, g0);
  d0.V = zeros(R, g0, g0);
  for (size_t t = 0; t + 1 < g0; ++t) d0.V(t + 1, t) = R.one();
  d1.F = zeros(R, g1, g1);
  d1.V = zeros(R, g1, g1);
  for (size_t j = 0; j + 1 < g1; ++j) d1.F(j, j + 1) = R.one();
  d0.d = zeros(R, g1, g0);
  for (size_t j = 0; j < g1; ++j) d0.d(j, size_t(sigma_) + j) = R.one();
  d1.d = zeros(R, 0, g1);
  d0.boundary = zeros(R, g0, 1);
  d0.boundary(g0 - 1, 0) = R.one();
  d1.boundary = zeros(R, g1, 1);
  d1.boundary(g1 - 1, 0) = R.one();
  return RModuleExplicit(ring, lo, {d0, d1}, Truncation{m});
}

RModuleExplicit change_basis(const RModuleExplicit& M, const std::vector<GrMatrix>& U) {
  const auto& R = *M.ring();
  if (U.size() != size_t(M.hi() - M.lo() + 1)) throw ShapeError("change_basis needs one matrix per degree");
  std::vector<GrMatrix> Ui;
  for (int i = M.lo(); i <= M.hi(); ++i) {
    const auto& D = M.at(i);
    const GrMatrix& u = U[size_t(i - M.lo())];
    if (u.rows != D.ann.size() || u.cols != D.ann.size()) throw ShapeError("basis change has the wrong size");
    for (int e : D.ann)
      if (e != D.ann.front()) throw DomainError("change_basis needs a single annihilator exponent per degree");
    Ui.push_back(inverse(R, u));
  }
  // Coordinates transform as x' = U x, so A' = U A sigma^e(U^{-1}).
  std::vector<RDegree> out;
  for (int i = M.lo(); i <= M.hi(); ++i) {
    size_t k = size_t(i - M.lo());
    const auto& D = M.at(i);
    RDegree E;
    E.ann = D.ann;
    E.F = mul(R, mul(R, U[k], D.F), sigma(R, Ui[k], 1));
    E.V = mul(R, mul(R, U[k], D.V), sigma(R, Ui[k], -1));
    E.d = i < M.hi() ? mul(R, mul(R, U[k + 1], D.d), Ui[k]) : D.d;
    E.boundary = mul(R, U[k], D.boundary);
    out.push_back(std::move(E));
  }
  return RModuleExplicit(M.ring(), M.lo(), std::move(out), M.truncation());
}

// ---- JSON ----------------------------------------------------------------

namespace {

nlohmann::json entry_json(const GaloisRing& R, const GrElem& x) {
  if (R.degree() == 1) return x.c[0];
  auto w = R.to_witt(x);
  auto arr = nlohmann::json::array();
  for (Fq c : w) arr.push_back(R.field()->format(c));
  return arr;
}

GrElem entry_from(const GaloisRing& R, const nlohmann::json& j) {
  if (j.is_number_integer()) return R.from_int(j.get<int64_t>());
  if (j.is_string()) return R.teichmuller(R.field()->parse(j.get<std::string>()));
  if (j.is_array()) {
    std::vector<Fq> w;
    for (const auto& c : j) w.push_back(c.is_string() ? R.field()->parse(c.get<std::string>()) : R.field()->from_int(c.get<int64_t>()));
    if (int(w.size()) != R.precision()) throw ParseError("Witt entry has the wrong length");
    return R.from_witt(w);
  }
  throw ParseError("matrix entry must be an integer, a field element string or a Witt coordinate array");
}

nlohmann::json matrix_json(const GaloisRing& R, const GrMatrix& A) {
  auto rows = nlohmann::json::array();
  for (size_t r = 0; r < A.rows; ++r) {
    auto row = nlohmann::json::array();
    for (size_t c = 0; c < A.cols; ++c) row.push_back(entry_json(R, A(r, c)));
    rows.push_back(row);
  }
  return rows;
}

GrMatrix matrix_from(const GaloisRing& R, const nlohmann::json& j, size_t rows, size_t cols, const std::string& what) {
  GrMatrix A = zeros(R, rows, cols);
  if (j.is_null()) return A;
  if (!j.is_array() || j.size() != rows) throw ParseError(what + ": expected " + std::to_string(rows) + " rows");
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError(what + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (size_t c = 0; c < cols; ++c) A(r, c) = entry_from(R, j[r][c]);
  }
  return A;
}

}  // namespace

nlohmann::json to_json(const RModuleExplicit& M) {
  const auto& R = *M.ring();
  nlohmann::json j;
  j["p"] = R.p();
  j["a"] = R.degree();
  j["n"] = R.precision();
  j["degrees"] = {M.lo(), M.hi()};
  auto mods = nlohmann::json::array(), F = nlohmann::json::array(), V = nlohmann::json::array(),
       d = nlohmann::json::array(), bd = nlohmann::json::array();
  for (int i = M.lo(); i <= M.hi(); ++i) {
    const auto& D = M.at(i);
    mods.push_back({{"degree", i}, {"ann", D.ann}});
    F.push_back(matrix_json(R, D.F));
    V.push_back(matrix_json(R, D.V));
    if (i < M.hi()) d.push_back(matrix_json(R, D.d));
    auto cols = nlohmann::json::array();
    for (size_t c = 0; c < D.boundary.cols; ++c) {
      auto col = nlohmann::json::array();
      for (size_t r = 0; r < D.boundary.rows; ++r) col.push_back(entry_json(R, D.boundary(r, c)));
      cols.push_back(col);
    }
    bd.push_back(cols);
  }
  j["modules"] = mods;
  j["F"] = F;
  j["V"] = V;
  j["d"] = d;
  if (M.truncation()) j["truncation"] = {{"level", M.truncation()->level}, {"boundary", bd}};
  return j;
}

RModuleExplicit rmodule_from_json(const nlohmann::json& j) {
  try {
    auto ring = GaloisRing::get(j.at("p").get<uint32_t>(), j.value("a", 1u), j.value("n", 1));
    const auto& R = *ring;
    int lo = j.at("degrees").at(0).get<int>(), hi = j.at("degrees").at(1).get<int>();
    if (hi < lo) throw ParseError("degrees must be [lo, hi] with lo <= hi");
    size_t nd = size_t(hi - lo + 1);
    std::vector<RDegree> degs(nd);
    const auto& mods = j.at("modules");
    for (const auto& m : mods) {
      int i = m.at("degree").get<int>();
      if (i < lo || i > hi) throw ParseError("module degree outside [lo, hi]");
      degs[size_t(i - lo)].ann = m.at("ann").get<std::vector<int>>();
    }
    auto pick = [&](const char* key, size_t k) -> nlohmann::json {
      if (!j.contains(key)) return nullptr;
      const auto& arr = j.at(key);
      if (!arr.is_array()) throw ParseError(std::string(key) + " must be an array");
      return k < arr.size() ? arr[k] : nlohmann::json(nullptr);
    };
    std::optional<Truncation> trunc;
    nlohmann::json bd;
    if (j.contains("truncation")) {
      trunc = Truncation{j["truncation"].at("level").get<int>()};
      bd = j["truncation"].value("boundary", nlohmann::json::array());
    }
    for (size_t k = 0; k < nd; ++k) {
      auto& D = degs[k];
      size_t g = D.ann.size(), gn = k + 1 < nd ? degs[k + 1].ann.size() : 0;
      std::string tag = "degree " + std::to_string(lo + int(k));
      D.F = matrix_from(R, pick("F", k), g, g, tag + " F");
      D.V = matrix_from(R, pick("V", k), g, g, tag + " V");
      D.d = matrix_from(R, k + 1 < nd ? pick("d", k) : nlohmann::json(nullptr), gn, g, tag + " d");
      D.boundary = zeros(R, g, 0);
      if (bd.is_array() && k < bd.size()) {
        for (const auto& col : bd[k]) {
          if (!col.is_array() || col.size() != g) throw ParseError(tag + ": boundary vector has the wrong length");
          GrMatrix c = zeros(R, g, 1);
          for (size_t r = 0; r < g; ++r) c(r, 0) = entry_from(R, col[r]);
          D.boundary = hcat(D.boundary, c);
        }
      }
    }
    return RModuleExplicit(ring, lo, std::move(degs), trunc);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("R-module fixture: ") + e.what());
  }
}

// ---- structural ----------------------------------------------------------

namespace {
bool nonzero_out(const GradedRStructure& M, int i) {
  if (i < M.lo || i > M.hi()) return false;
  const auto& e = M.at(i);
  return e.outgoing_nonzero || !e.outgoing.empty();
}
bool domino_out(const GradedRStructure& M, int i) {
  if (i < M.lo || i > M.hi()) return false;
  return !M.at(i).outgoing.empty();
}
}  // namespace

bool finitely_generated(const GradedRStructure& M, int i) { return !domino_out(M, i - 1) && !domino_out(M, i); }

bool finite_iff_flanking_d_zero(const GradedRStructure& M, int i) {
  bool flanking_zero = !nonzero_out(M, i - 1) && !nonzero_out(M, i);
  return finitely_generated(M, i) == flanking_zero;
}

std::vector<std::string> validate_structure(const GradedRStructure& M) {
  std::vector<std::string> out;
  if (M.entries.empty()) return out;
  if (!M.entries.back().outgoing.empty() || M.entries.back().outgoing_nonzero)
    out.push_back("top degree " + std::to_string(M.hi()) + " has an outgoing differential");
  for (int i = M.lo; i <= M.hi(); ++i) {
    const auto& e = M.at(i);
    if (e.torsion_length < 0) out.push_back("negative torsion length in degree " + std::to_string(i));
    for (auto s : e.outgoing.constituents)
      if (s < 1) out.push_back("domino constituent below 1 in degree " + std::to_string(i));
    if (!finite_iff_flanking_d_zero(M, i))
      out.push_back("degree " + std::to_string(i) + ": finitely generated but a flanking differential is nonzero");
  }
  return out;
}

}  // namespace derinv
