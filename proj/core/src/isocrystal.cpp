#include "derinv/isocrystal.hpp"

#include <algorithm>
#include <numeric>

#include "derinv/errors.hpp"

namespace derinv {

FrobeniusMatrix frobenius_matrix(RingPtr ring, GrMatrix A, int64_t e) {
  if (A.rows != A.cols) throw ShapeError("Frobenius matrix must be square");
  return FrobeniusMatrix{std::move(ring), std::move(A), e};
}

FrobeniusMatrix frobenius_matrix(const std::vector<std::vector<WittVector>>& entries, int64_t e) {
  size_t m = entries.size();
  if (m == 0) throw ShapeError("empty Frobenius matrix");
  const auto& F = entries[0][0].field();
  int n = entries[0][0].precision();
  auto R = GaloisRing::get(F->p(), F->degree(), n);
  GrMatrix A = zeros(*R, m, m);
  for (size_t i = 0; i < m; ++i) {
    if (entries[i].size() != m) throw ShapeError("Frobenius matrix must be square");
    for (size_t j = 0; j < m; ++j) {
      const auto& w = entries[i][j];
      if (!(*w.field() == *F) || w.precision() != n) throw ShapeError("Frobenius matrix entries disagree on field or precision");
      A(i, j) = R->from_witt(w.coords());
    }
  }
  return FrobeniusMatrix{R, std::move(A), e};
}

namespace {

GrElem ring_from_mpz(const GaloisRing& R, const mpz_class& v) {
  mpz_class N(std::to_string(R.modulus()));
  mpz_class r = v % N;
  if (r < 0) r += N;
  return R.from_int(int64_t(r.get_ui()));
}

int64_t mpz_val(const mpz_class& v, unsigned long p) {
  mpz_class x = v;
  int64_t k = 0;
  while (mpz_divisible_ui_p(x.get_mpz_t(), p)) {
    x /= p;
    ++k;
  }
  return k;
}

struct Pt {
  int64_t x, y;
};

// lower hull of points sorted by x
std::vector<Pt> lower_hull(const std::vector<Pt>& pts) {
  std::vector<Pt> h;
  for (const auto& p : pts) {
    while (h.size() >= 2) {
      const Pt& a = h[h.size() - 2];
      const Pt& b = h.back();
      // drop b if it lies on or above segment a-p
      i128 cross = i128(b.x - a.x) * (p.y - a.y) - i128(b.y - a.y) * (p.x - a.x);
      if (cross <= 0)
        h.pop_back();
      else
        break;
    }
    h.push_back(p);
  }
  return h;
}

Rational hull_at(const std::vector<Pt>& h, int64_t x) {
  for (size_t k = 0; k + 1 < h.size(); ++k)
    if (h[k].x <= x && x <= h[k + 1].x)
      return Rational(h[k].y) + Rational(h[k + 1].y - h[k].y, h[k + 1].x - h[k].x) * (x - h[k].x);
  return Rational(h.back().y);
}

SlopeMultiset slopes_of_hull(const std::vector<Pt>& h) {
  SlopeMultiset out;
  for (size_t k = 0; k + 1 < h.size(); ++k) {
    int64_t len = h[k + 1].x - h[k].x;
    out.add(Rational(h[k].y - h[k + 1].y, len), len);
  }
  return out;
}

}  // namespace

FrobeniusMatrix companion(RingPtr ring, const std::vector<mpz_class>& monic_desc, int64_t e) {
  if (monic_desc.size() < 2 || monic_desc[0] != 1) throw DomainError("companion matrix needs a monic polynomial of degree >= 1");
  size_t m = monic_desc.size() - 1;
  const auto& R = *ring;
  GrMatrix A = zeros(R, m, m);
  for (size_t i = 1; i < m; ++i) A(i, i - 1) = R.one();
  // last column: -c_0, ..., -c_{m-1}
  for (size_t i = 0; i < m; ++i) A(i, m - 1) = R.neg(ring_from_mpz(R, monic_desc[m - i]));
  return FrobeniusMatrix{std::move(ring), std::move(A), e};
}

SlopeMultiset newton_polygon(const std::vector<std::optional<int64_t>>& vals) {
  std::vector<Pt> pts;
  for (size_t i = 0; i < vals.size(); ++i)
    if (vals[i]) pts.push_back({int64_t(i), *vals[i]});
  if (pts.empty()) throw DomainError("Newton polygon of the zero polynomial");
  return slopes_of_hull(lower_hull(pts));
}

SlopeMultiset newton_slopes(const FrobeniusMatrix& M) {
  const auto& R = *M.ring;
  int n = R.precision();
  int64_t a = R.degree();
  int64_t er = ((M.e % a) + a) % a;
  int64_t k = a / std::gcd(er, a);
  GrMatrix B = M.A;
  for (int64_t t = 1; t < k; ++t) B = mul(R, B, sigma(R, M.A, t * M.e));
  auto cp = charpoly(R, B);
  size_t m = B.rows;
  if (m == 0) return {};

  // valuation of the coefficient of T^i; n means "at least n"
  std::vector<int> v(m + 1);
  for (size_t i = 0; i <= m; ++i) v[i] = R.valuation(cp[m - i]);
  if (v[0] >= n)
    throw PrecisionError("Newton polygon vertex at T^0 unresolved: det(Phi^" + std::to_string(k) +
                             ") vanishes mod p^" + std::to_string(n),
                         n + 1);
  std::vector<Pt> pts;
  for (size_t i = 0; i <= m; ++i)
    if (v[i] < n) pts.push_back({int64_t(i), v[i]});
  auto h = lower_hull(pts);
  Rational worst(0);
  int64_t worst_i = -1;
  for (size_t i = 1; i < m; ++i) {
    if (v[i] < n) continue;
    Rational hv = hull_at(h, int64_t(i));
    if (hv > n && hv > worst) {
      worst = hv;
      worst_i = int64_t(i);
    }
  }
  if (worst_i >= 0) {
    int64_t need = (worst.numerator() + worst.denominator() - 1) / worst.denominator();
    throw PrecisionError("Newton polygon vertex at T^" + std::to_string(worst_i) + " unresolved: coefficient is 0 mod p^" +
                             std::to_string(n) + " but the hull passes at height " + format_rational(worst) +
                             "; precision " + std::to_string(need) + " resolves it",
                         int(need));
  }
  SlopeMultiset raw = slopes_of_hull(h);
  SlopeMultiset out;
  for (const auto& [l, mult] : raw.entries()) out.add(l / k, mult);
  return out;
}

SlopeMultiset newton_from_charpoly(const std::vector<mpz_class>& coeffs_desc, const mpz_class& q) {
  if (q < 2) throw DomainError("q must be a prime power");
  // q = p^a
  mpz_class p = 0;
  for (unsigned long d = 2;; ++d) {
    if (mpz_divisible_ui_p(q.get_mpz_t(), d)) {
      p = d;
      break;
    }
    if (mpz_class(d) * d > q) {
      p = q;
      break;
    }
  }
  unsigned long pu = p.get_ui();
  int64_t a = mpz_val(q, pu);
  mpz_class rest = q;
  for (int64_t i = 0; i < a; ++i) rest /= pu;
  if (rest != 1) throw DomainError("q = " + q.get_str() + " is not a prime power");

  size_t m = coeffs_desc.empty() ? 0 : coeffs_desc.size() - 1;
  std::vector<std::optional<int64_t>> vals(m + 1);
  bool any = false;
  for (size_t i = 0; i <= m && !coeffs_desc.empty(); ++i) {
    const mpz_class& c = coeffs_desc[m - i];
    if (c != 0) {
      vals[i] = mpz_val(c, pu);
      any = true;
    }
  }
  if (!any) throw DomainError("zero polynomial has no Newton polygon");
  SlopeMultiset raw = newton_polygon(vals);
  SlopeMultiset out;
  for (const auto& [l, mult] : raw.entries()) out.add(l / a, mult);
  return out;
}

SlopeMultiset newton_from_charpoly(const std::vector<int64_t>& coeffs_desc, int64_t q) {
  std::vector<mpz_class> c;
  for (auto x : coeffs_desc) c.emplace_back(static_cast<long>(x));
  return newton_from_charpoly(c, mpz_class(static_cast<long>(q)));
}

std::vector<CrysViolation> validate_crys(const CrystallineSlopeData& data) {
  std::vector<CrysViolation> out;
  int d = data.d;
  if (d < 0 || int(data.degrees.size()) != 2 * d + 1) {
    out.push_back({"shape", -1, Rational(0), "expected " + std::to_string(2 * d + 1) + " degrees"});
    return out;
  }
  const auto& H = data.degrees;
  for (int i = 0; i <= 2 * d; ++i)
    for (const auto& [l, m] : H[i].entries())
      if (l < 0 || l > std::min(i, d))
        out.push_back({"range", i, l, "slope outside [0, " + std::to_string(std::min(i, d)) + "]"});
  // Poincare duality; i = d is the same condition as hard Lefschetz and is reported there.
  for (int i = 0; i < d; ++i) {
    std::map<Rational, bool> seen;
    for (const auto& [l, m] : H[i].entries()) seen[l] = true;
    for (const auto& [l, m] : H[2 * d - i].entries()) seen[Rational(d) - l] = true;
    for (const auto& [l, unused] : seen) {
      int64_t lhs = H[i].multiplicity(l), rhs = H[2 * d - i].multiplicity(Rational(d) - l);
      if (lhs != rhs)
        out.push_back({"constraint1", i, l,
                       "h^" + std::to_string(i) + "_" + format_rational(l) + " = " + std::to_string(lhs) + " but h^" +
                           std::to_string(2 * d - i) + "_" + format_rational(Rational(d) - l) + " = " + std::to_string(rhs)});
    }
  }
  for (int i = 0; i <= 2 * d; ++i) {
    std::map<Rational, bool> seen;
    for (const auto& [l, m] : H[i].entries()) seen[std::min(l, Rational(i) - l)] = true;
    for (const auto& [l, unused] : seen) {
      Rational mirror = Rational(i) - l;
      int64_t lhs = H[i].multiplicity(l), rhs = H[i].multiplicity(mirror);
      if (lhs != rhs)
        out.push_back({"constraint2", i, l,
                       "h^" + std::to_string(i) + "_" + format_rational(l) + " = " + std::to_string(lhs) + " but h^" +
                           std::to_string(i) + "_" + format_rational(mirror) + " = " + std::to_string(rhs)});
    }
  }
  if (data.betti) {
    const auto& b = *data.betti;
    if (int(b.size()) != 2 * d + 1) {
      out.push_back({"rank", -1, Rational(0), "declared Betti list has wrong length"});
    } else {
      for (int i = 0; i <= 2 * d; ++i)
        if (H[i].rank() != b[i])
          out.push_back({"rank", i, Rational(0),
                         "rank " + std::to_string(H[i].rank()) + " but b_" + std::to_string(i) + " = " + std::to_string(b[i])});
    }
  }
  return out;
}

std::optional<int64_t> height(const CrystallineSlopeData& data) {
  if (int(data.degrees.size()) != 2 * data.d + 1) throw ShapeError("crystalline data has the wrong number of degrees");
  int64_t r = slope_part(data.degrees[data.d], SlopeInterval::window(0, 1)).rank();
  if (r == 0) return std::nullopt;
  return r;
}

std::string format_violation(const CrysViolation& v) {
  std::string out = v.constraint + " violation";
  if (v.degree >= 0) out += " at (i=" + std::to_string(v.degree) + ", slope=" + format_rational(v.slope) + ")";
  return out + ": " + v.detail;
}

}  // namespace derinv
