#include "derinv/galois_ring.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include "derinv/errors.hpp"

namespace derinv {

std::shared_ptr<const GaloisRing> GaloisRing::get(uint32_t p, uint32_t a, int n) {
  static std::mutex mu;
  static std::map<std::tuple<uint32_t, uint32_t, int>, std::shared_ptr<const GaloisRing>> cache;
  if (n < 1) throw DomainError("precision must be at least 1");
  std::lock_guard lock(mu);
  auto& slot = cache[{p, a, n}];
  if (!slot) slot.reset(new GaloisRing(p, a, n));
  return slot;
}

GaloisRing::GaloisRing(uint32_t p, uint32_t a, int n) : field_(GroundField::get(p, a)), n_(n) {
  u128 N = 1;
  for (int i = 0; i < n; ++i) {
    N *= p;
    if (N >= u128(1) << 62) throw DomainError("p^n too large for the Galois ring backend");
  }
  N_ = uint64_t(N);
  for (uint32_t c : field_->modulus()) M_.push_back(c);

  // sigma^e(t) is the root of M congruent to t^(p^e) mod p; Newton lifts it.
  sigma_pow_.resize(a);
  GrElem t = zero();
  if (a == 1)
    t.c[0] = (N_ - M_[0]) % N_;
  else
    t.c[1] = 1;
  for (uint32_t e = 0; e < a; ++e) {
    GrElem s = lift(field_->frob(residue(t), e));
    if (a > 1) {
      for (int it = 0; it < 2 * n + 2; ++it) {
        GrElem fv = zero(), dv = zero(), pw = one();
        for (size_t i = 0; i < M_.size(); ++i) {
          fv = add(fv, mul_int(pw, int64_t(M_[i])));
          if (i + 1 < M_.size()) dv = add(dv, mul_int(pw, int64_t((i + 1) * M_[i + 1] % N_)));
          pw = mul(pw, s);
        }
        if (is_zero(fv)) break;
        s = sub(s, mul(fv, inverse(dv)));
      }
    } else {
      s = t;
    }
    std::vector<GrElem> pw(a);
    pw[0] = one();
    for (uint32_t i = 1; i < a; ++i) pw[i] = mul(pw[i - 1], s);
    sigma_pow_[e] = std::move(pw);
  }
}

GrElem GaloisRing::zero() const { return GrElem{std::vector<uint64_t>(degree(), 0)}; }

GrElem GaloisRing::one() const {
  GrElem r = zero();
  r.c[0] = 1 % N_;
  return r;
}

GrElem GaloisRing::from_int(int64_t v) const {
  GrElem r = zero();
  int64_t m = v % int64_t(N_);
  if (m < 0) m += int64_t(N_);
  r.c[0] = uint64_t(m);
  return r;
}

GrElem GaloisRing::p_power(int k) const {
  if (k >= n_) return zero();
  uint64_t v = 1;
  for (int i = 0; i < k; ++i) v *= p();
  GrElem r = zero();
  r.c[0] = v;
  return r;
}

GrElem GaloisRing::add(const GrElem& x, const GrElem& y) const {
  GrElem r = x;
  for (size_t i = 0; i < r.c.size(); ++i) {
    r.c[i] += y.c[i];
    if (r.c[i] >= N_) r.c[i] -= N_;
  }
  return r;
}

GrElem GaloisRing::sub(const GrElem& x, const GrElem& y) const {
  GrElem r = x;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] >= y.c[i] ? r.c[i] - y.c[i] : r.c[i] + N_ - y.c[i];
  return r;
}

GrElem GaloisRing::neg(const GrElem& x) const { return sub(zero(), x); }

GrElem GaloisRing::mul(const GrElem& x, const GrElem& y) const {
  size_t a = degree();
  if (a == 1) return GrElem{{mm(x.c[0], y.c[0])}};
  std::vector<uint64_t> r(2 * a - 1, 0);
  for (size_t i = 0; i < a; ++i) {
    if (!x.c[i]) continue;
    for (size_t j = 0; j < a; ++j) {
      r[i + j] += mm(x.c[i], y.c[j]);
      if (r[i + j] >= N_) r[i + j] -= N_;
    }
  }
  for (size_t k = 2 * a - 2; k >= a; --k) {
    uint64_t c = r[k];
    if (!c) continue;
    r[k] = 0;
    for (size_t i = 0; i < a; ++i) {
      uint64_t sub = mm(c, M_[i]);
      r[k - a + i] = r[k - a + i] >= sub ? r[k - a + i] - sub : r[k - a + i] + N_ - sub;
    }
  }
  r.resize(a);
  return GrElem{std::move(r)};
}

GrElem GaloisRing::mul_int(const GrElem& x, int64_t k) const {
  GrElem s = from_int(k);
  GrElem r = x;
  for (auto& c : r.c) c = mm(c, s.c[0]);
  return r;
}

GrElem GaloisRing::pow(GrElem x, uint64_t e) const {
  GrElem r = one();
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

bool GaloisRing::is_zero(const GrElem& x) const {
  for (auto c : x.c)
    if (c) return false;
  return true;
}

int GaloisRing::valuation(const GrElem& x) const {
  int best = n_;
  for (auto c : x.c) {
    if (!c) continue;
    int v = 0;
    while (c % p() == 0) {
      c /= p();
      ++v;
    }
    best = std::min(best, v);
  }
  return best;
}

GrElem GaloisRing::inverse(const GrElem& x) const {
  if (valuation(x) != 0) throw DomainError("inverse of a non-unit in W_n");
  GrElem y = lift(field_->inv(residue(x)));
  GrElem two = from_int(2);
  for (int prec = 1; prec < n_; prec *= 2) y = mul(y, sub(two, mul(x, y)));
  return y;
}

GrElem GaloisRing::div_p_pow(const GrElem& x, int k) const {
  if (k == 0) return x;
  uint64_t pk = 1;
  for (int i = 0; i < k && i < n_; ++i) pk *= p();
  if (k >= n_) return zero();
  GrElem r = x;
  for (auto& c : r.c) {
    if (c % pk) throw DomainError("division by p^k of an element of smaller valuation");
    c /= pk;
  }
  return r;
}

Fq GaloisRing::residue(const GrElem& x) const {
  std::vector<uint32_t> c(degree());
  for (size_t i = 0; i < c.size(); ++i) c[i] = uint32_t(x.c[i] % p());
  return field_->from_coeffs(c);
}

GrElem GaloisRing::lift(Fq x) const {
  auto c = field_->coeffs(x);
  GrElem r = zero();
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] % N_;
  return r;
}

GrElem GaloisRing::teichmuller(Fq x) const {
  GrElem r = lift(x);
  uint64_t q = field_->order();
  for (int i = 1; i < n_; ++i) r = pow(r, q);
  return r;
}

GrElem GaloisRing::eval_at(const GrElem& x, const std::vector<GrElem>& powers) const {
  GrElem r = zero();
  for (size_t i = 0; i < x.c.size(); ++i) {
    if (!x.c[i]) continue;
    r = add(r, mul_int(powers[i], int64_t(x.c[i])));
  }
  return r;
}

GrElem GaloisRing::sigma(const GrElem& x, int64_t e) const {
  int64_t a = degree();
  int64_t r = ((e % a) + a) % a;
  if (r == 0) return x;
  return eval_at(x, sigma_pow_[r]);
}

GrElem GaloisRing::from_witt(const std::vector<Fq>& coords) const {
  if (int(coords.size()) != n_) throw ShapeError("Witt vector length does not match ring precision");
  GrElem r = zero();
  for (int i = 0; i < n_; ++i) {
    if (coords[i].code == 0) continue;
    GrElem term = teichmuller(field_->frob(coords[i], -i));
    r = add(r, mul(p_power(i), term));
  }
  return r;
}

std::vector<Fq> GaloisRing::to_witt(const GrElem& x) const {
  std::vector<Fq> out(n_);
  GrElem r = x;
  for (int i = 0; i < n_; ++i) {
    Fq c = residue(r);
    out[i] = field_->frob(c, i);
    if (i + 1 < n_) {
      r = sub(r, teichmuller(c));
      // r is divisible by p; shift down one digit
      for (auto& v : r.c) v /= p();
    }
  }
  return out;
}

}  // namespace derinv
