#include "derinv/witt.hpp"

#include <map>
#include <mutex>

#include "derinv/errors.hpp"

namespace derinv {

namespace {

using Mono = std::vector<uint32_t>;
using IPoly = std::map<Mono, uint64_t>;

uint64_t upow(uint64_t b, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t N) { return uint64_t(u128(a) * b % N); }

IPoly pmul(const IPoly& a, const IPoly& b, uint64_t N) {
  IPoly r;
  Mono m;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      m = ma;
      for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      uint64_t& slot = r[m];
      slot = (slot + mulmod(ca, cb, N)) % N;
    }
  }
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

IPoly ppow(const IPoly& s, uint64_t e, uint64_t N, size_t nv) {
  IPoly r{{Mono(nv, 0), 1 % N}};
  IPoly b = s;
  while (e) {
    if (e & 1) r = pmul(r, b, N);
    e >>= 1;
    if (e) b = pmul(b, b, N);
  }
  return r;
}

void axpy(IPoly& acc, const IPoly& t, int64_t scale, uint64_t N) {
  uint64_t s = uint64_t(((scale % int64_t(N)) + int64_t(N)) % int64_t(N));
  for (const auto& [m, c] : t) {
    uint64_t& slot = acc[m];
    slot = (slot + mulmod(c, s, N)) % N;
  }
  std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
}

IPoly var_power(size_t var, uint64_t e, size_t nv) {
  Mono m(nv, 0);
  m[var] = uint32_t(e);
  return IPoly{{m, 1}};
}

// w_k in one set of variables (offset 0 for X, n for Y), mod N
IPoly ghost_poly(int k, size_t offset, uint32_t p, uint64_t N, size_t nv) {
  IPoly r;
  for (int i = 0; i <= k; ++i) axpy(r, var_power(offset + i, upow(p, k - i), nv), int64_t(upow(p, i) % N), N);
  return r;
}

std::vector<WittPolynomials::Term> to_terms(const IPoly& poly) {
  std::vector<WittPolynomials::Term> out;
  for (const auto& [m, c] : poly) {
    WittPolynomials::Term t{uint32_t(c), {}};
    for (size_t v = 0; v < m.size(); ++v)
      if (m[v]) t.powers.emplace_back(uint16_t(v), m[v]);
    out.push_back(std::move(t));
  }
  return out;
}

Fq eval(const std::vector<WittPolynomials::Term>& poly, const std::vector<Fq>& vars, const GroundField& F) {
  // Work with discrete logs so each monomial is one sum mod q-1.
  uint64_t q1 = F.order() - 1;
  std::vector<uint64_t> lg(vars.size());
  std::vector<bool> zero(vars.size());
  for (size_t v = 0; v < vars.size(); ++v) {
    zero[v] = vars[v].code == 0;
    if (!zero[v]) lg[v] = F.log(vars[v]);
  }
  uint64_t acc = 0;
  Fq facc = F.zero();
  const bool prime = F.degree() == 1;
  const uint64_t p = F.p();
  for (const auto& t : poly) {
    uint64_t e = 0;
    bool vanish = false;
    for (const auto& [v, k] : t.powers) {
      if (zero[v]) {
        vanish = true;
        break;
      }
      e += lg[v] * (k % q1);
    }
    if (vanish) continue;
    Fq m = F.exp(e % q1);
    if (prime)
      acc += uint64_t(t.coef % p) * m.code;
    else
      facc = F.add(facc, F.mul(F.from_int(t.coef), m));
  }
  return prime ? Fq{uint32_t(acc % p)} : facc;
}

void require_same(const WittVector& x, const WittVector& y) {
  if (!(*x.field() == *y.field())) throw ShapeError("Witt vectors over different fields");
  if (x.precision() != y.precision())
    throw ShapeError("Witt vectors of precision " + std::to_string(x.precision()) + " and " +
                     std::to_string(y.precision()));
}

}  // namespace

WittPolynomials::WittPolynomials(uint32_t p, int n) {
  size_t nv = 2 * size_t(n);
  std::vector<IPoly> s_mod_p, p_mod_p;
  for (int k = 0; k < n; ++k) {
    uint64_t N = upow(p, k + 1);
    IPoly acc_s = ghost_poly(k, 0, p, N, nv);
    axpy(acc_s, ghost_poly(k, n, p, N, nv), 1, N);
    IPoly acc_p = pmul(ghost_poly(k, 0, p, N, nv), ghost_poly(k, n, p, N, nv), N);
    for (int i = 0; i < k; ++i) {
      // a = b mod p implies a^(p^m) = b^(p^m) mod p^(m+1)
      uint64_t Ni = upow(p, k - i + 1);
      uint64_t e = upow(p, k - i);
      axpy(acc_s, ppow(s_mod_p[i], e, Ni, nv), -int64_t(upow(p, i)), N);
      axpy(acc_p, ppow(p_mod_p[i], e, Ni, nv), -int64_t(upow(p, i)), N);
    }
    uint64_t pk = upow(p, k);
    auto finish = [&](const IPoly& acc) {
      IPoly r;
      for (const auto& [m, c] : acc) {
        if (c % pk) throw Error("internal: Witt structure polynomial not divisible by p^k");
        uint64_t v = (c / pk) % p;
        if (v) r[m] = v;
      }
      return r;
    };
    s_mod_p.push_back(finish(acc_s));
    p_mod_p.push_back(finish(acc_p));
  }
  for (int k = 0; k < n; ++k) {
    sum_.push_back(to_terms(s_mod_p[k]));
    prod_.push_back(to_terms(p_mod_p[k]));
  }
}

const WittPolynomials& WittPolynomials::get(uint32_t p, int n) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, int>, std::unique_ptr<WittPolynomials>> cache;
  if (n < 1 || n > 8) throw DomainError("Witt polynomial precision must lie in [1, 8]");
  std::lock_guard lock(mu);
  auto& slot = cache[{p, n}];
  if (!slot) slot.reset(new WittPolynomials(p, n));
  return *slot;
}

size_t WittPolynomials::term_count() const {
  size_t c = 0;
  for (const auto& s : sum_) c += s.size();
  for (const auto& s : prod_) c += s.size();
  return c;
}

WittVector::WittVector(FieldPtr field, std::vector<Fq> coords) : field_(std::move(field)), coords_(std::move(coords)) {
  if (coords_.empty()) throw ShapeError("Witt vector precision must be at least 1");
  for (Fq c : coords_)
    if (c.code >= field_->order()) throw ShapeError("coordinate outside F_q");
}

WittVector WittVector::zero(FieldPtr field, int n) { return WittVector(field, std::vector<Fq>(n, Fq{0})); }

WittVector WittVector::one(FieldPtr field, int n) {
  std::vector<Fq> c(n, Fq{0});
  c[0] = Fq{1};
  return WittVector(std::move(field), std::move(c));
}

WittVector WittVector::from_int(FieldPtr field, int n, int64_t k) {
  auto R = GaloisRing::get(field->p(), field->degree(), n);
  return WittVector(field, R->to_witt(R->from_int(k)));
}

bool WittVector::is_zero() const {
  for (Fq c : coords_)
    if (c.code) return false;
  return true;
}

WittVector add(const WittVector& x, const WittVector& y) {
  require_same(x, y);
  const auto& F = *x.field();
  int n = x.precision();
  const auto& W = WittPolynomials::get(F.p(), n);
  std::vector<Fq> vars(x.coords());
  vars.insert(vars.end(), y.coords().begin(), y.coords().end());
  std::vector<Fq> out(n);
  for (int k = 0; k < n; ++k) out[k] = eval(W.sum(k), vars, F);
  return WittVector(x.field(), std::move(out));
}

WittVector mul(const WittVector& x, const WittVector& y) {
  require_same(x, y);
  const auto& F = *x.field();
  int n = x.precision();
  const auto& W = WittPolynomials::get(F.p(), n);
  std::vector<Fq> vars(x.coords());
  vars.insert(vars.end(), y.coords().begin(), y.coords().end());
  std::vector<Fq> out(n);
  for (int k = 0; k < n; ++k) out[k] = eval(W.prod(k), vars, F);
  return WittVector(x.field(), std::move(out));
}

WittVector neg(const WittVector& x) {
  // S_k(x, y) = x_k + y_k + (terms in lower variables), so solve for y_k in order.
  const auto& F = *x.field();
  int n = x.precision();
  const auto& W = WittPolynomials::get(F.p(), n);
  std::vector<Fq> vars(x.coords());
  vars.resize(2 * n, Fq{0});
  for (int k = 0; k < n; ++k) vars[n + k] = F.neg(eval(W.sum(k), vars, F));
  return WittVector(x.field(), std::vector<Fq>(vars.begin() + n, vars.end()));
}

WittVector sub(const WittVector& x, const WittVector& y) { return add(x, neg(y)); }

WittVector frobenius(const WittVector& x) {
  std::vector<Fq> out;
  for (Fq c : x.coords()) out.push_back(x.field()->frob(c, 1));
  return WittVector(x.field(), std::move(out));
}

WittVector verschiebung(const WittVector& x) {
  std::vector<Fq> out(x.precision(), Fq{0});
  for (int i = 0; i + 1 < x.precision(); ++i) out[i + 1] = x[i];
  return WittVector(x.field(), std::move(out));
}

WittVector mul_by_p(const WittVector& x) { return verschiebung(frobenius(x)); }

WittVector teichmuller(FieldPtr field, Fq a, int n) {
  std::vector<Fq> c(n, Fq{0});
  c[0] = a;
  return WittVector(std::move(field), std::move(c));
}

WittVector truncate(const WittVector& x, int n) {
  if (n < 1 || n > x.precision()) throw ShapeError("truncation can only lower precision");
  return WittVector(x.field(), std::vector<Fq>(x.coords().begin(), x.coords().begin() + n));
}

std::vector<uint64_t> ghost(const WittVector& x, const IntLift& lift) {
  uint64_t p = x.field()->p();
  int n = x.precision();
  u128 N = 1;
  for (int i = 0; i < n; ++i) N *= p;
  if (N >= u128(1) << 63) throw DomainError("ghost modulus too large");
  uint64_t mod = uint64_t(N);
  auto mm = [mod](uint64_t a, uint64_t b) { return uint64_t(u128(a) * b % mod); };
  std::vector<uint64_t> out(n);
  for (int i = 0; i < n; ++i) {
    uint64_t w = 0, pj = 1;
    for (int j = 0; j <= i; ++j) {
      uint64_t l = (lift ? lift(x[j]) : x[j].code) % mod;
      uint64_t t = l;
      for (int e = 0; e < i - j; ++e) {
        uint64_t base = t, r = 1;
        for (uint64_t k = 0; k < p; ++k) r = mm(r, base);
        t = r;
      }
      w = (w + mm(pj, t)) % mod;
      pj = mm(pj, p);
    }
    out[i] = w;
  }
  return out;
}

GrElem to_ring(const WittVector& x) {
  auto R = GaloisRing::get(x.field()->p(), x.field()->degree(), x.precision());
  return R->from_witt(x.coords());
}

WittVector from_ring(const GaloisRing& R, const GrElem& r) { return WittVector(R.field(), R.to_witt(r)); }

std::string format_witt(const WittVector& x) {
  std::string out = "(";
  for (int i = 0; i < x.precision(); ++i) {
    if (i) out += ',';
    out += x.field()->format(x[i]);
  }
  return out + ")";
}

}  // namespace derinv
