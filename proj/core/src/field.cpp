#include "derinv/field.hpp"

#include <cctype>
#include <map>
#include <mutex>

#include "derinv/errors.hpp"

namespace derinv {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

using Poly = std::vector<uint32_t>;  // low to high over F_p

// a*b mod f, f monic of degree deg
Poly mulmod(const Poly& a, const Poly& b, const Poly& f, uint32_t p) {
  size_t deg = f.size() - 1;
  std::vector<uint64_t> r(2 * deg, 0);
  for (size_t i = 0; i < deg; ++i)
    for (size_t j = 0; j < deg; ++j) r[i + j] = (r[i + j] + uint64_t(a[i]) * b[j]) % p;
  for (size_t k = 2 * deg - 1; k >= deg; --k) {
    uint64_t c = r[k];
    if (!c) continue;
    r[k] = 0;
    for (size_t i = 0; i < deg; ++i)
      r[k - deg + i] = (r[k - deg + i] + (p - f[i]) * c) % p;
  }
  return Poly(r.begin(), r.begin() + deg);
}

Poly powmod(Poly base, uint64_t e, const Poly& f, uint32_t p) {
  size_t deg = f.size() - 1;
  Poly r(deg, 0);
  r[0] = 1;
  while (e) {
    if (e & 1) r = mulmod(r, base, f, p);
    base = mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

bool is_one(const Poly& x) {
  if (x[0] != 1) return false;
  for (size_t i = 1; i < x.size(); ++i)
    if (x[i]) return false;
  return true;
}

// x has order q-1 modulo f, which forces f irreducible.
bool primitive(const Poly& f, uint32_t p, uint64_t q) {
  size_t deg = f.size() - 1;
  Poly x(deg, 0);
  if (deg == 1)
    x[0] = (p - f[0]) % p;
  else
    x[1] = 1;
  if (!is_one(powmod(x, q - 1, f, p))) return false;
  for (uint64_t r : prime_factors(q - 1))
    if (is_one(powmod(x, (q - 1) / r, f, p))) return false;
  return true;
}

}  // namespace

std::shared_ptr<const GroundField> GroundField::get(uint32_t p, uint32_t a) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint32_t>, std::shared_ptr<const GroundField>> cache;
  if (!is_prime(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
  if (a < 1) throw DomainError("field degree must be at least 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < a; ++i) {
    q *= p;
    if (q > kMaxOrder) throw DomainError("field order p^a exceeds 2^20");
  }
  std::lock_guard lock(mu);
  auto& slot = cache[{p, a}];
  if (!slot) slot.reset(new GroundField(p, a));
  return slot;
}

GroundField::GroundField(uint32_t p, uint32_t a) : p_(p), a_(a) {
  q_ = 1;
  for (uint32_t i = 0; i < a; ++i) q_ *= p;
  // Conway order: m = x^a - c_{a-1} x^{a-1} + c_{a-2} x^{a-2} - ..., compared
  // lexicographically on (c_{a-1}, ..., c_0).
  Poly f(a + 1, 0);
  f[a] = 1;
  for (uint64_t idx = 0; idx < q_; ++idx) {
    uint64_t r = idx;
    for (int i = 0; i < int(a); ++i) {
      uint32_t c = uint32_t(r % p);
      r /= p;
      bool negate = ((a - i) % 2) == 1;
      f[i] = negate ? (p - c) % p : c;
    }
    if (f[0] == 0) continue;
    if (primitive(f, p, q_)) break;
  }
  modulus_ = f;
  exp_.assign(q_ - 1, 0);
  log_.assign(q_, 0);
  Poly x(a, 0), cur(a, 0);
  if (a == 1)
    x[0] = (p - f[0]) % p;
  else
    x[1] = 1;
  cur[0] = 1;
  for (uint32_t k = 0; k + 1 < q_; ++k) {
    uint32_t code = 0;
    for (int i = int(a) - 1; i >= 0; --i) code = code * p + cur[i];
    exp_[k] = code;
    log_[code] = k;
    cur = mulmod(cur, x, f, p);
  }
}

Fq GroundField::from_int(int64_t v) const {
  int64_t r = v % int64_t(p_);
  if (r < 0) r += p_;
  return Fq{uint32_t(r)};
}

Fq GroundField::generator() const { return Fq{exp_[q_ > 2 ? 1 : 0]}; }

Fq GroundField::add(Fq x, Fq y) const {
  if (a_ == 1) return Fq{(x.code + y.code) % p_};
  uint32_t out = 0, scale = 1, u = x.code, v = y.code;
  for (uint32_t i = 0; i < a_; ++i) {
    out += ((u % p_ + v % p_) % p_) * scale;
    u /= p_;
    v /= p_;
    scale *= p_;
  }
  return Fq{out};
}

Fq GroundField::neg(Fq x) const {
  if (a_ == 1) return Fq{(p_ - x.code) % p_};
  uint32_t out = 0, scale = 1, u = x.code;
  for (uint32_t i = 0; i < a_; ++i) {
    out += ((p_ - u % p_) % p_) * scale;
    u /= p_;
    scale *= p_;
  }
  return Fq{out};
}

Fq GroundField::sub(Fq x, Fq y) const { return add(x, neg(y)); }

Fq GroundField::mul(Fq x, Fq y) const {
  if (x.code == 0 || y.code == 0) return Fq{0};
  if (a_ == 1) return Fq{uint32_t(uint64_t(x.code) * y.code % p_)};
  return Fq{exp_[(uint64_t(log_[x.code]) + log_[y.code]) % (q_ - 1)]};
}

Fq GroundField::inv(Fq x) const {
  if (x.code == 0) throw DomainError("inverse of zero in F_q");
  return Fq{exp_[(q_ - 1 - log_[x.code]) % (q_ - 1)]};
}

Fq GroundField::pow(Fq x, uint64_t e) const {
  if (e == 0) return one();
  if (x.code == 0) return zero();
  return Fq{exp_[(uint64_t(log_[x.code]) * (e % (q_ - 1))) % (q_ - 1)]};
}

Fq GroundField::frob(Fq x, int64_t k) const {
  int64_t r = k % int64_t(a_);
  if (r < 0) r += a_;
  uint64_t e = 1;
  for (int64_t i = 0; i < r; ++i) e *= p_;
  return pow(x, e);
}

std::vector<uint32_t> GroundField::coeffs(Fq x) const {
  std::vector<uint32_t> c(a_);
  uint32_t u = x.code;
  for (uint32_t i = 0; i < a_; ++i) {
    c[i] = u % p_;
    u /= p_;
  }
  return c;
}

Fq GroundField::from_coeffs(const std::vector<uint32_t>& c) const {
  if (c.size() > a_) throw ShapeError("too many coefficients for F_q element");
  uint32_t code = 0;
  for (size_t i = c.size(); i-- > 0;) code = code * p_ + c[i] % p_;
  return Fq{code};
}

std::string GroundField::format(Fq x) const {
  if (a_ == 1) return std::to_string(x.code);
  auto c = coeffs(x);
  std::string out;
  for (int i = int(a_) - 1; i >= 0; --i) {
    if (!c[i]) continue;
    if (!out.empty()) out += '+';
    if (i == 0) {
      out += std::to_string(c[i]);
      continue;
    }
    if (c[i] != 1) out += std::to_string(c[i]);
    out += 't';
    if (i > 1) out += '^' + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

Fq GroundField::parse(std::string_view s) const {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '*') t += ch;
  if (t.empty()) throw ParseError("empty field element");
  std::vector<int64_t> c(a_, 0);
  size_t i = 0;
  while (i < t.size()) {
    int sign = 1;
    while (i < t.size() && (t[i] == '+' || t[i] == '-')) {
      if (t[i] == '-') sign = -sign;
      ++i;
    }
    int64_t coef = 1;
    bool have_num = false;
    if (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
      coef = 0;
      while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
        coef = (coef * 10 + (t[i] - '0')) % p_;
        ++i;
      }
      have_num = true;
    }
    uint32_t deg = 0;
    if (i < t.size() && t[i] == 't') {
      ++i;
      deg = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        if (i >= t.size() || !std::isdigit(static_cast<unsigned char>(t[i])))
          throw ParseError("bad exponent in '" + std::string(s) + "'");
        deg = 0;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) deg = deg * 10 + (t[i++] - '0');
      }
    } else if (!have_num) {
      throw ParseError("cannot parse field element '" + std::string(s) + "'");
    }
    if (i < t.size() && t[i] != '+' && t[i] != '-')
      throw ParseError("cannot parse field element '" + std::string(s) + "'");
    if (deg >= a_) {
      // reduce t^deg using the modulus
      Fq g = generator();
      Fq term = mul(from_int(sign * coef), pow(g, deg));
      auto tc = coeffs(term);
      for (uint32_t k = 0; k < a_; ++k) c[k] += tc[k];
      continue;
    }
    c[deg] += sign * coef;
  }
  std::vector<uint32_t> out(a_);
  for (uint32_t k = 0; k < a_; ++k) out[k] = uint32_t(((c[k] % p_) + p_) % p_);
  return from_coeffs(out);
}

}  // namespace derinv
