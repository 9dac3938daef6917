#include "derinv/catalog.hpp"

#include <filesystem>
#include <functional>
#include <mutex>

#include "derinv/errors.hpp"
#include "derinv/invariants.hpp"

namespace derinv {

namespace {

constexpr const char* kPublished = "published";
constexpr const char* kLiterature = "literature-derived";

mpz_class q_pow(uint32_t p, uint32_t a, int k) {
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, a * uint32_t(k));
  return q;
}

// Built-in entries must also satisfy every identity of the invariant report;
// user files only need to pass the validators.
void certify(CatalogEntry& e, bool identities = true) {
  auto issues = validate_profile(e.profile);
  std::string msg;
  for (const auto& s : issues) msg += "\n  " + s;
  if (issues.empty() && identities) {
    InvariantReport R = compute_report(e.profile);
    for (const auto& c : R.checks)
      if (!c.ok) msg += "\n  identity fails: " + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
  }
  if (!msg.empty()) throw ValidationError("profile '" + e.profile.name + "' is inconsistent:" + msg);
}

NumericalProfile k3_base(const std::string& name, uint32_t p) {
  NumericalProfile P;
  P.name = name;
  P.p = p;
  P.a = 1;
  P.d = 2;
  P.hodge = IntTable{{1, 0, 1}, {0, 20, 0}, {1, 0, 1}};
  P.crys.d = 2;
  P.crys.degrees = {SlopeMultiset{{0, 1}}, {}, {}, {}, SlopeMultiset{{2, 1}}};
  P.torsion_free = std::vector<bool>(5, true);
  P.hdr_degenerate = true;
  P.dominoes.emplace();
  P.albanese_dim = 0;
  P.calabi_yau = true;
  P.provenance["hodge"] = kLiterature;
  return P;
}

int parse_int(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad number '" + s + "' in catalog key '" + key + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t k = s.find(sep, start);
    out.push_back(s.substr(start, k - start));
    if (k == std::string::npos) break;
    start = k + 1;
  }
  return out;
}

}  // namespace

CatalogEntry k3_finite_height(int h, uint32_t p) {
  if (h < 1 || h > 10) throw DomainError("K3 height must be in 1..10, got " + std::to_string(h));
  CatalogEntry e;
  e.key = "k3:h:" + std::to_string(h);
  e.profile = k3_base(e.key, p);
  SlopeMultiset H2;
  H2.add(Rational(h - 1, h), h);
  H2.add(Rational(1), 22 - 2 * h);
  H2.add(Rational(h + 1, h), h);
  e.profile.crys.degrees[2] = H2;
  e.profile.provenance["crys"] = kLiterature;
  e.profile.provenance["dominoes"] = kPublished;
  certify(e);
  return e;
}

CatalogEntry k3_supersingular(int sigma0, uint32_t p) {
  if (sigma0 < 1 || sigma0 > 10) throw DomainError("Artin invariant must be in 1..10, got " + std::to_string(sigma0));
  CatalogEntry e;
  e.key = "k3:ss:" + std::to_string(sigma0);
  e.profile = k3_base(e.key, p);
  e.profile.crys.degrees[2] = SlopeMultiset{{1, 22}};
  e.profile.dominoes = std::vector<DominoSpec>{{0, 2, {sigma0}}};
  e.profile.provenance["crys"] = kPublished;
  e.profile.provenance["dominoes"] = kPublished;
  certify(e);
  return e;
}

CatalogEntry twisted_k3(int sigma0, int64_t ord_alpha, uint32_t p) {
  TwistInfo tw = make_twist(p, ord_alpha);
  CatalogEntry e = k3_supersingular(sigma0, p);
  if (!tw.twisted()) return e;
  int v = 0;
  for (int64_t x = ord_alpha; x > 1; x /= p) ++v;
  e.key += ":tw:" + std::to_string(v);
  e.profile.name = e.key;
  e.profile.twist = tw;
  e.profile.provenance["twist"] = kPublished;
  if (sigma0 + 1 > 10)
    e.warnings.push_back("sigma_0(X,alpha) = " + std::to_string(sigma0 + 1) +
                         " exceeds the bound sigma_0 <= 10 known for untwisted supersingular K3 surfaces");
  certify(e);
  return e;
}

CatalogEntry curve(int g, int f, uint32_t p) {
  if (g < 0 || f < 0 || f > g) throw DomainError("curve needs 0 <= f <= g");
  CatalogEntry e;
  e.key = "curve:" + std::to_string(g) + ":" + std::to_string(f);
  NumericalProfile& P = e.profile;
  P.name = e.key;
  P.p = p;
  P.d = 1;
  P.hodge = IntTable{{1, g}, {g, 1}};
  SlopeMultiset H1;
  H1.add(Rational(0), f);
  H1.add(Rational(1, 2), 2 * (g - f));
  H1.add(Rational(1), f);
  P.crys.d = 1;
  P.crys.degrees = {SlopeMultiset{{0, 1}}, H1, SlopeMultiset{{1, 1}}};
  P.torsion_free = std::vector<bool>(3, true);
  P.hdr_degenerate = true;
  P.dominoes.emplace();
  P.albanese_dim = g;
  if (g == 1) {
    // a_p = 1 (ordinary) or 0 (supersingular) over F_p.
    mpz_class q = q_pow(p, 1, 1);
    P.charpolys[0] = {1, -1};
    P.charpolys[1] = {1, f == 1 ? -1 : 0, q};
    P.charpolys[2] = {1, -q};
  }
  P.provenance["crys"] = kLiterature;
  P.provenance["hodge"] = kLiterature;
  certify(e);
  return e;
}

SlopeMultiset exterior_power(const SlopeMultiset& s, int i) {
  std::vector<Rational> xs;
  for (const auto& [l, m] : s.entries())
    for (int64_t k = 0; k < m; ++k) xs.push_back(l);
  SlopeMultiset out;
  if (i < 0 || i > int(xs.size())) return out;
  std::function<void(size_t, int, Rational)> rec = [&](size_t start, int left, Rational acc) {
    if (left == 0) {
      out.add(acc, 1);
      return;
    }
    for (size_t k = start; k + size_t(left) <= xs.size(); ++k) rec(k + 1, left - 1, acc + xs[k]);
  };
  rec(0, i, Rational(0));
  return out;
}

CatalogEntry abelian(int g, const SlopeMultiset& newton, std::optional<std::vector<DominoSpec>> dominoes, uint32_t p) {
  if (g < 1 || g > 5) throw DomainError("abelian varieties are supported for 1 <= g <= 5");
  if (newton.rank() != 2 * g) throw ValidationError("Newton data of H^1 must have rank 2g");
  for (const auto& [l, m] : newton.entries()) {
    if (l < 0 || l > 1) throw ValidationError("H^1 slope " + format_rational(l) + " outside [0,1]");
    if (newton.multiplicity(1 - l) != m) throw ValidationError("H^1 slopes are not symmetric under l -> 1-l");
  }
  int f = int(newton.multiplicity(Rational(0)));
  CatalogEntry e;
  e.key = "abelian:" + std::to_string(g) + ":" + std::to_string(f);
  NumericalProfile& P = e.profile;
  P.name = e.key;
  P.p = p;
  P.d = g;
  P.crys.d = g;
  for (int i = 0; i <= 2 * g; ++i) P.crys.degrees.push_back(exterior_power(newton, i));
  auto binom = [](int n, int k) {
    int64_t r = 1;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
  };
  IntTable h(size_t(g + 1), std::vector<int64_t>(size_t(g + 1)));
  for (int i = 0; i <= g; ++i)
    for (int j = 0; j <= g; ++j) h[i][j] = binom(g, i) * binom(g, j);
  P.hodge = h;
  P.torsion_free = std::vector<bool>(size_t(2 * g + 1), true);
  P.hdr_degenerate = true;
  P.dominoes = dominoes ? *dominoes : std::vector<DominoSpec>{};
  P.albanese_dim = g;
  P.provenance["crys"] = kLiterature;
  P.provenance["hodge"] = kLiterature;
  P.provenance["dominoes"] = dominoes ? "user" : kLiterature;
  certify(e);
  return e;
}

CatalogEntry projective_space(int n, uint32_t p) {
  if (n < 1 || n > 6) throw DomainError("projective space dimension must be in 1..6");
  CatalogEntry e;
  e.key = "P:" + std::to_string(n);
  NumericalProfile& P = e.profile;
  P.name = e.key;
  P.p = p;
  P.d = n;
  P.crys.d = n;
  P.crys.degrees.assign(size_t(2 * n + 1), SlopeMultiset{});
  IntTable h(size_t(n + 1), std::vector<int64_t>(size_t(n + 1), 0));
  for (int k = 0; k <= n; ++k) {
    P.crys.degrees[size_t(2 * k)] = SlopeMultiset{{k, 1}};
    h[k][k] = 1;
    P.charpolys[2 * k] = {1, -q_pow(p, 1, k)};
  }
  P.hodge = h;
  P.torsion_free = std::vector<bool>(size_t(2 * n + 1), true);
  P.hdr_degenerate = true;
  P.dominoes.emplace();
  P.albanese_dim = 0;
  P.provenance["crys"] = kLiterature;
  certify(e);
  return e;
}

CatalogEntry lookup(const std::string& key) {
  auto parts = split(key, ':');
  auto num = [&](size_t k) { return parse_int(parts.at(k), key); };
  if (parts[0] == "k3" && parts.size() == 3 && parts[1] == "h") return k3_finite_height(num(2));
  if (parts[0] == "k3" && parts.size() == 3 && parts[1] == "ss") return k3_supersingular(num(2));
  if (parts[0] == "k3" && parts.size() == 5 && parts[1] == "ss" && parts[3] == "tw") {
    int v = num(4);
    if (v < 0 || v > 20) throw DomainError("twist exponent out of range in '" + key + "'");
    int64_t ord = 1;
    for (int k = 0; k < v; ++k) ord *= kCatalogPrime;
    return twisted_k3(num(2), ord);
  }
  if (parts[0] == "curve" && parts.size() == 3) return curve(num(1), num(2));
  if (parts[0] == "abelian" && parts.size() == 3) {
    int g = num(1), f = num(2);
    if (f < 0 || f > g) throw DomainError("abelian variety needs 0 <= f <= g");
    SlopeMultiset s;
    s.add(Rational(0), f);
    s.add(Rational(1, 2), 2 * (g - f));
    s.add(Rational(1), f);
    // Supersingular abelian surfaces carry one domino at (0,2); take the
    // superspecial case.
    std::optional<std::vector<DominoSpec>> dom;
    if (g == 2 && f == 0) dom = std::vector<DominoSpec>{{0, 2, {1}}};
    CatalogEntry e = abelian(g, s, dom);
    if (dom) e.profile.provenance["dominoes"] = kLiterature;
    return e;
  }
  if (parts[0] == "P" && parts.size() == 2) return projective_space(num(1));
  throw ParseError("unknown catalog key '" + key + "'");
}

const std::vector<CatalogEntry>& builtin_catalog() {
  static std::once_flag once;
  static std::vector<CatalogEntry> entries;
  std::call_once(once, [] {
    for (int h = 1; h <= 10; ++h) entries.push_back(k3_finite_height(h));
    for (int s = 1; s <= 10; ++s) entries.push_back(k3_supersingular(s));
    for (int s : {1, 3, 10}) entries.push_back(twisted_k3(s, kCatalogPrime));
    for (int g = 0; g <= 3; ++g)
      for (int f = 0; f <= g; ++f) entries.push_back(curve(g, f));
    for (const char* k : {"abelian:2:0", "abelian:2:1", "abelian:2:2", "abelian:3:2", "abelian:3:3"})
      entries.push_back(lookup(k));
    entries.push_back(projective_space(2));
    entries.push_back(projective_space(3));
  });
  return entries;
}

CatalogEntry load(const std::string& path) {
  CatalogEntry e;
  e.profile = load_profile(path);
  e.key = e.profile.name;
  for (auto& [field, tag] : e.profile.provenance)
    if (tag.empty()) tag = "user";
  certify(e, false);
  return e;
}

CatalogEntry resolve(const std::string& key_or_path) {
  if (std::filesystem::exists(key_or_path)) return load(key_or_path);
  return lookup(key_or_path);
}

}  // namespace derinv
