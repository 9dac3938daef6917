#include "helpers.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "derinv/errors.hpp"

namespace derinv::testing {

std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eedULL);
  return g;
}

int64_t uniform(int64_t lo, int64_t hi) { return std::uniform_int_distribution<int64_t>(lo, hi)(rng()); }

uint64_t ipow(uint64_t b, int e) {
  uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

namespace {
uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}
}  // namespace

uint64_t witt_to_int(const WittVector& x) {
  uint64_t p = x.field()->p();
  int n = x.precision();
  uint64_t N = ipow(p, n);
  uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    uint64_t teich = powmod(x[size_t(i)].code, ipow(p, n - 1), N);
    v = (v + ipow(p, i) % N * teich) % N;
  }
  return v;
}

WittVector int_to_witt(FieldPtr field, int n, uint64_t v) {
  uint64_t p = field->p();
  uint64_t N = ipow(p, n);
  v %= N;
  std::vector<Fq> c;
  for (int i = 0; i < n; ++i) {
    uint64_t digit = (v / ipow(p, i)) % p;
    c.push_back(field->from_int(int64_t(digit)));
    uint64_t teich = powmod(digit, ipow(p, n - 1), N);
    v = (v + N - ipow(p, i) * teich % N) % N;
  }
  return WittVector(field, c);
}

WittVector random_witt(const FieldPtr& field, int n) {
  std::vector<Fq> c;
  for (int i = 0; i < n; ++i) c.push_back(Fq{uint32_t(uniform(0, field->order() - 1))});
  return WittVector(field, c);
}

GrElem random_elem(const GaloisRing& R) {
  GrElem x = R.zero();
  for (int k = 0; k < R.precision(); ++k)
    x = R.add(x, R.mul(R.p_power(k), R.lift(Fq{uint32_t(uniform(0, R.field()->order() - 1))})));
  return x;
}

GrMatrix random_matrix(const GaloisRing& R, size_t rows, size_t cols) {
  GrMatrix A = zeros(R, rows, cols);
  for (auto& x : A.a) x = random_elem(R);
  return A;
}

GrMatrix random_invertible(const GaloisRing& R, size_t m) {
  for (;;) {
    GrMatrix U = random_matrix(R, m, m);
    try {
      inverse(R, U);
      return U;
    } catch (const DomainError&) {
    }
  }
}

std::string data_path(const std::string& rel) { return std::string(DERINV_DATA_DIR) + "/" + rel; }

std::vector<std::string> rmod_fixture_paths() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(data_path("fixtures/rmod")))
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

RModuleExplicit load_rmodule(const std::string& path) {
  std::ifstream in(path);
  return rmodule_from_json(nlohmann::json::parse(in));
}

namespace {

GrMatrix stack_identity_top(const GaloisRing& R, size_t top, size_t total) {
  GrMatrix A = zeros(R, total, top);
  for (size_t i = 0; i < top; ++i) A(i, i) = R.one();
  return A;
}

GrMatrix project_bottom(const GaloisRing& R, size_t skip, size_t total) {
  GrMatrix A = zeros(R, total - skip, total);
  for (size_t i = 0; i + skip < total; ++i) A(i, skip + i) = R.one();
  return A;
}

}  // namespace

ShortExact split_extension(uint32_t p, int a, int b, bool scramble) {
  RModuleExplicit L = u_sigma(p, a, a + 2), N = u_sigma(p, b, b + 2);
  RModuleExplicit M = direct_sum(L, N);
  const auto& R = *M.ring();
  RMorphism f{0, {}}, g{0, {}};
  for (int i = 0; i <= 1; ++i) {
    size_t gl = L.generators(i), gm = M.generators(i);
    f.maps.push_back(stack_identity_top(R, gl, gm));
    g.maps.push_back(project_bottom(R, gl, gm));
  }
  if (scramble) {
    std::vector<GrMatrix> U;
    for (int i = 0; i <= 1; ++i) U.push_back(random_invertible(R, M.generators(i)));
    M = change_basis(M, U);
    for (int i = 0; i <= 1; ++i) {
      f.maps[size_t(i)] = mul(R, U[size_t(i)], f.maps[size_t(i)]);
      g.maps[size_t(i)] = mul(R, g.maps[size_t(i)], inverse(R, U[size_t(i)]));
    }
  }
  return {L, M, N, f, g};
}

ShortExact nonsplit_extension(uint32_t p, int sigma) {
  RModuleExplicit U = u_sigma(p, sigma, sigma + 2, 0, 2);
  RingPtr ring = U.ring();
  const auto& R = *ring;
  auto cyclic = [&](int ann, const GrElem& F, const GrElem& V) {
    RDegree d0, d1;
    d0.ann = {ann};
    d0.F = zeros(R, 1, 1);
    d0.F(0, 0) = F;
    d0.V = zeros(R, 1, 1);
    d0.V(0, 0) = V;
    return RModuleExplicit(ring, 0, {d0, d1});
  };
  RModuleExplicit W2 = cyclic(2, R.one(), R.p_power(1));
  RModuleExplicit pW2 = cyclic(1, R.one(), R.zero());
  RModuleExplicit k = cyclic(1, R.one(), R.zero());
  RModuleExplicit L = direct_sum(U, pW2), M = direct_sum(U, W2);
  size_t g0 = U.generators(0), g1 = U.generators(1);
  RMorphism f{0, {}}, g{0, {}};
  GrMatrix f0 = identity(R, g0 + 1);
  f0(g0, g0) = R.p_power(1);
  f.maps = {f0, identity(R, g1)};
  GrMatrix g0m = zeros(R, 1, g0 + 1);
  g0m(0, g0) = R.one();
  g.maps = {g0m, zeros(R, 0, g1)};
  return {L, M, k, f, g};
}

}  // namespace derinv::testing
