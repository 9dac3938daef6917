#include <benchmark/benchmark.h>

#include <random>

#include "derinv/catalog.hpp"
#include "derinv/fmcheck.hpp"
#include "derinv/invariants.hpp"
#include "derinv/isocrystal.hpp"
#include "derinv/rmod.hpp"
#include "derinv/specseq.hpp"
#include "derinv/witt.hpp"

using namespace derinv;

namespace {

WittVector random_witt(const FieldPtr& F, int n, std::mt19937_64& g) {
  std::vector<Fq> c;
  for (int i = 0; i < n; ++i) c.push_back(Fq{uint32_t(g() % F->order())});
  return WittVector(F, c);
}

// args: p, n
void BM_WittMul(benchmark::State& st) {
  auto F = GroundField::get(uint32_t(st.range(0)), 1);
  int n = int(st.range(1));
  std::mt19937_64 g(1);
  WittVector x = random_witt(F, n, g), y = random_witt(F, n, g);
  WittPolynomials::get(F->p(), n);
  for (auto _ : st) benchmark::DoNotOptimize(mul(x, y));
}
BENCHMARK(BM_WittMul)->Args({2, 4})->Args({3, 4})->Args({5, 3})->Args({5, 4});

void BM_WittAdd(benchmark::State& st) {
  auto F = GroundField::get(uint32_t(st.range(0)), 1);
  int n = int(st.range(1));
  std::mt19937_64 g(2);
  WittVector x = random_witt(F, n, g), y = random_witt(F, n, g);
  WittPolynomials::get(F->p(), n);
  for (auto _ : st) benchmark::DoNotOptimize(add(x, y));
}
BENCHMARK(BM_WittAdd)->Args({2, 4})->Args({5, 4});

// arg: matrix size over GR(3, 2, 12)
void BM_NewtonSlopes(benchmark::State& st) {
  auto R = GaloisRing::get(3, 2, 12);
  size_t m = size_t(st.range(0));
  GrMatrix A = zeros(*R, m, m);
  for (size_t i = 0; i < m; ++i) {
    A(i, (i + 1) % m) = R->one();
    A(i, i) = R->p_power(int(i % 3));
  }
  auto M = frobenius_matrix(R, A);
  for (auto _ : st) benchmark::DoNotOptimize(newton_slopes(M));
}
BENCHMARK(BM_NewtonSlopes)->Arg(4)->Arg(8)->Arg(16);

// arg: sigma, truncated at sigma + 4
void BM_DominoNumber(benchmark::State& st) {
  int s = int(st.range(0));
  auto U = u_sigma(3, s, s + 4);
  for (auto _ : st) benchmark::DoNotOptimize(domino_number(U, 0));
}
BENCHMARK(BM_DominoNumber)->Arg(1)->Arg(5)->Arg(10);

void BM_CheckRelations(benchmark::State& st) {
  auto U = direct_sum(u_sigma(3, 4, 8), u_sigma(3, 6, 10));
  for (auto _ : st) benchmark::DoNotOptimize(check_relations(U));
}
BENCHMARK(BM_CheckRelations);

void BM_CatalogReports(benchmark::State& st) {
  const auto& cat = builtin_catalog();
  for (auto _ : st)
    for (const auto& e : cat) benchmark::DoNotOptimize(compute_report(e.profile));
}
BENCHMARK(BM_CatalogReports)->Unit(benchmark::kMillisecond);

void BM_CompareMatrix(benchmark::State& st) {
  const auto& cat = builtin_catalog();
  for (auto _ : st)
    for (const auto& a : cat)
      for (const auto& b : cat) benchmark::DoNotOptimize(compare(a.profile, b.profile));
}
BENCHMARK(BM_CompareMatrix)->Unit(benchmark::kMillisecond);

void BM_TwistedTate(benchmark::State& st) {
  auto P = lookup("k3:ss:5").profile;
  auto tw = make_twist(3, 3);
  for (auto _ : st) benchmark::DoNotOptimize(tate_ss_tp(assemble_tr(descent_ss(P, tw), 2, tw)));
}
BENCHMARK(BM_TwistedTate);

}  // namespace

BENCHMARK_MAIN();
