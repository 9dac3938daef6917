// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "derinv/catalog.hpp"
#include "derinv/errors.hpp"
#include "derinv/fmcheck.hpp"
#include "derinv/invariants.hpp"
#include "derinv/isocrystal.hpp"
#include "derinv/rmod.hpp"
#include "derinv/specseq.hpp"
#include "derinv/witt.hpp"
#include "helpers.hpp"

using namespace derinv;
using namespace derinv::testing;

namespace {

// Collects the first few failures of a criterion.
struct Ledger {
  int failures = 0;
  std::ostringstream detail;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures < 5) detail << "\n    " << what;
    ++failures;
  }
};

bool has_marker(const SSCell* c, const std::string& m) {
  if (!c) return false;
  for (const auto& x : c->markers)
    if (x == m) return true;
  return false;
}

std::string witt_str(const WittVector& x) { return format_witt(x); }

// ---- 1 ---------------------------------------------------------------------

std::string criterion1(Ledger& L) {
  int triples = 0, fv = 0;
  for (uint32_t p : {2u, 3u, 5u}) {
    auto F = GroundField::get(p, 1);
    for (int n = 1; n <= 4; ++n) {
      uint64_t N = ipow(p, n);
      WittVector zero = WittVector::zero(F, n), one = WittVector::one(F, n);
      for (int s = 0; s < 1000; ++s, ++triples) {
        WittVector x = random_witt(F, n), y = random_witt(F, n), z = random_witt(F, n);
        std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n) + " x=" + witt_str(x) + " y=" + witt_str(y);
        L.expect(add(x, y) == add(y, x), "x+y != y+x " + tag);
        L.expect(mul(x, y) == mul(y, x), "xy != yx " + tag);
        L.expect(add(add(x, y), z) == add(x, add(y, z)), "+ not associative " + tag);
        L.expect(mul(mul(x, y), z) == mul(x, mul(y, z)), "* not associative " + tag);
        L.expect(mul(x, add(y, z)) == add(mul(x, y), mul(x, z)), "not distributive " + tag);
        L.expect(add(x, zero) == x && mul(x, one) == x, "identities " + tag);
        L.expect(add(x, neg(x)) == zero, "negation " + tag);
        // Z/p^n oracle
        uint64_t a = witt_to_int(x), b = witt_to_int(y);
        L.expect(witt_to_int(add(x, y)) == (a + b) % N, "sum disagrees with Z/p^n " + tag);
        L.expect(witt_to_int(mul(x, y)) == a * b % N, "product disagrees with Z/p^n " + tag);
        // ghost oracle, component i is determined mod p^{i+1}
        auto gx = ghost(x), gy = ghost(y), gs = ghost(add(x, y)), gp = ghost(mul(x, y));
        for (int i = 0; i < n; ++i) {
          uint64_t m = ipow(p, i + 1);
          L.expect((gx[i] + gy[i]) % m == gs[i] % m, "ghost sum " + tag);
          L.expect(gx[i] % m * (gy[i] % m) % m == gp[i] % m, "ghost product " + tag);
        }
      }
      for (int s = 0; s < 200; ++s, ++fv) {
        WittVector x = random_witt(F, n);
        L.expect(frobenius(verschiebung(x)) == mul_by_p(x), "FV != p on " + witt_str(x));
        L.expect(verschiebung(frobenius(x)) == mul_by_p(x), "VF != p on " + witt_str(x));
        L.expect(mul_by_p(x) == mul(WittVector::from_int(F, n, p), x), "p != p*1 on " + witt_str(x));
      }
    }
  }
  return std::to_string(triples) + " triples against Z/p^n and ghost components, FV=VF=p on " + std::to_string(fv) +
         " samples";
}

// ---- 2 ---------------------------------------------------------------------

std::string criterion2(Ledger& L) {
  int shipped = 0;
  for (const auto& path : rmod_fixture_paths()) {
    ++shipped;
    auto viol = check_relations(load_rmodule(path));
    L.expect(viol.empty(), path + ": " + (viol.empty() ? "" : format_violation(viol.front())));
  }
  for (int s = 1; s <= 10; ++s)
    for (uint32_t p : {2u, 3u, 5u}) L.expect(check_relations(u_sigma(p, s, s + 3)).empty(), "generated U_" + std::to_string(s));
  auto broken = check_relations(load_rmodule(data_path("fixtures/broken/fdv_u2.json")));
  L.expect(!broken.empty() && broken.front().relation == "FdV=d", "broken fixture did not fail FdV=d");
  return std::to_string(shipped) + " shipped fixtures and U_1..U_10 clean; broken fixture fails " +
         (broken.empty() ? std::string("nothing") : broken.front().relation);
}

// ---- 3 ---------------------------------------------------------------------

std::string criterion3(Ledger& L) {
  const uint32_t primes[] = {2, 3, 5};
  for (int s = 0; s < 50; ++s) {
    uint32_t p = primes[s % 3];
    auto R = GaloisRing::get(p, 1, p == 2 ? 30 : 16);
    int deg = int(uniform(1, 6));
    std::vector<mpz_class> c{1};
    for (int i = 0; i < deg; ++i) c.push_back(uniform(-60, 60));
    if (c.back() == 0) c.back() = p;
    std::string tag = "p=" + std::to_string(p) + " deg " + std::to_string(deg);
    try {
      L.expect(newton_slopes(companion(R, c)) == newton_from_charpoly(c, p), "companion slopes " + tag);
    } catch (const PrecisionError& e) {
      L.expect(false, std::string("precision: ") + e.what());
    }
  }
  struct Ring {
    uint32_t p, a;
  };
  const Ring rings[] = {{2, 1}, {3, 1}, {5, 1}, {3, 2}, {2, 2}};
  int done = 0, resampled = 0;
  for (int s = 0; done < 100 && s < 1000; ++s) {
    Ring rr = rings[s % 5];
    auto Rp = GaloisRing::get(rr.p, rr.a, 12);
    const auto& R = *Rp;
    size_t m1 = size_t(uniform(1, 3)), m2 = size_t(uniform(1, 3));
    GrMatrix A = random_matrix(R, m1, m1), B = random_matrix(R, m2, m2);
    try {
      auto sa = newton_slopes(frobenius_matrix(Rp, A));
      auto sb = newton_slopes(frobenius_matrix(Rp, B));
      auto sab = newton_slopes(frobenius_matrix(Rp, block_diag(R, A, B)));
      GrMatrix U = random_invertible(R, m1);
      auto sc = newton_slopes(frobenius_matrix(Rp, mul(R, mul(R, inverse(R, U), A), sigma(R, U, 1))));
      L.expect(sab == sa + sb, "block sum " + sab.to_string() + " vs " + (sa + sb).to_string());
      L.expect(sc == sa, "conjugate " + sc.to_string() + " vs " + sa.to_string());
      ++done;
    } catch (const PrecisionError&) {
      ++resampled;
    }
  }
  L.expect(done == 100, "only " + std::to_string(done) + " samples resolved");
  return "50 companion polynomials; " + std::to_string(done) + " block/conjugation samples (" +
         std::to_string(resampled) + " resampled for precision)";
}

// ---- 4 ---------------------------------------------------------------------

std::string criterion4(Ledger& L) {
  for (int s0 = 1; s0 <= 10; ++s0) {
    auto P = lookup("k3:ss:" + std::to_string(s0)).profile;
    auto R = compute_report(P);
    std::string tag = " (sigma0=" + std::to_string(s0) + ")";
    L.expect((*R.T)[0][2] == 1, "T^{0,2}" + tag);
    L.expect(R.tcyc->at(-2) == 1, "T^cyc_{-2}" + tag);
    L.expect((*R.m)[1][1] == 22, "m^{1,1}" + tag);
    L.expect((*R.hw)[1][1] == 20, "h_W^{1,1}" + tag);
    L.expect((*R.hw)[0][2] == 1 && (*R.hw)[2][0] == 1, "h_W^{0,2}, h_W^{2,0}" + tag);
    L.expect(P.H(2).rank() == 22, "b_2 from crystalline rank" + tag);
    L.expect((*R.hw)[0][2] + (*R.hw)[1][1] + (*R.hw)[2][0] == 22, "b_2 from h_W" + tag);
    L.expect(*R.euler == std::vector<int64_t>{2, -20, 2}, "chi" + tag);
    L.expect(crew_check(P) == std::vector<bool>{true, true, true}, "Crew" + tag);
    L.expect(!R.height, "height" + tag);
    L.expect(mukai_crystal(P) == SlopeMultiset{{Rational(1), 24}}, "Mukai crystal" + tag);
  }
  return "sigma0 = 1..10: T=1, T^cyc=1, m=22, h_W=20/1/1, b_2=22 twice, chi=2,-20, height inf, Mukai {1:24}";
}

// ---- 5 ---------------------------------------------------------------------

std::string criterion5(Ledger& L) {
  for (int h = 1; h <= 10; ++h) {
    auto P = lookup("k3:h:" + std::to_string(h)).profile;
    auto R = compute_report(P);
    std::string tag = " (h=" + std::to_string(h) + ")";
    L.expect((*R.m)[0][2] == 1 && (*R.m)[1][1] == 20, "m numbers" + tag);
    L.expect(*R.hw == *P.hodge, "h_W != Hodge" + tag);
    L.expect(R.height == h, "height readback" + tag);
    L.expect(degenerates_at(slope_ss(P)) == 1, "slope SS" + tag);
    L.expect(R.hw_flags->hodge_witt, "Hodge-Witt" + tag);
    L.expect(R.mazur_ogus.value == true, "Mazur-Ogus" + tag);
  }
  return "h = 1..10: m^{0,2}=1, m^{1,1}=20, h_W = h, height = h, E_1 degeneration, Hodge-Witt";
}

// ---- 6 ---------------------------------------------------------------------

std::string criterion6(Ledger& L) {
  TwistInfo tw = make_twist(kCatalogPrime, kCatalogPrime);
  for (int s0 = 1; s0 <= 10; ++s0) {
    auto P = lookup("k3:ss:" + std::to_string(s0)).profile;
    std::string tag = " (sigma0=" + std::to_string(s0) + ")";
    auto pages = descent_ss(P, tw);
    const SSPage& last = pages.back();
    const SSCell* k = last.at(0, 0);
    L.expect(k && k->slopes.rank() == 1 && has_marker(k, "ord(alpha)W"), "kernel entry at (0,0)" + tag);
    L.expect(has_marker(last.at(1, 2), "/dlog(alpha)"), "quotient marker at (1,2)" + tag);
    auto tr = assemble_tr(pages, 2, tw);
    auto tp = tate_ss_tp(tr);
    auto tp0 = tate_ss_tp(assemble_tr(descent_ss(P), 2));
    L.expect(tp.k_dim == s0 + 1, "dim K(X,alpha)" + tag);
    L.expect(tp0.k_dim == s0, "dim K(X)" + tag);
    L.expect(tp.odd_vanishes && tp0.odd_vanishes, "TP odd" + tag);
    for (int i : {-1, 1}) L.expect(tr.tr.at(i).slopes.rank() == 0, "TR odd rank" + tag);
    L.expect(tr.tr.at(1).torsion_length == 0 && tr.tr.at(1).outgoing.empty(), "TR_1" + tag);
  }
  for (int h = 1; h <= 10; ++h) {
    auto P = lookup("k3:h:" + std::to_string(h)).profile;
    auto tr = assemble_tr(descent_ss(P), 2);
    for (int i : {-1, 1}) {
      const auto& e = tr.tr.at(i);
      L.expect(e.slopes.empty() && e.torsion_length == 0 && e.outgoing.empty(), "TR odd, height " + std::to_string(h));
    }
  }
  return "ord(alpha)=p, sigma0 = 1..10: (0,0) rank 1 ord(alpha)W, /dlog(alpha) at (1,2), dim K = sigma0+1 vs sigma0, odd TP "
         "vanishes, odd TR rank 0 (TR_1 = 0, TR_-1 torsion only), odd TR = 0 exactly for height 1..10";
}

// ---- 7 ---------------------------------------------------------------------

std::string criterion7(Ledger& L) {
  const std::set<std::string> required = {
      "crystalline slope constraints",
      "m^{i,j} = m^{j,i} = m^{d-i,d-j}",
      "h_W symmetries",
      "b_n = sum_{i+j=n} h_W^{i,j}",
      "h_W^{i,j} <= h^{i,j}",
      "h^TR_{n,lambda} = sum_{i-j=n} h^{i,j}_{dRW,lambda}",
      "Mazur-Ogus conditions agree",
      "Hodge-Witt iff derived Hodge-Witt",
  };
  size_t n = 0, checks = 0;
  for (const auto& e : builtin_catalog()) {
    ++n;
    auto R = compute_report(e.profile);
    std::set<std::string> seen;
    for (const auto& c : R.checks) {
      ++checks;
      seen.insert(c.name);
      L.expect(c.ok, e.key + ": " + c.name + " " + c.detail);
    }
    for (const auto& name : required) L.expect(seen.count(name) == 1, e.key + ": identity not run: " + name);
    // domino duality on the table itself
    if (e.profile.dominoes) {
      int d = e.profile.d;
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j)
          L.expect(e.profile.T(i, j) == e.profile.T(d - i - 2, d - j + 2), e.key + ": domino duality");
    }
  }
  L.expect(n >= 30, "catalog has only " + std::to_string(n) + " profiles");
  return std::to_string(n) + " profiles, " + std::to_string(checks) + " identity checks, all exact";
}

// ---- 8 ---------------------------------------------------------------------

std::string criterion8(Ledger& L) {
  auto r1 = compare(lookup("k3:ss:1").profile, lookup("k3:ss:2").profile);
  L.expect(r1.obstruction() && r1.find("x")->verdict == Verdict::Mismatch, "ss:1 vs ss:2 not obstructed at (x)");
  auto r2 = compare(lookup("k3:h:3").profile, lookup("k3:ss:5").profile);
  L.expect(r2.find("ii")->verdict == Verdict::Mismatch && r2.find("iii")->verdict == Verdict::Mismatch,
           "h:3 vs ss:5 slopes match");
  L.expect(r2.find("ix")->verdict == Verdict::Mismatch, "h:3 vs ss:5 heights match");
  const auto& cat = builtin_catalog();
  for (const auto& e : cat) L.expect(!compare(e.profile, e.profile).obstruction(), e.key + " obstructs itself");
  int replays = 0;
  for (const auto& a : cat)
    for (const auto& b : cat) {
      if (a.profile.d != 2 || b.profile.d != 2) continue;
      auto R = compare(a.profile, b.profile);
      if (R.find("ii")->verdict == Verdict::Match && R.find("viii")->verdict == Verdict::Match) {
        ++replays;
        L.expect(R.find("xi")->verdict == Verdict::Match, a.key + " vs " + b.key + ": Hodge tables differ");
      }
    }
  return "artin invariant and height obstructions found, " + std::to_string(cat.size()) +
         " self-comparisons clean, " + std::to_string(replays) + " surface pairs replayed";
}

// ---- 9 ---------------------------------------------------------------------

std::string criterion9(Ledger&) {
  return "not applicable: there are no large-scale experiments to reproduce, so nothing beyond the exact ledgers above is "
         "reproduced";
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  const std::pair<int, std::function<std::string(Ledger&)>> criteria[] = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    Ledger L;
    std::string summary;
    auto t = Clock::now();
    try {
      summary = fn(L);
    } catch (const std::exception& e) {
      L.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - t).count();
    bool ok = L.failures == 0;
    failed += ok ? 0 : 1;
    std::printf("criterion %d: %s  %s [%.2fs]%s\n", id, ok ? "PASS" : "FAIL", summary.c_str(), secs,
                ok ? "" : (" (" + std::to_string(L.failures) + " failures)" + L.detail.str()).c_str());
  }
  double total = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%d of 9 criteria passed in %.2fs\n", 9 - failed, total);
  return failed == 0 ? 0 : 1;
}
