#include "derinv/invariants.hpp"

#include <sstream>

#include "derinv/errors.hpp"
#include "derinv/specseq.hpp"

namespace derinv {

SlopeTable drw_slopes(const NumericalProfile& P) {
  const int d = P.d;
  SlopeTable out(size_t(d + 1), std::vector<SlopeMultiset>(size_t(d + 1)));
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      auto win = SlopeInterval::window(Rational(i), Rational(i + 1));
      out[i][j] = shift(slope_part(P.H(i + j), win), Rational(-i));
    }
  return out;
}

std::map<int, SlopeMultiset> tr_slopes(const NumericalProfile& P) {
  SlopeTable drw = drw_slopes(P);
  std::map<int, SlopeMultiset> out;
  for (int n = -P.d; n <= P.d; ++n) {
    SlopeMultiset s;
    for (int i = 0; i <= P.d; ++i) {
      int j = i - n;
      if (j >= 0 && j <= P.d) s += drw[i][j];
    }
    out[n] = s;
  }
  return out;
}

IntTable m_numbers(const NumericalProfile& P) {
  const int d = P.d;
  IntTable out(size_t(d + 1), std::vector<int64_t>(size_t(d + 1), 0));
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      Rational m(0);
      for (const auto& [l, mult] : P.H(i + j).entries()) {
        if (l >= i && l < i + 1) m += (Rational(i + 1) - l) * mult;
        else if (l >= i - 1 && l < i) m += (l - Rational(i - 1)) * mult;
      }
      if (m.denominator() != 1 || m < 0)
        throw DomainError("m^{" + std::to_string(i) + "," + std::to_string(j) + "} = " + format_rational(m) +
                          " is not a nonnegative integer");
      out[i][j] = m.numerator();
    }
  return out;
}

IntTable hw_numbers(const NumericalProfile& P) {
  IntTable m = m_numbers(P);
  const int d = P.d;
  auto T = [&](int i, int j) -> int64_t {
    if (i < 0 || j < 0 || i > d || j > d) return 0;
    return P.T(i, j);
  };
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) m[i][j] += T(i, j) - 2 * T(i - 1, j + 1) + T(i - 2, j + 2);
  return m;
}

std::vector<int64_t> euler_characteristics(const NumericalProfile& P) {
  if (!P.hodge) throw InsufficientDataError("profile '" + P.name + "' has no Hodge numbers");
  std::vector<int64_t> out;
  for (int i = 0; i <= P.d; ++i) {
    int64_t chi = 0;
    for (int j = 0; j <= P.d; ++j) chi += (j % 2 ? -1 : 1) * P.h(i, j);
    out.push_back(chi);
  }
  return out;
}

std::vector<bool> crew_check(const NumericalProfile& P) {
  std::vector<int64_t> chi = euler_characteristics(P);
  IntTable hw = hw_numbers(P);
  std::vector<bool> out;
  for (int i = 0; i <= P.d; ++i) {
    int64_t s = 0;
    for (int j = 0; j <= P.d; ++j) s += (j % 2 ? -1 : 1) * hw[i][j];
    out.push_back(s == chi[size_t(i)]);
  }
  return out;
}

std::vector<int64_t> betti(const NumericalProfile& P) {
  std::vector<int64_t> out;
  for (const auto& s : P.crys.degrees) out.push_back(s.rank());
  return out;
}

namespace {

std::vector<int64_t> antidiagonal_sums(const IntTable& t, int d) {
  std::vector<int64_t> out(size_t(2 * d + 1), 0);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) out[size_t(i + j)] += t[i][j];
  return out;
}

std::string join(const std::vector<int64_t>& v) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) out += (k ? " " : "") + std::to_string(v[k]);
  return out;
}

}  // namespace

bool betti_consistency(const NumericalProfile& P) {
  return betti(P) == antidiagonal_sums(hw_numbers(P), P.d);
}

std::map<int, int64_t> hh_sums(const NumericalProfile& P) {
  if (!P.hodge) throw InsufficientDataError("profile '" + P.name + "' has no Hodge numbers");
  std::map<int, int64_t> out;
  for (int i = -P.d; i <= P.d; ++i) {
    int64_t s = 0;
    for (int j = 0; j <= P.d; ++j) {
      int k = j - i;
      if (k >= 0 && k <= P.d) s += P.h(j, k);
    }
    out[i] = s;
  }
  return out;
}

MazurOgusResult mazur_ogus(const NumericalProfile& P) {
  MazurOgusResult r;
  if (P.hdr_degenerate && P.torsion_free) {
    bool tf = true;
    for (bool b : *P.torsion_free) tf = tf && b;
    r.degeneration_and_torsion_free = *P.hdr_degenerate && tf;
  }
  if (P.hodge) {
    IntTable h = *P.hodge;
    r.betti_equals_hodge = betti(P) == antidiagonal_sums(h, P.d);
    if (P.dominoes) r.hodge_equals_hw = hw_numbers(P) == h;
  }
  for (const auto& c : {r.degeneration_and_torsion_free, r.betti_equals_hodge, r.hodge_equals_hw}) {
    if (!c) continue;
    if (!r.value) r.value = *c;
    else if (*r.value != *c) r.consistent = false;
  }
  return r;
}

HodgeWittFlags hodge_witt_predicates(const NumericalProfile& P) {
  if (!P.dominoes) throw InsufficientDataError("profile '" + P.name + "' has no domino table");
  HodgeWittFlags f;
  f.hodge_witt = P.dominoes->empty();
  if (P.d <= 3) {
    f.derived_hodge_witt = true;
    for (const auto& [i, t] : derived_dominoes(P)) f.derived_hodge_witt = f.derived_hodge_witt && t == 0;
  } else {
    f.derived_hodge_witt = f.hodge_witt;
  }
  return f;
}

bool InvariantReport::consistent() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

InvariantReport compute_report(const NumericalProfile& P) {
  auto issues = validate_profile(P);
  if (!issues.empty()) {
    std::string msg = "profile '" + P.name + "' is invalid:";
    for (const auto& s : issues) msg += "\n  " + s;
    throw ValidationError(msg);
  }
  const int d = P.d;
  InvariantReport R;
  R.name = P.name;
  R.d = d;
  R.p = P.p;
  R.a = P.a;
  R.crys = P.crys.degrees;
  R.drw = drw_slopes(P);
  R.tr = tr_slopes(P);
  R.betti = betti(P);
  R.height = height(P.crys);
  R.mazur_ogus = mazur_ogus(P);
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    R.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  check("crystalline slope constraints", validate_crys(P.crys).empty());
  bool c3 = true;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) c3 = c3 && R.drw[i][j] == R.drw[d - j][d - i];
  check("dRW Hodge symmetry h^{i,j}_dRW = h^{d-j,d-i}_dRW", c3);

  try {
    R.m = m_numbers(P);
    bool sym = true;
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) sym = sym && (*R.m)[i][j] == (*R.m)[j][i] && (*R.m)[i][j] == (*R.m)[d - i][d - j];
    check("m^{i,j} = m^{j,i} = m^{d-i,d-j}", sym);
  } catch (const DomainError& e) {
    check("m^{i,j} nonnegative integers", false, e.what());
  }

  if (P.dominoes && R.m) {
    IntTable T(size_t(d + 1), std::vector<int64_t>(size_t(d + 1), 0));
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) T[i][j] = P.T(i, j);
    R.T = T;
    R.hw = hw_numbers(P);
    const IntTable& hw = *R.hw;
    bool sym = true;
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) {
        sym = sym && hw[i][j] == hw[d - i][d - j];
        if (d <= 3) sym = sym && hw[i][j] == hw[j][i];
      }
    check("h_W symmetries", sym);
    auto sums = antidiagonal_sums(hw, d);
    check("b_n = sum_{i+j=n} h_W^{i,j}", sums == R.betti,
          "crystalline " + join(R.betti) + " vs h_W " + join(sums));
    if (P.hodge) {
      bool le = true;
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j) le = le && hw[i][j] <= P.h(i, j);
      check("h_W^{i,j} <= h^{i,j}", le);
      R.euler = euler_characteristics(P);
      auto crew = crew_check(P);
      bool all = true;
      std::string bad;
      for (int i = 0; i <= d; ++i)
        if (!crew[size_t(i)]) {
          all = false;
          bad += " i=" + std::to_string(i);
        }
      check("Crew's formula", all, all ? "" : "fails at" + bad);
    } else {
      R.skipped.push_back("h_W <= h and Crew's formula: no Hodge numbers");
    }
    if (d <= 3) {
      R.tcyc = derived_dominoes(P);
      check("T^cyc_{-d} = T^{0,d}", R.tcyc->at(-d) == P.T(0, d));
      R.hw_flags = hodge_witt_predicates(P);
      check("Hodge-Witt iff derived Hodge-Witt", R.hw_flags->equivalent());

      TRComplex tr = assemble_tr(descent_ss(P), d);
      bool same = true;
      for (int n = -d; n <= d; ++n) same = same && tr.tr.at(n).slopes == R.tr.at(n);
      check("h^TR_{n,lambda} = sum_{i-j=n} h^{i,j}_{dRW,lambda}", same);
      check("TR_{-d} = H^d(WO), TR_d = H^0(W Omega^d)",
            tr.tr.at(-d).slopes == R.drw[0][d] && tr.tr.at(d).slopes == R.drw[d][0]);
    } else {
      R.skipped.push_back("derived domino numbers and TR assembly: d > 3");
    }
  } else {
    R.skipped.push_back("Hodge-Witt numbers and domino identities: no domino table");
  }

  if (P.hodge) R.hh = hh_sums(P);
  else R.skipped.push_back("Hochschild sums: no Hodge numbers");

  if (!R.mazur_ogus.value) R.skipped.push_back("Mazur-Ogus: no condition decidable");
  check("Mazur-Ogus conditions agree", R.mazur_ogus.consistent);
  if (!P.charpolys.empty()) {
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), P.p, P.a);
    bool ok = true;
    for (const auto& [deg, c] : P.charpolys) ok = ok && newton_from_charpoly(c, q) == P.H(deg);
    check("charpoly slopes reproduce crystalline slopes", ok);
  }
  return R;
}

// ---- rendering -----------------------------------------------------------

namespace {

std::string tri(const std::optional<bool>& b) { return b ? (*b ? "true" : "false") : "unknown"; }

void table(std::ostringstream& os, const std::string& title, const IntTable& t) {
  os << title << " (row i, column j)\n";
  for (size_t i = 0; i < t.size(); ++i) {
    os << "  i=" << i << ":";
    for (int64_t v : t[i]) os << " " << v;
    os << "\n";
  }
}

nlohmann::json slope_table_json(const SlopeTable& t) {
  nlohmann::json out = nlohmann::json::array();
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < t[i].size(); ++j)
      if (!t[i][j].empty()) out.push_back({{"i", i}, {"j", j}, {"slopes", to_json(t[i][j])}});
  return out;
}

}  // namespace

std::string render_text(const InvariantReport& R) {
  std::ostringstream os;
  os << "profile " << R.name << "  d=" << R.d << " p=" << R.p << " a=" << R.a << "\n";
  os << "crystalline slopes\n";
  for (size_t i = 0; i < R.crys.size(); ++i) os << "  H^" << i << "  " << R.crys[i].to_string() << "\n";
  os << "dRW slopes, lambda in [0,1)\n";
  for (int i = 0; i <= R.d; ++i)
    for (int j = 0; j <= R.d; ++j)
      if (!R.drw[i][j].empty()) os << "  (" << i << "," << j << ")  " << R.drw[i][j].to_string() << "\n";
  os << "TR slopes\n";
  for (const auto& [n, s] : R.tr) os << "  TR_" << n << "  " << s.to_string() << "\n";
  if (R.m) table(os, "Hodge-Newton m", *R.m);
  if (R.T) table(os, "domino numbers T", *R.T);
  if (R.hw) table(os, "Hodge-Witt h_W", *R.hw);
  if (R.tcyc) {
    os << "derived domino numbers T^cyc\n ";
    for (const auto& [i, t] : *R.tcyc) os << " " << i << ":" << t;
    os << "\n";
  }
  os << "betti " << join(R.betti) << "\n";
  if (R.euler) os << "chi(Omega^i) " << join(*R.euler) << "\n";
  if (R.hh) {
    os << "Hochschild sums\n ";
    for (const auto& [i, s] : *R.hh) os << " " << i << ":" << s;
    os << "\n";
  }
  os << "height " << (R.height ? std::to_string(*R.height) : "inf") << "\n";
  const auto& mo = R.mazur_ogus;
  os << "mazur_ogus " << tri(mo.value) << " (degeneration+torsion-free " << tri(mo.degeneration_and_torsion_free)
     << ", betti=hodge " << tri(mo.betti_equals_hodge) << ", h=h_W " << tri(mo.hodge_equals_hw) << ")\n";
  if (R.hw_flags) {
    os << "hodge_witt " << (R.hw_flags->hodge_witt ? "true" : "false") << "\n";
    os << "derived_hodge_witt " << (R.hw_flags->derived_hodge_witt ? "true" : "false") << "\n";
  }
  os << "identities\n";
  for (const auto& c : R.checks) {
    os << "  [" << (c.ok ? "ok" : "FAIL") << "] " << c.name;
    if (!c.ok && !c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  for (const auto& s : R.skipped) os << "  [skip] " << s << "\n";
  os << (R.consistent() ? "consistent" : "INCONSISTENT") << "\n";
  return os.str();
}

nlohmann::json to_json(const InvariantReport& R) {
  nlohmann::json j;
  j["name"] = R.name;
  j["d"] = R.d;
  j["p"] = R.p;
  j["a"] = R.a;
  nlohmann::json crys = nlohmann::json::array();
  for (size_t i = 0; i < R.crys.size(); ++i) crys.push_back({{"deg", i}, {"slopes", to_json(R.crys[i])}});
  j["crys"] = crys;
  j["drw"] = slope_table_json(R.drw);
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& [n, s] : R.tr) tr.push_back({{"n", n}, {"slopes", to_json(s)}});
  j["tr"] = tr;
  auto opt = [](const auto& o) { return o ? nlohmann::json(*o) : nlohmann::json(nullptr); };
  j["m"] = opt(R.m);
  j["hw"] = opt(R.hw);
  j["T"] = opt(R.T);
  if (R.tcyc) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [i, v] : *R.tcyc) t[std::to_string(i)] = v;
    j["tcyc"] = t;
  } else {
    j["tcyc"] = nullptr;
  }
  j["betti"] = R.betti;
  j["euler"] = opt(R.euler);
  if (R.hh) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [i, v] : *R.hh) t[std::to_string(i)] = v;
    j["hh"] = t;
  } else {
    j["hh"] = nullptr;
  }
  j["height"] = R.height ? nlohmann::json(*R.height) : nlohmann::json("inf");
  const auto& mo = R.mazur_ogus;
  j["mazur_ogus"] = {{"value", opt(mo.value)},
                     {"degeneration_and_torsion_free", opt(mo.degeneration_and_torsion_free)},
                     {"betti_equals_hodge", opt(mo.betti_equals_hodge)},
                     {"hodge_equals_hw", opt(mo.hodge_equals_hw)},
                     {"consistent", mo.consistent}};
  if (R.hw_flags)
    j["hodge_witt"] = {{"hodge_witt", R.hw_flags->hodge_witt}, {"derived_hodge_witt", R.hw_flags->derived_hodge_witt}};
  else
    j["hodge_witt"] = nullptr;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : R.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  j["checks"] = checks;
  j["skipped"] = R.skipped;
  j["consistent"] = R.consistent();
  return j;
}

}  // namespace derinv
