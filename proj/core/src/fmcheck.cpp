#include "derinv/fmcheck.hpp"

#include <functional>
#include <sstream>
#include <tuple>

#include "derinv/errors.hpp"
#include "derinv/invariants.hpp"
#include "derinv/specseq.hpp"

namespace derinv {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Match: return "match";
    case Verdict::Mismatch: return "mismatch";
    case Verdict::InsufficientData: return "insufficient-data";
  }
  return "?";
}

bool ObstructionReport::obstruction() const { return first_mismatch() != nullptr; }

bool ObstructionReport::all_insufficient() const {
  for (const auto& c : checks)
    if (c.applicable && c.verdict != Verdict::InsufficientData) return false;
  return true;
}

const Check* ObstructionReport::first_mismatch() const {
  for (const auto& c : checks)
    if (c.applicable && c.verdict == Verdict::Mismatch) return &c;
  return nullptr;
}

const Check* ObstructionReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

int ObstructionReport::exit_code() const {
  if (obstruction()) return 2;
  if (all_insufficient()) return 3;
  return 0;
}

namespace {

std::string opt_height(const std::optional<int64_t>& h) { return h ? std::to_string(*h) : "inf"; }

template <class T>
void decide(Check& c, const T& a, const T& b, const std::string& what_a, const std::string& what_b) {
  if (a == b) {
    c.verdict = Verdict::Match;
  } else {
    c.verdict = Verdict::Mismatch;
    c.details = what_a + " vs " + what_b;
  }
}

std::string slopes_str(const std::map<int, SlopeMultiset>& m) {
  std::string out;
  for (const auto& [k, s] : m) out += (out.empty() ? "" : " ") + std::to_string(k) + ":" + s.to_string();
  return out;
}

std::string ints(const std::vector<int64_t>& v) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
  return "(" + out + ")";
}

std::string table_str(const IntTable& t) {
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) out += (i ? "/" : "") + ints(t[i]);
  return out;
}

std::string first_table_diff(const IntTable& a, const IntTable& b, const std::string& sym) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != b[i][j])
        return sym + "^{" + std::to_string(i) + "," + std::to_string(j) + "} = " + std::to_string(a[i][j]) + " vs " +
               std::to_string(b[i][j]);
  return {};
}

bool ss_k3_shaped(const NumericalProfile& P) {
  return P.d == 2 && P.crys.degrees.size() == 5 && P.H(2).rank() == 22 && !height(P.crys) && P.dominoes &&
         P.domino_at(0, 2) != nullptr;
}

int64_t k_dimension(const NumericalProfile& P) {
  int64_t s = 0;
  for (int64_t c : P.domino_at(0, 2)->constituents) s += c;
  return s + (P.twist && P.twist->twisted() ? 1 : 0);
}

void require(Check& c, bool present_a, bool present_b, const std::string& field) {
  if (!present_a) c.missing.push_back(field + " (first profile)");
  if (!present_b) c.missing.push_back(field + " (second profile)");
}

}  // namespace

ObstructionReport compare(const NumericalProfile& A, const NumericalProfile& B) {
  for (const NumericalProfile* P : {&A, &B}) {
    auto issues = validate_profile(*P);
    if (!issues.empty()) {
      std::string msg = "profile '" + P->name + "' is invalid:";
      for (const auto& s : issues) msg += "\n  " + s;
      throw ValidationError(msg);
    }
  }
  ObstructionReport R;
  R.a = A.name;
  R.b = B.name;
  const int d = A.d;

  Check gate;
  gate.id = "dim";
  gate.name = "ground field and dimension";
  gate.theorem = "derived equivalent varieties share their base field and dimension";
  gate.applicable = true;
  gate.reason = "always";
  decide(gate, std::tuple(A.p, A.a, A.d), std::tuple(B.p, B.a, B.d),
         "p=" + std::to_string(A.p) + " a=" + std::to_string(A.a) + " d=" + std::to_string(A.d),
         "p=" + std::to_string(B.p) + " a=" + std::to_string(B.a) + " d=" + std::to_string(B.d));
  R.checks.push_back(gate);
  const bool comparable = gate.verdict == Verdict::Match;

  auto add = [&](std::string id, std::string name, std::string theorem, bool applicable, std::string reason,
                 const std::function<void(Check&)>& body) {
    Check c;
    c.id = std::move(id);
    c.name = std::move(name);
    c.theorem = std::move(theorem);
    c.applicable = comparable && applicable;
    c.reason = comparable ? std::move(reason) : "ground field or dimension differ";
    if (c.applicable) {
      try {
        body(c);
      } catch (const InsufficientDataError& e) {
        c.verdict = Verdict::InsufficientData;
        c.details = e.what();
      }
      if (!c.missing.empty()) c.verdict = Verdict::InsufficientData;
    }
    R.checks.push_back(std::move(c));
  };
  const bool small = d <= 3;
  const std::string small_reason = small ? "d <= 3" : "needs d <= 3";
  const bool both_hodge = A.hodge && B.hodge;
  const bool both_dominoes = A.dominoes && B.dominoes;

  add("i", "Hochschild antidiagonal sums", "sum_j h^{j,j-i} is a derived invariant", A.p == 0 || A.p >= uint32_t(d),
      A.p >= uint32_t(d) ? "p >= d" : "needs p = 0 or p >= d", [&](Check& c) {
        require(c, bool(A.hodge), bool(B.hodge), "hodge");
        if (!both_hodge) return;
        auto a = hh_sums(A), b = hh_sums(B);
        decide(c, a, b, "", "");
        if (c.verdict == Verdict::Mismatch) {
          for (const auto& [i, v] : a)
            if (v != b.at(i)) {
              c.details = "HH_" + std::to_string(i) + ": " + std::to_string(v) + " vs " + std::to_string(b.at(i));
              break;
            }
        }
      });

  add("ii", "TR slope numbers", "h^TR_{n,lambda} are derived invariants", true, "all d", [&](Check& c) {
    auto a = tr_slopes(A), b = tr_slopes(B);
    decide(c, a, b, slopes_str(a), slopes_str(b));
  });

  add("iii", "dRW and crystalline slope numbers", "h^{i,j}_{dRW,lambda} and h^i_{crys,lambda} are derived invariants",
      small, small_reason, [&](Check& c) {
        auto a = drw_slopes(A), b = drw_slopes(B);
        if (a == b && A.crys.degrees == B.crys.degrees) {
          c.verdict = Verdict::Match;
          return;
        }
        c.verdict = Verdict::Mismatch;
        for (int i = 0; i <= 2 * d; ++i)
          if (!(A.H(i) == B.H(i))) {
            c.details = "H^" + std::to_string(i) + " slopes " + A.H(i).to_string() + " vs " + B.H(i).to_string();
            return;
          }
      });

  add("iv", "Betti numbers", "b_n are derived invariants", small, small_reason,
      [&](Check& c) { decide(c, betti(A), betti(B), ints(betti(A)), ints(betti(B))); });

  add("v", "Frobenius characteristic polynomials", "zeta functions of derived equivalent varieties agree", small,
      small_reason, [&](Check& c) {
        std::vector<int> common;
        for (const auto& [deg, cp] : A.charpolys)
          if (B.charpolys.count(deg)) common.push_back(deg);
        if (common.empty()) {
          c.missing.push_back("charpolys in a common degree");
          return;
        }
        c.verdict = Verdict::Match;
        for (int deg : common)
          if (A.charpolys.at(deg) != B.charpolys.at(deg)) {
            c.verdict = Verdict::Mismatch;
            c.details = "degree " + std::to_string(deg) + " differs";
            return;
          }
        c.details = "compared degrees";
        for (int deg : common) c.details += " " + std::to_string(deg);
      });

  auto T_table = [&](const NumericalProfile& P) {
    IntTable t(size_t(d + 1), std::vector<int64_t>(size_t(d + 1), 0));
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) t[i][j] = P.T(i, j);
    return t;
  };

  add("vi", "domino numbers", "T^{i,j} are derived invariants", small, small_reason, [&](Check& c) {
    require(c, bool(A.dominoes), bool(B.dominoes), "dominoes");
    if (!both_dominoes) return;
    auto a = T_table(A), b = T_table(B);
    decide(c, a, b, "", "");
    if (c.verdict == Verdict::Mismatch) c.details = first_table_diff(a, b, "T");
  });

  add("vii", "derived domino numbers", "T^cyc_i are derived invariants", small, small_reason, [&](Check& c) {
    require(c, bool(A.dominoes), bool(B.dominoes), "dominoes");
    if (!both_dominoes) return;
    auto a = derived_dominoes(A), b = derived_dominoes(B);
    decide(c, a, b, "", "");
    if (c.verdict == Verdict::Mismatch) {
      for (const auto& [i, v] : a)
        if (v != b.at(i)) {
          c.details = "T^cyc_" + std::to_string(i) + " = " + std::to_string(v) + " vs " + std::to_string(b.at(i));
          break;
        }
    }
  });

  add("viii", "Hodge-Witt numbers", "h^{i,j}_W are derived invariants", small, small_reason, [&](Check& c) {
    require(c, bool(A.dominoes), bool(B.dominoes), "dominoes");
    if (!both_dominoes) return;
    auto a = hw_numbers(A), b = hw_numbers(B);
    decide(c, a, b, "", "");
    if (c.verdict == Verdict::Mismatch) c.details = first_table_diff(a, b, "h_W");
  });

  const bool both_cy = A.calabi_yau && B.calabi_yau;
  add("ix", "Artin-Mazur height", "the height of a Calabi-Yau variety is a derived invariant", both_cy,
      both_cy ? "both Calabi-Yau" : "needs both profiles flagged Calabi-Yau", [&](Check& c) {
        auto a = height(A.crys), b = height(B.crys);
        decide(c, a, b, opt_height(a), opt_height(b));
      });

  const bool both_ss = ss_k3_shaped(A) && ss_k3_shaped(B);
  add("x", "Artin invariant / K(X,alpha) dimension",
      "sigma_0 of a supersingular K3, twisted or not, is a derived invariant", both_ss,
      both_ss ? "both supersingular K3" : "needs two supersingular K3 profiles", [&](Check& c) {
        int64_t a = k_dimension(A), b = k_dimension(B);
        decide(c, a, b, std::to_string(a), std::to_string(b));
      });

  add("xi", "Hodge numbers", "surfaces: all h^{i,j} agree; threefolds: chi(Omega^i) agree, and all h^{i,j} if Mazur-Ogus with p >= 3",
      d <= 3, d <= 2 ? "d <= 2: full table" : (d == 3 ? "d = 3" : "needs d <= 3"), [&](Check& c) {
        require(c, bool(A.hodge), bool(B.hodge), "hodge");
        if (!both_hodge) return;
        if (d <= 2) {
          decide(c, *A.hodge, *B.hodge, table_str(*A.hodge), table_str(*B.hodge));
          return;
        }
        auto ea = euler_characteristics(A), eb = euler_characteristics(B);
        decide(c, ea, eb, "chi " + ints(ea), "chi " + ints(eb));
        if (c.verdict == Verdict::Mismatch) return;
        auto ma = mazur_ogus(A), mb = mazur_ogus(B);
        bool full = ma.value.value_or(false) && mb.value.value_or(false) && A.p >= 3;
        c.reason = full ? "d = 3, Mazur-Ogus, p >= 3: full table" : "d = 3: chi(Omega^i) only";
        if (full) decide(c, *A.hodge, *B.hodge, table_str(*A.hodge), table_str(*B.hodge));
      });

  add("xii", "Mazur-Ogus and Hodge-Witt flags", "both properties are preserved by derived equivalence", small,
      small_reason, [&](Check& c) {
        auto ma = mazur_ogus(A), mb = mazur_ogus(B);
        bool decided = false;
        std::string diff;
        if (ma.value && mb.value) {
          decided = true;
          if (*ma.value != *mb.value)
            diff = std::string("Mazur-Ogus ") + (*ma.value ? "true" : "false") + " vs " + (*mb.value ? "true" : "false");
        } else {
          require(c, bool(ma.value), bool(mb.value), "Mazur-Ogus data");
        }
        if (both_dominoes) {
          decided = true;
          auto ha = hodge_witt_predicates(A), hb = hodge_witt_predicates(B);
          if (ha.hodge_witt != hb.hodge_witt && diff.empty())
            diff = std::string("Hodge-Witt ") + (ha.hodge_witt ? "true" : "false") + " vs " +
                   (hb.hodge_witt ? "true" : "false");
        } else {
          require(c, bool(A.dominoes), bool(B.dominoes), "dominoes");
        }
        if (!diff.empty()) {
          c.missing.clear();
          c.verdict = Verdict::Mismatch;
          c.details = diff;
        } else if (decided) {
          c.verdict = Verdict::Match;
          if (!c.missing.empty()) c.details = "partially decided";
          c.missing.clear();
        }
      });
  return R;
}

std::string explain(const ObstructionReport& R) {
  std::ostringstream os;
  os << "compare " << R.a << " vs " << R.b << "\n";
  for (const auto& c : R.checks) {
    std::string tag = !c.applicable ? "n/a" : c.verdict == Verdict::Mismatch ? "MISMATCH" : to_string(c.verdict);
    os << "  [" << tag << "] (" << c.id << ") " << c.name << "\n";
    os << "      theorem: " << c.theorem << "\n";
    os << "      hypotheses: " << c.reason << "\n";
    if (!c.details.empty()) os << "      details: " << c.details << "\n";
    for (const auto& m : c.missing) os << "      missing: " << m << "\n";
  }
  if (const Check* bad = R.first_mismatch()) {
    os << "verdict: obstruction found, first at (" << bad->id << ") " << bad->name << "\n";
  } else if (R.all_insufficient()) {
    os << "verdict: insufficient data for every applicable check\n";
  } else {
    os << "verdict: no obstruction from implemented invariants\n";
    os << "note: matching invariants do not prove a derived equivalence\n";
  }
  os << "note: module-level isomorphism of Dieudonne data is not tested, only its numerical shadow\n";
  return os.str();
}

nlohmann::json to_json(const ObstructionReport& R) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : R.checks)
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"theorem", c.theorem},
                      {"applicable", c.applicable},
                      {"reason", c.reason},
                      {"verdict", to_string(c.verdict)},
                      {"details", c.details},
                      {"missing", c.missing}});
  return {{"a", R.a},
          {"b", R.b},
          {"checks", checks},
          {"obstruction", R.obstruction()},
          {"all_insufficient", R.all_insufficient()},
          {"exit_code", R.exit_code()}};
}

}  // namespace derinv
