#include "derinv/profile.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "derinv/errors.hpp"

namespace derinv {

TwistInfo make_twist(uint32_t p, int64_t ord) {
  if (ord < 1) throw DomainError("ord(alpha) must be positive, got " + std::to_string(ord));
  int64_t x = ord;
  while (x % p == 0) x /= p;
  if (x != 1) {
    throw DomainError("ord(alpha) = " + std::to_string(ord) + " is not a power of p = " + std::to_string(p));
  }
  return TwistInfo{ord};
}

int64_t NumericalProfile::T(int i, int j) const {
  if (!dominoes) throw InsufficientDataError("profile '" + name + "' has no domino table");
  const DominoSpec* s = domino_at(i, j);
  return s ? s->dim() : 0;
}

const DominoSpec* NumericalProfile::domino_at(int i, int j) const {
  if (!dominoes) return nullptr;
  for (const auto& s : *dominoes) {
    if (s.i == i && s.j == j) return &s;
  }
  return nullptr;
}

bool domino_position_allowed(int d, int i, int j) {
  return i >= 0 && j <= d && j >= 2 && i <= d - 2;
}

namespace {

std::string pos(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

bool descent_arrow_allowed(int d, int s, int t) {
  if (d != 3) return false;
  static const std::set<std::pair<int, int>> allowed = {{0, 1}, {1, 1}, {1, 0}, {2, 0}};
  return allowed.count({s, t}) > 0;
}

}  // namespace

std::vector<std::string> validate_profile(const NumericalProfile& P) {
  std::vector<std::string> out;
  const int d = P.d;
  if (d < 0) return {"dimension must be nonnegative"};
  if (P.p < 2 || !is_prime(P.p)) out.push_back("p = " + std::to_string(P.p) + " is not prime");
  if (P.a < 1) out.push_back("field degree a must be >= 1");
  if (P.crys.d != d) out.push_back("crystalline data dimension differs from d");
  if (P.crys.degrees.size() != size_t(2 * d + 1)) {
    out.push_back("crystalline data must list degrees 0.." + std::to_string(2 * d));
    return out;
  }
  for (const auto& v : validate_crys(P.crys)) out.push_back(format_violation(v));

  if (P.hodge) {
    const auto& H = *P.hodge;
    bool shape = H.size() == size_t(d + 1);
    for (const auto& row : H) shape = shape && row.size() == size_t(d + 1);
    if (!shape) {
      out.push_back("hodge table must be " + std::to_string(d + 1) + "x" + std::to_string(d + 1));
    } else {
      for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j)
          if (H[i][j] < 0) out.push_back("negative Hodge number at " + pos(i, j));
    }
  }
  if (P.torsion_free && P.torsion_free->size() != size_t(2 * d + 1))
    out.push_back("torsion_free must have one flag per degree 0.." + std::to_string(2 * d));

  if (P.dominoes) {
    std::set<std::pair<int, int>> seen;
    for (const auto& s : *P.dominoes) {
      if (!seen.insert({s.i, s.j}).second) out.push_back("domino " + pos(s.i, s.j) + " listed twice");
      if (s.empty()) out.push_back("domino " + pos(s.i, s.j) + " has no constituents; omit zero dominoes");
      for (int64_t c : s.constituents)
        if (c < 1) out.push_back("domino " + pos(s.i, s.j) + " has constituent sigma < 1");
      if (!domino_position_allowed(d, s.i, s.j))
        out.push_back("domino at forbidden position " + pos(s.i, s.j) + " (need j >= 2 and i <= d-2)");
    }
    for (const auto& s : *P.dominoes) {
      int di = d - s.i - 2, dj = d - s.j + 2;
      if (P.T(di, dj) != s.dim())
        out.push_back("domino duality fails: T" + pos(s.i, s.j) + " = " + std::to_string(s.dim()) + " but T" +
                      pos(di, dj) + " = " + std::to_string(P.T(di, dj)));
    }
  }

  if (P.twist) {
    try {
      make_twist(P.p, P.twist->ord_alpha);
    } catch (const DomainError& e) {
      out.push_back(e.what());
    }
    if (P.twist->twisted() && d != 2) out.push_back("twists are supported for surfaces only");
  }

  for (const auto& [s, t] : P.descent_differentials) {
    if (!descent_arrow_allowed(d, s, t))
      out.push_back("descent differential declared at " + pos(s, t) + " outside the allowed pattern");
  }

  if (!P.charpolys.empty() && P.p >= 2 && is_prime(P.p)) {
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), P.p, P.a);
    for (const auto& [deg, coeffs] : P.charpolys) {
      if (deg < 0 || deg > 2 * d) {
        out.push_back("charpoly for nonexistent degree " + std::to_string(deg));
        continue;
      }
      try {
        SlopeMultiset s = newton_from_charpoly(coeffs, q);
        if (!(s == P.H(deg)))
          out.push_back("charpoly slopes " + s.to_string() + " differ from H^" + std::to_string(deg) + " slopes " +
                        P.H(deg).to_string());
      } catch (const Error& e) {
        out.push_back("charpoly in degree " + std::to_string(deg) + ": " + e.what());
      }
    }
  }
  if (P.albanese_dim && *P.albanese_dim < 0) out.push_back("albanese_dim must be nonnegative");
  return out;
}

// ---- JSON -----------------------------------------------------------------

namespace {

nlohmann::json mpz_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class json_mpz(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<int64_t>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ParseError("bad integer '" + j.get<std::string>() + "'");
    return z;
  }
  throw ParseError("charpoly coefficient must be an integer or decimal string");
}

template <class T>
T req(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("profile is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("profile field '") + key + "': " + e.what());
  }
}

}  // namespace

nlohmann::json to_json(const NumericalProfile& P) {
  nlohmann::json j;
  j["name"] = P.name;
  j["p"] = P.p;
  j["a"] = P.a;
  j["d"] = P.d;
  if (P.hodge) j["hodge"] = *P.hodge;
  nlohmann::json crys = nlohmann::json::array();
  for (int deg = 0; deg < int(P.crys.degrees.size()); ++deg)
    crys.push_back({{"deg", deg}, {"slopes", to_json(P.crys.degrees[deg])}});
  j["crys"] = crys;
  if (P.crys.betti) j["betti"] = *P.crys.betti;
  if (P.torsion_free) j["torsion_free"] = *P.torsion_free;
  if (P.hdr_degenerate) j["hdr_degenerate"] = *P.hdr_degenerate;
  if (P.dominoes) {
    nlohmann::json ds = nlohmann::json::array();
    for (const auto& s : *P.dominoes) ds.push_back({{"i", s.i}, {"j", s.j}, {"constituents", s.constituents}});
    j["dominoes"] = ds;
  }
  if (P.twist) j["twist"] = {{"ord", P.twist->ord_alpha}};
  if (!P.charpolys.empty()) {
    nlohmann::json cp = nlohmann::json::object();
    for (const auto& [deg, c] : P.charpolys) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& z : c) arr.push_back(mpz_json(z));
      cp[std::to_string(deg)] = arr;
    }
    j["charpolys"] = cp;
  }
  if (P.albanese_dim) j["albanese_dim"] = *P.albanese_dim;
  if (P.calabi_yau) j["calabi_yau"] = true;
  if (!P.descent_differentials.empty()) {
    nlohmann::json dd = nlohmann::json::array();
    for (const auto& [s, t] : P.descent_differentials) dd.push_back({s, t});
    j["descent_differentials"] = dd;
  }
  if (!P.provenance.empty()) j["provenance"] = P.provenance;
  return j;
}

NumericalProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("profile must be a JSON object");
  static const std::set<std::string> known = {"name",         "p",          "a",          "d",
                                              "hodge",        "crys",       "betti",      "torsion_free",
                                              "hdr_degenerate", "dominoes", "twist",      "charpolys",
                                              "albanese_dim", "calabi_yau", "descent_differentials",
                                              "provenance"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ParseError("unknown profile field '" + k + "'");

  NumericalProfile P;
  P.name = req<std::string>(j, "name");
  P.p = req<uint32_t>(j, "p");
  P.a = j.contains("a") ? req<uint32_t>(j, "a") : 1;
  P.d = req<int>(j, "d");
  if (P.d < 0 || P.d > 16) throw ParseError("dimension out of range");
  try {
    if (j.contains("hodge")) P.hodge = j.at("hodge").get<IntTable>();
    P.crys.d = P.d;
    P.crys.degrees.assign(size_t(2 * P.d + 1), SlopeMultiset{});
    std::set<int> degs;
    for (const auto& e : j.at("crys")) {
      int deg = e.at("deg").get<int>();
      if (deg < 0 || deg > 2 * P.d) throw ParseError("crys degree " + std::to_string(deg) + " out of range");
      if (!degs.insert(deg).second) throw ParseError("crys degree " + std::to_string(deg) + " listed twice");
      P.crys.degrees[size_t(deg)] = slopes_from_json(e.at("slopes"));
    }
    if (j.contains("betti")) P.crys.betti = j.at("betti").get<std::vector<int64_t>>();
    if (j.contains("torsion_free")) P.torsion_free = j.at("torsion_free").get<std::vector<bool>>();
    if (j.contains("hdr_degenerate")) P.hdr_degenerate = j.at("hdr_degenerate").get<bool>();
    if (j.contains("dominoes")) {
      P.dominoes.emplace();
      for (const auto& e : j.at("dominoes")) {
        DominoSpec s;
        s.i = e.at("i").get<int>();
        s.j = e.at("j").get<int>();
        s.constituents = e.at("constituents").get<std::vector<int64_t>>();
        P.dominoes->push_back(std::move(s));
      }
    }
    if (j.contains("twist")) P.twist = TwistInfo{j.at("twist").at("ord").get<int64_t>()};
    if (j.contains("charpolys")) {
      for (const auto& [k, v] : j.at("charpolys").items()) {
        std::vector<mpz_class> c;
        for (const auto& z : v) c.push_back(json_mpz(z));
        int deg;
        try {
          deg = std::stoi(k);
        } catch (const std::logic_error&) {
          throw ParseError("charpoly key '" + k + "' is not a degree");
        }
        P.charpolys[deg] = std::move(c);
      }
    }
    if (j.contains("albanese_dim")) P.albanese_dim = j.at("albanese_dim").get<int64_t>();
    if (j.contains("calabi_yau")) P.calabi_yau = j.at("calabi_yau").get<bool>();
    if (j.contains("descent_differentials")) {
      for (const auto& e : j.at("descent_differentials")) P.descent_differentials.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    if (j.contains("provenance")) P.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("profile schema: ") + e.what());
  }
  return P;
}

NumericalProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return profile_from_json(j);
}

void save_profile(const NumericalProfile& P, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << to_json(P).dump(2) << "\n";
}

}  // namespace derinv
