#include "derinv/specseq.hpp"

#include <algorithm>
#include <sstream>

#include "derinv/errors.hpp"
#include "derinv/invariants.hpp"

namespace derinv {

std::string to_string(SSKind k) {
  switch (k) {
    case SSKind::Slope: return "slope";
    case SSKind::Descent: return "descent";
    case SSKind::Tate: return "tate";
  }
  return "?";
}

std::pair<int, int> SSPage::bidegree() const {
  switch (kind) {
    case SSKind::Slope: return {r, 1 - r};
    case SSKind::Descent: return {r - 1, r};
    case SSKind::Tate: return {r, r - 1};
  }
  return {0, 0};
}

const SSCell* SSPage::at(int s, int t) const {
  auto it = entries.find({s, t});
  return it == entries.end() ? nullptr : &it->second;
}

namespace {

constexpr const char* kDominoTarget = "<dom";

std::string pos(int s, int t) { return "(" + std::to_string(s) + "," + std::to_string(t) + ")"; }

std::string constituents_str(const DominoSpec& D) {
  std::string out = "[";
  for (size_t k = 0; k < D.constituents.size(); ++k) out += (k ? "," : "") + std::to_string(D.constituents[k]);
  return out + "]";
}

void put(SSPage& page, int s, int t, SSCell cell) {
  if (!cell.zero()) page.entries[{s, t}] = std::move(cell);
}

SSCell& cell_ref(SSPage& page, int s, int t) { return page.entries[{s, t}]; }

void add_marker(SSCell& c, const std::string& m) {
  if (std::find(c.markers.begin(), c.markers.end(), m) == c.markers.end()) c.markers.push_back(m);
}

int64_t sum_sigma(const DominoSpec& D) {
  int64_t s = 0;
  for (int64_t c : D.constituents) s += c;
  return s;
}

// E_1 of the slope sequence, which is also E_2 of the descent sequence.
SSPage hodge_witt_page(const NumericalProfile& P, SSKind kind, int r) {
  if (!P.dominoes) throw InsufficientDataError("profile '" + P.name + "' has no domino table");
  for (const auto& D : *P.dominoes) {
    if (!domino_position_allowed(P.d, D.i, D.j))
      throw ValidationError("domino declared at forbidden position " + pos(D.i, D.j));
  }
  SSPage page;
  page.kind = kind;
  page.r = r;
  page.s_lo = page.t_lo = 0;
  page.s_hi = page.t_hi = P.d;
  SlopeTable drw = drw_slopes(P);
  for (int s = 0; s <= P.d; ++s) {
    for (int t = 0; t <= P.d; ++t) {
      SSCell c;
      c.slopes = drw[s][t];
      if (const DominoSpec* D = P.domino_at(s, t)) c.domino = *D;
      put(page, s, t, std::move(c));
    }
  }
  for (const auto& D : *P.dominoes) add_marker(cell_ref(page, D.i + 1, D.j), kDominoTarget);
  return page;
}

}  // namespace

std::vector<SSPage> slope_ss(const NumericalProfile& P) {
  SSPage e1 = hodge_witt_page(P, SSKind::Slope, 1);
  for (const auto& D : *P.dominoes) {
    e1.differentials.push_back({D.i, D.j, D.i + 1, D.j,
                                "domino T=" + std::to_string(D.dim()) + " U" + constituents_str(D) +
                                    ", rationally zero"});
  }
  if (e1.differentials.empty()) {
    e1.infinity = true;
    return {e1};
  }
  // E_2 = E_inf: the kernel of each domino differential is a finite k-space of
  // dimension sum(sigma), the cokernel vanishes.
  SSPage e2 = e1;
  e2.r = 2;
  e2.differentials.clear();
  e2.infinity = true;
  for (const auto& D : *P.dominoes) {
    SSCell& src = cell_ref(e2, D.i, D.j);
    src.domino = {};
    src.torsion_length += sum_sigma(D);
    add_marker(src, "ker d1");
    SSCell& dst = cell_ref(e2, D.i + 1, D.j);
    dst.markers.erase(std::remove(dst.markers.begin(), dst.markers.end(), std::string(kDominoTarget)),
                      dst.markers.end());
    if (dst.zero()) e2.entries.erase({D.i + 1, D.j});
  }
  return {e1, e2};
}

std::vector<SSPage> descent_ss(const NumericalProfile& P, const TwistInfo& twist) {
  if (P.d > 3) throw UnsupportedError("descent spectral sequence tables exist for d <= 3 only");
  make_twist(P.p, twist.ord_alpha);
  if (twist.twisted() && P.d != 2) throw UnsupportedError("twisted descent spectral sequence needs a surface");
  for (const auto& [s, t] : P.descent_differentials) {
    bool ok = P.d == 3 && ((s == 0 && t == 1) || (s == 1 && t == 1) || (s == 1 && t == 0) || (s == 2 && t == 0));
    if (!ok) throw ValidationError("descent differential at " + pos(s, t) + " is outside the allowed pattern");
  }

  SSPage e2 = hodge_witt_page(P, SSKind::Descent, 2);
  auto [ds, dt] = e2.bidegree();
  for (const auto& [s, t] : P.descent_differentials)
    e2.differentials.push_back({s, t, s + ds, t + dt, "torsion only, rationally zero"});
  if (twist.twisted())
    e2.differentials.push_back({0, 0, 1, 2, "dlog(alpha), kernel ord(alpha)W, rationally zero"});
  if (e2.differentials.empty()) {
    e2.infinity = true;
    return {e2};
  }

  SSPage e3 = e2;
  e3.r = 3;
  e3.differentials.clear();
  e3.infinity = true;
  for (const auto& [s, t] : P.descent_differentials) {
    add_marker(cell_ref(e3, s, t), "ker d2");
    add_marker(cell_ref(e3, s + ds, t + dt), "coker d2");
  }
  if (twist.twisted()) {
    add_marker(cell_ref(e3, 0, 0), "ord(alpha)W");
    add_marker(cell_ref(e3, 1, 2), "/dlog(alpha)");
  }
  return {e2, e3};
}

int degenerates_at(const std::vector<SSPage>& pages) {
  if (pages.empty() || !pages.back().infinity) throw DomainError("no E_inf page");
  return pages.back().r;
}

TRComplex assemble_tr(const std::vector<SSPage>& pages, int d, const TwistInfo& twist) {
  if (pages.empty() || !pages.back().infinity) throw DomainError("assemble_tr needs an E_inf page");
  const SSPage& inf = pages.back();
  if (inf.kind != SSKind::Descent) throw DomainError("assemble_tr needs descent pages");
  TRComplex out;
  out.d = d;
  out.twist = twist;
  out.tr.lo = -d;
  out.tr.entries.resize(size_t(2 * d + 1));
  for (int i = -d; i <= d; ++i) {
    GradedEntry& e = out.tr.entries[size_t(i + d)];
    e.outgoing.i = i;
    std::vector<TRPiece> pieces;
    for (int t = d; t >= 0; --t) {
      int s = i + t;
      const SSCell* c = inf.at(s, t);
      if (!c) continue;
      e.slopes += c->slopes;
      e.torsion_length += c->torsion_length;
      for (int64_t sigma : c->domino.constituents) e.outgoing.constituents.push_back(sigma);
      pieces.push_back({t, *c});
    }
    e.outgoing_nonzero = !e.outgoing.empty();
    out.filtration[i] = std::move(pieces);
  }
  if (!out.tr.entries.empty()) {
    auto& top = out.tr.entries.back();
    if (top.outgoing_nonzero) throw DomainError("domino leaves the top degree of TR");
  }
  return out;
}

std::map<int, int64_t> derived_dominoes(const NumericalProfile& P) {
  if (P.d > 3) throw UnsupportedError("derived domino numbers need d <= 3");
  std::map<int, int64_t> out;
  for (int i = -P.d; i <= P.d; ++i) {
    int64_t sum = 0;
    for (int j = 0; j <= P.d; ++j) {
      if (i + j < 0 || i + j > P.d) continue;
      sum += P.T(i + j, j);
    }
    out[i] = sum;
  }
  if (out[-P.d] != P.T(0, P.d)) throw DomainError("T^cyc_{-d} differs from T^{0,d}");
  return out;
}

TPReport tate_ss_tp(const TRComplex& tr, int n_lo, int n_hi) {
  TPReport R;
  R.d = tr.d;
  const int d = tr.d;
  auto entry = [&](int m) -> const GradedEntry* {
    if (m < -d || m > d) return nullptr;
    return &tr.tr.at(m);
  };

  // Column s of the Tate E_2 page holds TR_t twisted so that TP_{t-s} picks
  // up slopes shifted by s/2.
  for (int n = n_lo; n <= n_hi; ++n) {
    SlopeMultiset s;
    for (int m = -d; m <= d; ++m) {
      if ((m - n) % 2 != 0) continue;
      s += shift(entry(m)->slopes, Rational((m - n) / 2));
    }
    R.tp[n] = s;
  }
  R.odd_vanishes = true;
  for (const auto& [n, s] : R.tp)
    if (n % 2 != 0 && !s.empty()) R.odd_vanishes = false;

  SSPage e2;
  e2.kind = SSKind::Tate;
  e2.r = 2;
  e2.s_lo = -4;
  e2.s_hi = 4;
  e2.t_lo = -d;
  e2.t_hi = d;
  for (int s = e2.s_lo; s <= e2.s_hi; s += 1) {
    if (s % 2 != 0) continue;
    for (int t = -d; t <= d; ++t) {
      const GradedEntry* e = entry(t);
      SSCell c;
      c.slopes = shift(e->slopes, Rational(s / 2));
      c.torsion_length = e->torsion_length;
      c.domino = e->outgoing;
      if (t > -d && entry(t - 1)->outgoing_nonzero) c.markers.push_back(kDominoTarget);
      if (tr.twist.twisted() && d == 2 && t == -1) c.markers.push_back("/dlog(alpha)");
      put(e2, s, t, std::move(c));
    }
  }
  auto [bs, bt] = e2.bidegree();
  for (int t = -d; t < d; ++t) {
    if (!entry(t)->outgoing_nonzero) continue;
    for (int s = e2.s_lo; s + bs <= e2.s_hi; s += 2)
      e2.differentials.push_back({s, t, s + bs, t + bt, "onto the torsion of TR_" + std::to_string(t + 1)});
  }

  if (d == 2) {
    const GradedEntry* bottom = entry(-2);
    if (bottom->outgoing_nonzero) {
      R.k_dim = sum_sigma(bottom->outgoing) + (tr.twist.twisted() ? 1 : 0);
    } else if (tr.twist.twisted()) {
      R.notes.push_back("finite height: the twist leaves TR and TP unchanged");
    }
  } else {
    R.notes.push_back("d != 2: only 2-periodicity and parity are produced");
  }
  R.notes.push_back("extension data not tracked");

  if (e2.differentials.empty()) {
    e2.infinity = d == 2;
    R.pages = {e2};
    return R;
  }
  SSPage e3 = e2;
  e3.r = 3;
  e3.differentials.clear();
  e3.infinity = d == 2;
  for (const auto& df : e2.differentials) {
    SSCell& src = cell_ref(e3, df.s, df.t);
    src.domino = {};
    if (R.k_dim && df.t == -2) src.torsion_length += *R.k_dim;
    add_marker(src, tr.twist.twisted() ? "K(X,alpha)" : "K(X)");
  }
  // The differential is onto the infinitely generated part of the target.
  for (auto& [st, c] : e3.entries) {
    auto& mk = c.markers;
    bool hit = std::find(mk.begin(), mk.end(), std::string(kDominoTarget)) != mk.end();
    if (!hit) continue;
    mk.clear();
  }
  for (auto it = e3.entries.begin(); it != e3.entries.end();) {
    if (it->second.zero()) it = e3.entries.erase(it);
    else ++it;
  }
  R.pages = {e2, e3};
  return R;
}

SlopeMultiset mukai_crystal(const NumericalProfile& P) {
  if (P.d != 2 || P.crys.degrees.size() != 5 || P.H(2).rank() != 22)
    throw UnsupportedError("the Mukai crystal is defined here for K3-shaped profiles (d = 2, b_2 = 22)");
  return tate_twist(P.H(0), 1) + P.H(2) + tate_twist(P.H(4), -1);
}

// ---- rendering -----------------------------------------------------------

namespace {

std::string cell_text(const SSCell* c) {
  if (!c) return "0";
  std::string out = std::to_string(c->slopes.rank());
  if (c->torsion_length) out += " t=" + std::to_string(c->torsion_length);
  if (!c->domino.empty()) out += " T=" + std::to_string(c->domino.dim()) + ">";
  if (!c->markers.empty()) {
    out += " {";
    for (size_t k = 0; k < c->markers.size(); ++k) out += (k ? ";" : "") + c->markers[k];
    out += "}";
  }
  return out;
}

nlohmann::json cell_json(int s, int t, const SSCell& c) {
  return {{"s", s},
          {"t", t},
          {"rank", c.slopes.rank()},
          {"slopes", to_json(c.slopes)},
          {"torsion_length", c.torsion_length},
          {"domino", c.domino.constituents},
          {"markers", c.markers}};
}

}  // namespace

std::string render_page(const SSPage& page) {
  auto [bs, bt] = page.bidegree();
  std::ostringstream os;
  os << "E_" << page.r << " " << to_string(page.kind) << " (d_" << page.r << " bidegree (" << bs << "," << bt
     << "))" << (page.infinity ? " = E_inf" : "") << "\n";
  size_t w = 4;
  for (int t = page.t_lo; t <= page.t_hi; ++t)
    for (int s = page.s_lo; s <= page.s_hi; ++s) w = std::max(w, cell_text(page.at(s, t)).size());
  auto pad = [&](const std::string& x) { return x + std::string(w - x.size(), ' '); };
  std::string head = "  t\\s ";
  for (int s = page.s_lo; s <= page.s_hi; ++s) head += " " + pad(std::to_string(s));
  while (head.back() == ' ') head.pop_back();
  os << head << "\n";
  for (int t = page.t_hi; t >= page.t_lo; --t) {
    std::string lab = std::to_string(t);
    std::string line = "  " + std::string(3 - std::min<size_t>(3, lab.size()), ' ') + lab + " ";
    for (int s = page.s_lo; s <= page.s_hi; ++s) line += " " + pad(cell_text(page.at(s, t)));
    while (line.back() == ' ') line.pop_back();
    os << line << "\n";
  }
  for (const auto& df : page.differentials)
    os << "  d_" << page.r << ": " << pos(df.s, df.t) << " -> " << pos(df.s2, df.t2) << "  " << df.effect << "\n";
  return os.str();
}

nlohmann::json to_json(const SSPage& page) {
  auto [bs, bt] = page.bidegree();
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [st, c] : page.entries) cells.push_back(cell_json(st.first, st.second, c));
  nlohmann::json diffs = nlohmann::json::array();
  for (const auto& df : page.differentials)
    diffs.push_back({{"from", {df.s, df.t}}, {"to", {df.s2, df.t2}}, {"effect", df.effect}});
  return {{"kind", to_string(page.kind)},
          {"r", page.r},
          {"bidegree", {bs, bt}},
          {"window", {{"s", {page.s_lo, page.s_hi}}, {"t", {page.t_lo, page.t_hi}}}},
          {"infinity", page.infinity},
          {"cells", cells},
          {"differentials", diffs}};
}

nlohmann::json to_json(const TRComplex& tr) {
  nlohmann::json degs = nlohmann::json::array();
  for (int i = -tr.d; i <= tr.d; ++i) {
    const GradedEntry& e = tr.tr.at(i);
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& pc : tr.filtration.at(i))
      pieces.push_back({{"t", pc.t}, {"rank", pc.cell.slopes.rank()}, {"markers", pc.cell.markers}});
    degs.push_back({{"degree", i},
                    {"slopes", to_json(e.slopes)},
                    {"torsion_length", e.torsion_length},
                    {"outgoing_domino", e.outgoing.constituents},
                    {"finitely_generated", finitely_generated(tr.tr, i)},
                    {"graded_pieces", pieces}});
  }
  return {{"d", tr.d}, {"degrees", degs}, {"extension_data_tracked", tr.extension_data_tracked}};
}

nlohmann::json to_json(const TPReport& tp) {
  nlohmann::json out;
  out["d"] = tp.d;
  nlohmann::json t = nlohmann::json::array();
  for (const auto& [n, s] : tp.tp) t.push_back({{"n", n}, {"rank", s.rank()}, {"slopes", to_json(s)}});
  out["tp"] = t;
  out["odd_vanishes"] = tp.odd_vanishes;
  out["k_dim"] = tp.k_dim ? nlohmann::json(*tp.k_dim) : nlohmann::json(nullptr);
  nlohmann::json pages = nlohmann::json::array();
  for (const auto& p : tp.pages) pages.push_back(to_json(p));
  out["pages"] = pages;
  out["notes"] = tp.notes;
  return out;
}

}  // namespace derinv
