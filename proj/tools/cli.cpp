#include "cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "derinv/catalog.hpp"
#include "derinv/errors.hpp"
#include "derinv/fmcheck.hpp"
#include "derinv/invariants.hpp"
#include "derinv/rmod.hpp"
#include "derinv/specseq.hpp"
#include "derinv/witt.hpp"

namespace derinv::cli {
namespace {

// ---- witt eval -------------------------------------------------------------
//
// expr   := term (('+' | '-') term)*
// term   := unary ('*' unary)*
// unary  := '-' unary | atom
// atom   := INT | 'F' '(' expr ')' | 'V' '(' expr ')' | '(' expr ')'
//         | '(' coord (',' coord)+ ')'
// A tuple lists Witt coordinates as field elements and is padded with zeros.

class WittParser {
 public:
  WittParser(const std::string& s, FieldPtr field, int n) : s_(s), field_(std::move(field)), n_(n) {}

  WittVector parse() {
    WittVector v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("witt expression, column " + std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  WittVector expr() {
    WittVector v = term();
    for (;;) {
      if (eat('+'))
        v = add(v, term());
      else if (eat('-'))
        v = sub(v, term());
      else
        return v;
    }
  }
  WittVector term() {
    WittVector v = unary();
    while (eat('*')) v = mul(v, unary());
    return v;
  }
  WittVector unary() {
    if (eat('-')) return neg(unary());
    return atom();
  }

  // Position of the ')' closing the '(' at pos_ - 1, and whether a comma
  // occurs at depth zero inside.
  std::pair<size_t, bool> scan_group() const {
    int depth = 0;
    bool comma = false;
    for (size_t i = pos_; i < s_.size(); ++i) {
      char c = s_[i];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) return {i, comma};
        --depth;
      }
      if (c == ',' && depth == 0) comma = true;
    }
    fail("unbalanced '('");
  }

  WittVector tuple(size_t close) {
    std::vector<Fq> coords;
    std::stringstream ss(s_.substr(pos_, close - pos_));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto b = item.find_first_not_of(" \t");
      auto e = item.find_last_not_of(" \t");
      if (b == std::string::npos) fail("empty Witt coordinate");
      coords.push_back(field_->parse(item.substr(b, e - b + 1)));
    }
    if (int(coords.size()) > n_)
      fail("tuple has " + std::to_string(coords.size()) + " coordinates but n = " + std::to_string(n_));
    coords.resize(size_t(n_), field_->zero());
    pos_ = close + 1;
    return WittVector(field_, std::move(coords));
  }

  WittVector atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string digits = s_.substr(start, pos_ - start);
      if (digits.size() > 18) fail("integer literal too large");
      return WittVector::from_int(field_, n_, std::stoll(digits));
    }
    if (c == 'F' || c == 'V') {
      ++pos_;
      expect('(');
      WittVector v = expr();
      expect(')');
      return c == 'F' ? frobenius(v) : verschiebung(v);
    }
    if (c == '(') {
      ++pos_;
      auto [close, comma] = scan_group();
      if (comma) return tuple(close);
      WittVector v = expr();
      expect(')');
      return v;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  FieldPtr field_;
  int n_;
  size_t pos_ = 0;
};

// ---- helpers -----------------------------------------------------------------

// "1", "0", "p", "p^v", "9", "3^2".
TwistInfo parse_twist(const std::string& s, uint32_t p) {
  if (s.empty()) return {};
  auto caret = s.find('^');
  std::string base = s.substr(0, caret);
  int64_t b = 0;
  try {
    b = base == "p" ? int64_t(p) : std::stoll(base);
  } catch (const std::exception&) {
    throw ParseError("bad --twist '" + s + "'");
  }
  int64_t ord = b;
  if (caret != std::string::npos) {
    int e = 0;
    try {
      e = std::stoi(s.substr(caret + 1));
    } catch (const std::exception&) {
      throw ParseError("bad --twist '" + s + "'");
    }
    if (e < 0 || e > 30) throw ParseError("bad --twist exponent in '" + s + "'");
    ord = 1;
    for (int k = 0; k < e; ++k) ord *= b;
  }
  if (ord == 0) ord = 1;  // alpha = 0
  return make_twist(p, ord);
}

void print_warnings(const CatalogEntry& e, std::ostream& err) {
  for (const auto& w : e.warnings) err << "warning: " << w << "\n";
}

std::string join_pages(const std::vector<SSPage>& pages) {
  std::string out;
  for (size_t k = 0; k < pages.size(); ++k) {
    if (k) out += "\n";
    out += render_page(pages[k]);
  }
  return out;
}

int cmd_invariants(const std::string& key, bool json, std::ostream& out, std::ostream& err) {
  CatalogEntry e = resolve(key);
  print_warnings(e, err);
  InvariantReport R = compute_report(e.profile);
  if (json)
    out << to_json(R).dump(2) << "\n";
  else
    out << render_text(R);
  return R.consistent() ? kOk : kValidation;
}

int cmd_compare(const std::string& a, const std::string& b, bool json, std::ostream& out, std::ostream& err) {
  CatalogEntry A = resolve(a), B = resolve(b);
  print_warnings(A, err);
  print_warnings(B, err);
  ObstructionReport R = compare(A.profile, B.profile);
  if (json)
    out << to_json(R).dump(2) << "\n";
  else
    out << explain(R);
  return R.exit_code();
}

int cmd_verify(const std::string& key, bool all, bool json, std::ostream& out, std::ostream& err) {
  std::vector<CatalogEntry> entries;
  if (all)
    entries = builtin_catalog();
  else
    entries.push_back(resolve(key));
  bool ok = true;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : entries) {
    print_warnings(e, err);
    InvariantReport R = compute_report(e.profile);
    std::vector<std::string> failed;
    for (const auto& c : R.checks)
      if (!c.ok) failed.push_back(c.name);
    ok = ok && R.consistent();
    if (json) {
      j.push_back({{"key", e.key}, {"consistent", R.consistent()}, {"failed", failed}, {"checks", R.checks.size()}});
      continue;
    }
    out << (R.consistent() ? "ok   " : "FAIL ") << e.key << " (" << R.checks.size() << " checks";
    if (!R.skipped.empty()) out << ", " << R.skipped.size() << " skipped";
    out << ")";
    for (const auto& f : failed) out << " " << f;
    out << "\n";
  }
  if (json) out << j.dump(2) << "\n";
  return ok ? kOk : kValidation;
}

int cmd_ss(const std::string& key, const std::string& kind, const std::string& twist_arg, bool json,
           std::ostream& out, std::ostream& err) {
  CatalogEntry e = resolve(key);
  print_warnings(e, err);
  const NumericalProfile& P = e.profile;
  TwistInfo tw = P.twist.value_or(TwistInfo{});
  if (!twist_arg.empty()) tw = parse_twist(twist_arg, P.p);

  if (kind == "slope") {
    auto pages = slope_ss(P);
    if (json) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& pg : pages) j.push_back(to_json(pg));
      out << j.dump(2) << "\n";
    } else {
      out << join_pages(pages);
    }
    return kOk;
  }
  auto pages = descent_ss(P, tw);
  if (kind == "descent") {
    if (json) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& pg : pages) j.push_back(to_json(pg));
      out << j.dump(2) << "\n";
    } else {
      out << join_pages(pages);
    }
    return kOk;
  }
  TRComplex tr = assemble_tr(pages, P.d, tw);
  TPReport tp = tate_ss_tp(tr);
  if (json) {
    out << nlohmann::json{{"tr", to_json(tr)}, {"tp", to_json(tp)}}.dump(2) << "\n";
    return kOk;
  }
  out << join_pages(tp.pages) << "\n";
  for (const auto& [n, s] : tp.tp) out << "TP_" << n << " " << s.to_string() << "\n";
  out << "odd TP vanishes: " << (tp.odd_vanishes ? "yes" : "no") << "\n";
  if (tp.k_dim) out << "dim K = " << *tp.k_dim << "\n";
  for (const auto& note : tp.notes) out << "note: " << note << "\n";
  return kOk;
}

int cmd_catalog_list(bool json, std::ostream& out) {
  if (json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : builtin_catalog()) j.push_back({{"key", e.key}, {"d", e.profile.d}, {"p", e.profile.p}});
    out << j.dump(2) << "\n";
    return kOk;
  }
  for (const auto& e : builtin_catalog()) out << e.key << "  d=" << e.profile.d << "\n";
  return kOk;
}

int cmd_rmod_check(const std::string& path, bool json, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  RModuleExplicit M = rmodule_from_json(j);
  auto viol = check_relations(M);
  if (json) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : viol)
      a.push_back({{"relation", v.relation}, {"degree", v.degree}, {"generator", v.generator}, {"detail", v.detail}});
    out << nlohmann::json{{"ok", viol.empty()}, {"violations", a}}.dump(2) << "\n";
  } else if (viol.empty()) {
    out << "ok " << path << "\n";
  } else {
    for (const auto& v : viol) out << format_violation(v) << "\n";
  }
  return viol.empty() ? kOk : kValidation;
}

}  // namespace

std::string witt_eval(const std::string& expr, uint32_t p, uint32_t a, int n) {
  if (n < 1 || n > 8) throw DomainError("witt eval supports 1 <= n <= 8");
  auto field = GroundField::get(p, a);
  return format_witt(WittParser(expr, field, n).parse());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic derived invariants of varieties in characteristic p", "derinv"};
  app.require_subcommand(1);

  bool json = false;
  std::string key, key_b, kind = "slope", twist, expr, path;
  bool all = false;
  uint32_t wp = 0, wa = 1;
  int wn = 1, sigma = 1, m = 0;

  auto* inv = app.add_subcommand("invariants", "Invariant report for a catalog key or profile file");
  inv->add_option("profile", key, "catalog key or profile path")->required();
  inv->add_flag("--json", json, "JSON output");

  auto* cmp = app.add_subcommand("compare", "Look for obstructions to a Fourier-Mukai equivalence");
  cmp->add_option("a", key, "first profile")->required();
  cmp->add_option("b", key_b, "second profile")->required();
  cmp->add_flag("--json", json, "JSON output");

  auto* ver = app.add_subcommand("verify", "Run every identity on a profile or the whole catalog");
  auto* ver_key = ver->add_option("profile", key, "catalog key or profile path");
  auto* ver_all = ver->add_flag("--all", all, "verify the built-in catalog");
  ver_key->excludes(ver_all);
  ver->add_flag("--json", json, "JSON output");

  auto* ss = app.add_subcommand("ss", "Render spectral sequence pages");
  ss->add_option("profile", key, "catalog key or profile path")->required();
  ss->add_option("--kind", kind, "slope, descent or tate")
      ->check(CLI::IsMember({"slope", "descent", "tate"}))
      ->capture_default_str();
  ss->add_option("--twist", twist, "order of the Brauer class: 1, p, p^v or an integer");
  ss->add_flag("--json", json, "JSON output");

  auto* witt = app.add_subcommand("witt", "Witt vector arithmetic");
  witt->require_subcommand(1);
  auto* weval = witt->add_subcommand("eval", "Evaluate an expression");
  weval->add_option("expr", expr, "expression, e.g. \"(1,0)+(1,0)\"")->required();
  weval->add_option("--p", wp, "prime")->required();
  weval->add_option("--a", wa, "degree of F_q over F_p")->capture_default_str();
  weval->add_option("--n", wn, "precision")->capture_default_str();

  auto* cat = app.add_subcommand("catalog", "Built-in profiles");
  cat->require_subcommand(1);
  auto* clist = cat->add_subcommand("list", "List catalog keys");
  clist->add_flag("--json", json, "JSON output");
  auto* cshow = cat->add_subcommand("show", "Print a profile as JSON");
  cshow->add_option("key", key, "catalog key")->required();

  auto* rmod = app.add_subcommand("rmod", "Explicit R-modules");
  rmod->require_subcommand(1);
  auto* rcheck = rmod->add_subcommand("check", "Check the Raynaud relations of a module file");
  rcheck->add_option("file", path)->required()->check(CLI::ExistingFile);
  rcheck->add_flag("--json", json, "JSON output");
  auto* ru = rmod->add_subcommand("u-sigma", "Print a truncation of U_sigma over F_p as JSON");
  ru->add_option("--p", wp, "prime")->required();
  ru->add_option("--sigma", sigma, "sigma >= 1")->required();
  ru->add_option("--m", m, "truncation level, > sigma")->required();

  std::vector<std::string> argv_s{"derinv"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseOrIo;
  }

  try {
    if (*inv) return cmd_invariants(key, json, out, err);
    if (*cmp) return cmd_compare(key, key_b, json, out, err);
    if (*ver) {
      if (!all && key.empty()) throw ParseError("verify needs a profile or --all");
      return cmd_verify(key, all, json, out, err);
    }
    if (*ss) return cmd_ss(key, kind, twist, json, out, err);
    if (*weval) {
      out << witt_eval(expr, wp, wa, wn) << "\n";
      return kOk;
    }
    if (*clist) return cmd_catalog_list(json, out);
    if (*cshow) {
      CatalogEntry e = lookup(key);
      print_warnings(e, err);
      out << to_json(e.profile).dump(2) << "\n";
      return kOk;
    }
    if (*rcheck) return cmd_rmod_check(path, json, out);
    if (*ru) {
      if (sigma < 1 || m <= sigma) throw DomainError("u-sigma needs 1 <= sigma < m");
      out << to_json(u_sigma(wp, sigma, m)).dump(2) << "\n";
      return kOk;
    }
  } catch (const InsufficientDataError& e) {
    err << "insufficient data: " << e.what() << "\n";
    return kInsufficient;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << "\n";
    return kValidation;
  } catch (const PresentationError& e) {
    err << "validation failed: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParseOrIo;
  }
  return kParseOrIo;
}

}  // namespace derinv::cli
