#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derinv/profile.hpp"

namespace derinv {

enum class SSKind { Slope, Descent, Tate };
std::string to_string(SSKind k);

struct SSCell {
  SlopeMultiset slopes;
  int64_t torsion_length = 0;
  // Domino of the slope d_1 leaving this cell, carried to every page.
  DominoSpec domino;
  std::vector<std::string> markers;
  bool zero() const { return slopes.empty() && torsion_length == 0 && domino.empty() && markers.empty(); }
};

struct SSDifferential {
  int s, t;    // source
  int s2, t2;  // target
  std::string effect;
};

struct SSPage {
  SSKind kind = SSKind::Slope;
  int r = 1;
  int s_lo = 0, s_hi = 0, t_lo = 0, t_hi = 0;
  std::map<std::pair<int, int>, SSCell> entries;  // nonzero cells only
  std::vector<SSDifferential> differentials;      // nonzero d_r on this page
  bool infinity = false;                          // this page is E_inf

  // Slope: (r, 1-r); descent: (r-1, r); Tate: (r, r-1).
  std::pair<int, int> bidegree() const;
  const SSCell* at(int s, int t) const;
};

// E_1 ... E_inf. The last page has infinity set.
std::vector<SSPage> slope_ss(const NumericalProfile& P);
// E_2 ... E_inf for d <= 3. A twist on a non-surface is UnsupportedError.
std::vector<SSPage> descent_ss(const NumericalProfile& P, const TwistInfo& twist = {});
// Page index r of the last page.
int degenerates_at(const std::vector<SSPage>& pages);

struct TRPiece {
  int t;  // originating row
  SSCell cell;
};

struct TRComplex {
  int d = 0;
  GradedRStructure tr;  // degrees -d..d
  // Graded pieces of the filtration per degree, row t descending.
  std::map<int, std::vector<TRPiece>> filtration;
  bool extension_data_tracked = false;
  TwistInfo twist;
};

TRComplex assemble_tr(const std::vector<SSPage>& descent_pages, int d, const TwistInfo& twist = {});

// T^cyc_i = sum_j T^{i+j,j}, keys -d..d. UnsupportedError for d > 3.
std::map<int, int64_t> derived_dominoes(const NumericalProfile& P);

struct TPReport {
  int d = 0;
  std::vector<SSPage> pages;            // Tate E_2 and E_3 = E_inf
  std::map<int, SlopeMultiset> tp;      // rational TP_n slopes
  bool odd_vanishes = false;
  std::optional<int64_t> k_dim;         // dim_k K(X, alpha)
  std::vector<std::string> notes;
};

// Rational TP_n slopes for n in [n_lo, n_hi].
TPReport tate_ss_tp(const TRComplex& tr, int n_lo = -6, int n_hi = 1);

// H^0(-1) + H^2 + H^4(1) in Tate-twist notation: slopes of H^0 move up by one
// and those of H^4 down by one. UnsupportedError unless d = 2 and b_2 = 22.
SlopeMultiset mukai_crystal(const NumericalProfile& P);

std::string render_page(const SSPage& page);
nlohmann::json to_json(const SSPage& page);
nlohmann::json to_json(const TRComplex& tr);
nlohmann::json to_json(const TPReport& tp);

}  // namespace derinv
