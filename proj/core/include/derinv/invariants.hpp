#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "derinv/profile.hpp"

namespace derinv {

using SlopeTable = std::vector<std::vector<SlopeMultiset>>;  // [i][j]

// h^{i,j}_{dRW,lambda} = h^{i+j}_{crys, i+lambda}, lambda in [0,1).
SlopeTable drw_slopes(const NumericalProfile& P);
// h^TR_{n,lambda} = sum over i-j=n of the dRW slopes; keys -d..d.
std::map<int, SlopeMultiset> tr_slopes(const NumericalProfile& P);

// Hodge-Newton numbers. DomainError if a value is not a nonnegative integer.
IntTable m_numbers(const NumericalProfile& P);
// m^{i,j} + T^{i,j} - 2T^{i-1,j+1} + T^{i-2,j+2}. Needs the domino table.
IntTable hw_numbers(const NumericalProfile& P);

// chi(Omega^i) = sum_j (-1)^j h^{i,j}. Needs Hodge numbers.
std::vector<int64_t> euler_characteristics(const NumericalProfile& P);
// Per column i: sum_j (-1)^j h_W^{i,j} == chi(Omega^i).
std::vector<bool> crew_check(const NumericalProfile& P);

// b_n from crystalline ranks.
std::vector<int64_t> betti(const NumericalProfile& P);
// b_n == sum_{i+j=n} h_W^{i,j} for every n.
bool betti_consistency(const NumericalProfile& P);

// sum_j h^{j,j-i} for i = -d..d.
std::map<int, int64_t> hh_sums(const NumericalProfile& P);

struct MazurOgusResult {
  // (1) Hodge-de Rham degeneration plus torsion-free crystalline cohomology;
  // (2) b_n = sum_{i+j=n} h^{i,j}; (3) h = h_W. nullopt: data missing.
  std::optional<bool> degeneration_and_torsion_free, betti_equals_hodge, hodge_equals_hw;
  std::optional<bool> value;  // common value of the known conditions
  bool consistent = true;     // known conditions agree
};
MazurOgusResult mazur_ogus(const NumericalProfile& P);

struct HodgeWittFlags {
  bool hodge_witt = false;          // all T^{i,j} = 0
  bool derived_hodge_witt = false;  // all T^cyc_i = 0
  bool equivalent() const { return hodge_witt == derived_hodge_witt; }
};
// Needs the domino table.
HodgeWittFlags hodge_witt_predicates(const NumericalProfile& P);

struct IdentityCheck {
  std::string name;
  bool ok;
  std::string detail;
};

struct InvariantReport {
  std::string name;
  int d = 0;
  uint32_t p = 0, a = 1;
  std::vector<SlopeMultiset> crys;
  SlopeTable drw;
  std::map<int, SlopeMultiset> tr;
  std::optional<IntTable> m;
  std::optional<IntTable> hw;
  std::optional<IntTable> T;
  std::optional<std::map<int, int64_t>> tcyc;
  std::vector<int64_t> betti;
  std::optional<std::vector<int64_t>> euler;
  std::optional<std::map<int, int64_t>> hh;
  std::optional<int64_t> height;  // nullopt = infinite
  MazurOgusResult mazur_ogus;
  std::optional<HodgeWittFlags> hw_flags;
  std::vector<IdentityCheck> checks;
  std::vector<std::string> skipped;  // identities disabled by missing data

  bool consistent() const;
};

// Throws ValidationError if validate_profile reports anything.
InvariantReport compute_report(const NumericalProfile& P);
std::string render_text(const InvariantReport& R);
nlohmann::json to_json(const InvariantReport& R);

}  // namespace derinv
