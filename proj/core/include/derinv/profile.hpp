#pragma once

#include <gmpxx.h>

#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derinv/isocrystal.hpp"
#include "derinv/rmod.hpp"

namespace derinv {

// Order of the Brauer class; 1 is untwisted.
struct TwistInfo {
  int64_t ord_alpha = 1;
  bool twisted() const { return ord_alpha > 1; }
};

// Throws DomainError unless ord is 1 or a positive power of p.
TwistInfo make_twist(uint32_t p, int64_t ord);

using IntTable = std::vector<std::vector<int64_t>>;  // [i][j]

struct NumericalProfile {
  std::string name;
  uint32_t p = 0;
  uint32_t a = 1;
  int d = 0;
  // hodge[i][j] = h^{i,j} = dim H^j(Omega^i).
  std::optional<IntTable> hodge;
  CrystallineSlopeData crys;
  // Per cohomological degree 0..2d.
  std::optional<std::vector<bool>> torsion_free;
  std::optional<bool> hdr_degenerate;
  // Nonzero dominoes only; nullopt means the domino table is unknown.
  std::optional<std::vector<DominoSpec>> dominoes;
  std::optional<TwistInfo> twist;
  // Leading coefficient first, per degree.
  std::map<int, std::vector<mpz_class>> charpolys;
  std::optional<int64_t> albanese_dim;
  bool calabi_yau = false;
  // Sources (s, t) of nonzero descent d_2 differentials.
  std::vector<std::pair<int, int>> descent_differentials;
  std::map<std::string, std::string> provenance;

  // T^{i,j}; 0 outside the table. InsufficientDataError if unknown.
  int64_t T(int i, int j) const;
  const DominoSpec* domino_at(int i, int j) const;
  const SlopeMultiset& H(int deg) const { return crys.degrees.at(size_t(deg)); }
  int64_t h(int i, int j) const { return hodge->at(size_t(i)).at(size_t(j)); }
};

// Domino positions that may be nonzero: j >= 2 and i <= d-2.
bool domino_position_allowed(int d, int i, int j);

// Everything that makes a profile unusable. Empty means valid.
std::vector<std::string> validate_profile(const NumericalProfile& P);

nlohmann::json to_json(const NumericalProfile& P);
// Throws ParseError on schema mismatch. Does not validate.
NumericalProfile profile_from_json(const nlohmann::json& j);

NumericalProfile load_profile(const std::string& path);
void save_profile(const NumericalProfile& P, const std::string& path);

}  // namespace derinv
