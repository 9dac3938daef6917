#pragma once

#include <optional>
#include <string>
#include <vector>

#include "derinv/profile.hpp"

namespace derinv {

// Built-in entries live over F_3.
inline constexpr uint32_t kCatalogPrime = 3;

struct CatalogEntry {
  std::string key;
  NumericalProfile profile;  // provenance tags live in profile.provenance
  std::vector<std::string> warnings;
};

// Every constructor validates its result and throws ValidationError on an
// inconsistent profile.
CatalogEntry k3_finite_height(int h, uint32_t p = kCatalogPrime);
CatalogEntry k3_supersingular(int sigma0, uint32_t p = kCatalogPrime);
// ord_alpha must be 1 or a power of p.
CatalogEntry twisted_k3(int sigma0, int64_t ord_alpha, uint32_t p = kCatalogPrime);
CatalogEntry curve(int g, int f, uint32_t p = kCatalogPrime);
// newton is the slope multiset of H^1; H^i are its exterior powers.
CatalogEntry abelian(int g, const SlopeMultiset& newton, std::optional<std::vector<DominoSpec>> dominoes = {},
                     uint32_t p = kCatalogPrime);
CatalogEntry projective_space(int n, uint32_t p = kCatalogPrime);

// Slopes of the i-th exterior power of a multiset.
SlopeMultiset exterior_power(const SlopeMultiset& s, int i);

// Keys: k3:h:N, k3:ss:N, k3:ss:N:tw:V (ord alpha = p^V), curve:G:F,
// abelian:G:F, P:N.
CatalogEntry lookup(const std::string& key);
const std::vector<CatalogEntry>& builtin_catalog();

// Reads a profile file and validates it. ValidationError lists every problem.
CatalogEntry load(const std::string& path);
// Key, or a path to a profile file.
CatalogEntry resolve(const std::string& key_or_path);

}  // namespace derinv
