#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "derinv/isocrystal.hpp"
#include "derinv/rmod.hpp"
#include "derinv/witt.hpp"

namespace derinv::testing {

std::mt19937_64& rng();
int64_t uniform(int64_t lo, int64_t hi);

// W_n(F_p) = Z/p^n via x = sum p^i [x_i], [.] the Teichmuller lift.
uint64_t witt_to_int(const WittVector& x);
WittVector int_to_witt(FieldPtr field, int n, uint64_t v);
uint64_t ipow(uint64_t b, int e);

WittVector random_witt(const FieldPtr& field, int n);
GrElem random_elem(const GaloisRing& R);
GrMatrix random_matrix(const GaloisRing& R, size_t rows, size_t cols);
// Uniform among matrices with invertible residue.
GrMatrix random_invertible(const GaloisRing& R, size_t m);

std::string data_path(const std::string& rel);
std::vector<std::string> rmod_fixture_paths();
RModuleExplicit load_rmodule(const std::string& path);

// 0 -> L -> M -> N -> 0 with both maps.
struct ShortExact {
  RModuleExplicit L, M, N;
  RMorphism f, g;
};
// U_a -> U_a + U_b -> U_b, optionally with the middle term in scrambled
// generators.
ShortExact split_extension(uint32_t p, int a, int b, bool scramble);
// Over W_2(F_p): U_sigma + pW_2 -> U_sigma + W_2 -> k, non-split on the W_2
// summand.
ShortExact nonsplit_extension(uint32_t p, int sigma);

}  // namespace derinv::testing
