#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "derinv/linalg.hpp"
#include "derinv/slopes.hpp"

namespace derinv {

// One degree of an explicit R-module: W_n-cyclic generators with annihilator
// exponents, F(x) = F sigma(x), V(x) = V sigma^{-1}(x), d(x) = d x.
struct RDegree {
  std::vector<int> ann;
  GrMatrix F, V;
  GrMatrix d;         // rows = generators of the next degree (0 at the top)
  GrMatrix boundary;  // columns spanning the truncation boundary, possibly none
};

// Finite V-adic truncation data. Relations are checked modulo the boundary,
// which holds the part of Fil^{level-1} that the truncation cuts open.
struct Truncation {
  int level = 0;
};

class RModuleExplicit {
 public:
  RModuleExplicit(RingPtr ring, int lo, std::vector<RDegree> degrees, std::optional<Truncation> trunc = std::nullopt);

  const RingPtr& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + int(deg_.size()) - 1; }
  bool has(int i) const { return i >= lo() && i <= hi(); }
  const RDegree& at(int i) const;
  size_t generators(int i) const { return has(i) ? at(i).ann.size() : 0; }
  int length(int i) const;
  const std::optional<Truncation>& truncation() const { return trunc_; }

  static RModuleExplicit zero(RingPtr ring, int lo, int hi);
  // Shape checks plus well-definedness of every map; throws PresentationError.
  void check_presentation() const;

 private:
  RingPtr ring_;
  int lo_;
  std::vector<RDegree> deg_;
  std::optional<Truncation> trunc_;
};

struct RelationViolation {
  std::string relation;
  int degree;
  int generator;
  std::string detail;
};

std::vector<RelationViolation> check_relations(const RModuleExplicit& M);
std::string format_violation(const RelationViolation& v);

// A submodule of M^i given by generator columns.
struct Submodule {
  int degree;
  GrMatrix gens;
  int length;
};

Submodule v_inf_Z(const RModuleExplicit& M, int i);
Submodule f_inf_B(const RModuleExplicit& M, int i);
// Number of iterations each chain took to stabilize (for tests of the bound).
struct ChainStats {
  int kernel_steps = 0, image_steps = 0;
};
ChainStats chain_stats(const RModuleExplicit& M, int i);

// [M^i / V^{-inf}Z^i -> F^inf B^{i+1}] placed in degrees i, i+1.
RModuleExplicit domino_of(const RModuleExplicit& M, int i);
// dim_k(D^i / V D^i); DomainError when D is not a domino in degrees i, i+1.
int64_t domino_dim(const RModuleExplicit& D, int i);
// T^i(M) = T(domino_of(M, i)).
int64_t domino_number(const RModuleExplicit& M, int i);
// dim_k of ker(d: M^i -> M^{i+1}) restricted to the socle-free case of
// k-vector spaces; in general the W-length of the kernel.
int64_t kernel_length_of_d(const RModuleExplicit& M, int i);

RModuleExplicit direct_sum(const RModuleExplicit& A, const RModuleExplicit& B);

// Per-degree W-linear matrices of a morphism of R-modules.
struct RMorphism {
  int lo = 0;
  std::vector<GrMatrix> maps;  // maps[i - lo]: source^i -> target^i
};

struct AdditivityResult {
  bool additive = true;
  std::vector<std::pair<int, std::array<int64_t, 3>>> per_degree;  // (i, {T(L), T(M), T(N)})
};
// Verifies 0 -> L -> M -> N -> 0 (exactness and R-linearity, modulo truncation
// boundaries) and compares domino numbers. DomainError on non-exact input.
AdditivityResult T_additivity_check(const RModuleExplicit& L, const RModuleExplicit& M, const RModuleExplicit& N,
                                    const RMorphism& f, const RMorphism& g);

// Canonical truncation of U_sigma at level m over k = F_p (n = 1):
// degree 0 basis e_0..e_{m-1} with V e_t = e_{t+1}, F = 0; degree 1 basis
// f_sigma..f_{m-1} with F f_{t+1} = f_t, F f_sigma = 0, V = 0; d e_t = f_t for
// t >= sigma and 0 below. ker d has dimension sigma. Precision n only
// changes the coefficient ring; the module is still killed by p.
RModuleExplicit u_sigma(uint32_t p, int sigma, int m, int lo = 0, int n = 1);

// The same module in new generators x' = U_i x per degree. Each U_i must be
// invertible and the degree must have a single annihilator exponent.
RModuleExplicit change_basis(const RModuleExplicit& M, const std::vector<GrMatrix>& U);

// Serialization: {p, a, n, degrees:[lo,hi], modules:[{degree, ann}], F, V, d,
// truncation:{level, boundary}} with entries either integers mod p^n or
// arrays of Witt coordinates.
nlohmann::json to_json(const RModuleExplicit& M);
RModuleExplicit rmodule_from_json(const nlohmann::json& j);

// ---- structural summaries ------------------------------------------------

struct DominoSpec {
  int i = 0, j = 0;
  std::vector<int64_t> constituents;  // sigma values of the U_sigma pieces
  int64_t dim() const { return int64_t(constituents.size()); }
  bool empty() const { return constituents.empty(); }
};

struct GradedEntry {
  SlopeMultiset slopes;
  int64_t torsion_length = 0;
  DominoSpec outgoing;
  // The outgoing differential is nonzero. Implied by a nonempty domino; a
  // nonzero differential without a domino carries finite torsion only.
  bool outgoing_nonzero = false;
};

struct GradedRStructure {
  int lo = 0;
  std::vector<GradedEntry> entries;
  int hi() const { return lo + int(entries.size()) - 1; }
  const GradedEntry& at(int i) const { return entries.at(size_t(i - lo)); }
};

// No domino enters or leaves degree i.
bool finitely_generated(const GradedRStructure& M, int i);
bool finite_iff_flanking_d_zero(const GradedRStructure& M, int i);
std::vector<std::string> validate_structure(const GradedRStructure& M);

}  // namespace derinv
