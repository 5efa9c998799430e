#pragma once

#include <cstdint>
#include <vector>

#include "modlie/repmod.hpp"

namespace modlie {

/// An F_p-linear function on the algebra's basis with values in an
/// extension of the base field. Two characters over different extensions
/// are compared after embedding both into a common field.
struct Character {
  const FieldCtx* field = nullptr;
  std::vector<FieldElem> values;  // one per basis vector of the algebra
};

bool char_equal(const Character& a, const Character& b);
bool is_zero_character(const Character& c);
Character zero_character(const FieldCtx* field, std::size_t n);
Character add_characters(const Character& a, const Character& b);
/// Scalar multiple by a prime-field coefficient 0 <= a < p.
Character scale_character(const Character& c, uint32_t a);
bool char_in(const Character& c, const std::vector<Character>& set);

/// The characters of the composition factors of a module over a splitting
/// extension, stored deduplicated and sorted over that one field.
struct CharacterCluster {
  const FieldCtx* splitting_field = nullptr;
  std::vector<Character> characters;
  std::size_t module_dim = 0;
};

/// rho(e_i)^p - rho(e_i^[p]). Zero for every i exactly when the module is
/// restricted. The algebra must carry a p-map.
Matrix semilinear_defect(const LModule& M, std::size_t i);

/// The character of an absolutely irreducible module: each defect is a
/// scalar sigma_i Id and c_i is its p-th root. Throws std::invalid_argument
/// when some defect is not scalar (the module was not absolutely
/// irreducible).
Character character_of(const LModule& M);

/// Characters of all composition factors after extending scalars until
/// every factor is absolutely irreducible. Escalation multiplies the
/// extension degree by the lcm of the endomorphism dimensions greater than
/// one, and repeats; the degree cap bounds runaway cases.
CharacterCluster cluster(const LModule& M, uint64_t seed = 0);

/// All sums of cluster members with coefficients in {0, ..., p-1},
/// deduplicated; always contains the zero character.
std::vector<Character> fp_span(const CharacterCluster& C);

/// Inclusion of A's characters in B, compared over a common extension.
bool cluster_subset(const CharacterCluster& A, const std::vector<Character>& B);

struct ClusterLawReport {
  bool holds = false;
  std::vector<Character> computed;   // the cluster actually measured
  std::vector<Character> predicted;  // the combination law's prediction
};

/// cl(V^(x)r) against {c_1 + ... + c_r : c_i in cl(V)}.
ClusterLawReport check_tensor_power_law(const LModule& V, std::size_t r, uint64_t seed = 0);

/// cl(Hom(V,W)) against {d - c : c in cl(V), d in cl(W)}, including the
/// zero-character membership for every shared character.
ClusterLawReport check_hom_law(const LModule& V, const LModule& W, uint64_t seed = 0);

}  // namespace modlie
