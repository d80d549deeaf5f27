#pragma once

#include "orbitlab/lie_algebra.hpp"
#include "orbitlab/subspace.hpp"

#include <cstdint>
#include <vector>

namespace orbitlab {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kGenericRetries = 8;

/// B(X, Y) = tr(ad X ad Y) in the stored basis.
Matrix killing_form(const LieAlgebra& l);

struct StructureInvariants {
  bool semisimple = false;
  bool unimodular = false;
  bool nilpotent = false;
  int center_dim = 0;
};

/// Throws IndeterminateError when |det B| sits inside the tolerance band.
StructureInvariants structure_invariants(const LieAlgebra& l);

/// max_i |tr ad e_i|
double unimodularity_defect(const LieAlgebra& l);

/// span{[a, b] : a in A, b in B}
Subspace bracket_span(const LieAlgebra& l, const Subspace& a, const Subspace& b);

/// Dimensions of S, [S,S], [S,[S,S]], ... until zero or stationary.
std::vector<int> lower_central_series_dims(const LieAlgebra& l, const Subspace& s);
std::vector<int> derived_series_dims(const LieAlgebra& l, const Subspace& s);
bool is_nilpotent(const LieAlgebra& l, const Subspace& s);
bool is_solvable(const LieAlgebra& l, const Subspace& s);
bool is_subalgebra(const LieAlgebra& l, const Subspace& s);
bool is_ideal(const LieAlgebra& l, const Subspace& s);

/// Smallest ideal containing `seed`.
Subspace ideal_closure(const LieAlgebra& l, const Subspace& seed);

enum class SubspaceOperator { Centralizer, Normalizer };

/// Centralizer: {X in within : [X, S] = 0}. Normalizer: {X in within : [X, S] ⊆ S}.
Subspace subspace_operator(const LieAlgebra& l, SubspaceOperator kind, const Subspace& s,
                           const Subspace& within);

/// Same as subspace_operator but also reports the smallest nonzero singular
/// value of the linear system (how far the kernel is from growing).
NullSpace subspace_operator_system(const LieAlgebra& l, SubspaceOperator kind, const Subspace& s,
                                   const Subspace& within);

inline Subspace centralizer(const LieAlgebra& l, const Subspace& s, const Subspace& within) {
  return subspace_operator(l, SubspaceOperator::Centralizer, s, within);
}
inline Subspace normalizer(const LieAlgebra& l, const Subspace& s, const Subspace& within) {
  return subspace_operator(l, SubspaceOperator::Normalizer, s, within);
}

/// Der(l) as a subspace of R^{dim^2}; maps are vectorized column-major.
Subspace derivations(const LieAlgebra& l);
Matrix unvectorize(const Vector& v, int dim);
/// max over i<j of |D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]|
double derivation_residual(const LieAlgebra& l, const Matrix& d);
bool is_derivation(const LieAlgebra& l, const Matrix& d);
/// max over i,j of |phi[e_i,e_j] - [phi e_i, phi e_j]|
double automorphism_residual(const LieAlgebra& l, const Matrix& phi);

/// Solvable radical, computed as the Killing-orthogonal complement of [l, l].
Subspace radical(const LieAlgebra& l);

/// Maximal nilpotent ideal. Verified a posteriori; AlgorithmFailure otherwise.
Subspace nilradical(const LieAlgebra& l, std::uint64_t seed = kDefaultSeed);

/// Decomposition of a semisimple algebra into simple ideals.
std::vector<Subspace> simple_ideals(const LieAlgebra& l, std::uint64_t seed = kDefaultSeed);

/// Structure constants of a subalgebra in the orthonormal basis of `s`.
LieAlgebra restrict_to(const LieAlgebra& l, const Subspace& s);

}  // namespace orbitlab
