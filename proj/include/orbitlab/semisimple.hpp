#pragma once

#include "orbitlab/lie_algebra.hpp"
#include "orbitlab/structure.hpp"
#include "orbitlab/subspace.hpp"

#include <memory>
#include <vector>

namespace orbitlab {

/// A validated Cartan involution and its eigenspace split l = k ⊕ p.
struct CartanData {
  std::shared_ptr<const LieAlgebra> algebra;
  LinearMap theta;
  Subspace k;  // +1 eigenspace
  Subspace p;  // -1 eigenspace
  /// B_theta(X, Y) = -B(X, theta Y), positive definite.
  Matrix b_theta;
};

/// Checks theta^2 = Id, theta ∈ Aut(l), B_theta ≻ 0 and the bracket relations
/// of k, p. Throws CartanValidationError naming the first failure.
CartanData validate_cartan(std::shared_ptr<const LieAlgebra> algebra, const LinearMap& theta);

/// a = Z_p(A) for a random A ∈ p, retried until abelian and maximal.
Subspace maximal_abelian_subspace(const CartanData& cartan, std::uint64_t seed = kDefaultSeed);

struct RestrictedRoot {
  /// Values on the basis columns of a.
  Vector functional;
  Subspace space;
  int multiplicity = 0;
};

struct RootDecomposition {
  std::vector<RestrictedRoot> roots;  // nonzero functionals only
  Subspace l0;                        // joint kernel, m ⊕ a
};

/// Joint eigenspaces of {ad A : A ∈ a}. Functionals are clustered with radius
/// 10 * tolerance; clusters closer than 100 radii raise ClusteringError.
RootDecomposition restricted_roots(const CartanData& cartan, const Subspace& a,
                                   std::uint64_t seed = kDefaultSeed);

struct IwasawaData {
  CartanData cartan;
  Subspace a;
  std::vector<RestrictedRoot> roots;
  std::vector<int> positive_roots;
  Vector regular;
  Subspace l0;
  Subspace n;
  Subspace n_minus;
  Subspace m;
  Subspace q;      // minimal parabolic m ⊕ a ⊕ n
  Subspace borel;  // a ⊕ n
  bool split = false;
};

/// Positive system {λ : <regular, λ> > 0}. NotRegularError if `regular`
/// (normalized) meets a wall; AlgorithmFailure if an invariant fails.
IwasawaData iwasawa_assemble(const CartanData& cartan, const Subspace& a, const RootDecomposition& roots,
                             const Vector& regular);

/// maximal_abelian_subspace + restricted_roots + a seeded regular covector.
IwasawaData iwasawa_decompose(const CartanData& cartan, std::uint64_t seed = kDefaultSeed);

/// Root whose functional is within the clustering radius of `functional`, or -1.
int find_root(const std::vector<RestrictedRoot>& roots, const Vector& functional, double radius);

struct AppendixCReport {
  // Borel nilradicals span l
  bool span = false;
  int span_rank = 0;
  int samples_used = 0;
  // m ⊕ a ⊆ [n, θn]
  bool bracket_contains_ma = false;
  double bracket_residual = 0.0;
  // Z_m(n) = Z_a(n) = 0
  bool centralizers_trivial = false;
  int z_m_dim = 0;
  int z_a_dim = 0;
  double margin_m = 0.0;  // +inf when m = 0
  double margin_a = 0.0;
  // N_l(k) = k, infinitesimal form
  bool normalizer_k = false;
  int normalizer_dim = 0;

  bool all_pass() const { return span && bracket_contains_ma && centralizers_trivial && normalizer_k; }
};

inline constexpr double kCentralizerMargin = 1e-6;

/// PreconditionError when a simple ideal is compact (Killing form definite on it).
AppendixCReport verify_appendix_c(const IwasawaData& iwasawa, int samples = 8, std::uint64_t seed = kDefaultSeed);

/// Throws PreconditionError if some simple ideal of the semisimple algebra is compact.
void require_no_compact_factor(const LieAlgebra& l, std::uint64_t seed = kDefaultSeed);

}  // namespace orbitlab
