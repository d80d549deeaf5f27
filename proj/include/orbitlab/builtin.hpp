#pragma once

#include "orbitlab/lie_algebra.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace orbitlab {

/// A named example algebra with whatever extra structure ships with it.
struct BuiltinAlgebra {
  std::string name;
  LieAlgebra algebra;
  /// Cartan involution for the semisimple families.
  std::optional<LinearMap> theta;
  /// Curated stratum label for the Heisenberg family.
  std::optional<Matrix> beta;
};

/// Families: sl [n], so_pq (alias so) [p, q], heisenberg [2m+1], abelian [n], borel_sl2 [].
///
/// sl(n) uses the basis H_1..H_{n-1} (H_k = E_kk - E_{k+1,k+1}) followed by
/// E_ij, E_ji for i < j; sl(2) is labelled H, E, F. so(p,q) preserves
/// diag(I_p, -I_q) and uses E_ij - E_ji / E_ij + E_ji. Both carry
/// theta(X) = -X^T.
BuiltinAlgebra builtin_algebra(std::string_view name, std::span<const int> params,
                               double tolerance = LieAlgebra::kDefaultTolerance);

/// "sl:3", "so:2,3", "heisenberg:3", "abelian:4", "borel_sl2", and direct
/// sums joined by '+', e.g. "sl:2+so:3,0".
BuiltinAlgebra parse_builtin(std::string_view spec, double tolerance = LieAlgebra::kDefaultTolerance);

}  // namespace orbitlab
