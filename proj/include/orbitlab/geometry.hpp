#pragma once

#include "orbitlab/lie_algebra.hpp"
#include "orbitlab/volume.hpp"

#include <optional>

namespace orbitlab {

/// Left-invariant metric: a positive definite Gram matrix on a Lie algebra.
struct Metric {
  Matrix gram;

  /// InputShapeError / InputError unless gram is a symmetric positive definite dim x dim matrix.
  static Metric make(const LieAlgebra& l, const Matrix& gram);
  static Metric standard(const LieAlgebra& l) { return make(l, Matrix::Identity(l.dim(), l.dim())); }
};

inline constexpr double kMaxMetricCondition = 1e12;

/// H with <H, X> = tr(ad X), in stored coordinates.
Vector mean_curvature_element(const LieAlgebra& l, const Metric& m);

/// Checks of a soliton fit against a stratum label, all scale invariant.
struct LabelCheck {
  /// max |D / tr D - beta^+ / tr beta^+| (stored basis).
  double proportionality_residual = 0.0;
  /// |scal / c - (dim - tr beta^+)|
  double scalar_ratio_residual = 0.0;
  bool c_negative = false;
  bool derivation = false;
  bool pass = false;
};

struct SolitonFit {
  double c = 0.0;
  /// Derivation part, as an endomorphism in stored coordinates.
  Matrix d;
  /// Frobenius norm of Ric - c Id - D in an orthonormal frame.
  double residual = 0.0;
  double derivation_residual = 0.0;
  bool pass = false;
  std::optional<LabelCheck> label;
};

struct CurvatureReport {
  /// Ricci endomorphism in stored coordinates (self-adjoint for the metric).
  Matrix ricci;
  double scalar = 0.0;
  Vector mean_curvature;
  /// || Ric - (scal / dim) Id || in an orthonormal frame.
  double einstein_residual = 0.0;
  std::optional<SolitonFit> soliton;
};

/// Structure-constant formula in an orthonormal frame, including the
/// mean-curvature term for non-unimodular algebras. ConditioningError if
/// cond(gram) > kMaxMetricCondition.
CurvatureReport ricci_left_invariant(const LieAlgebra& l, const Metric& m);

/// Least-squares fit Ric ≈ c Id + D over D ∈ Der(l) (minimum-norm solution).
/// PreconditionError unless l is nilpotent.
CurvatureReport nilsoliton_certificate(const LieAlgebra& l, const Metric& m,
                                       const std::optional<StratumLabel>& label = std::nullopt);

}  // namespace orbitlab
