#pragma once

#include "orbitlab/lie_algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbitlab {

/// Nondecreasing weights w_1 <= ... <= w_d and the flag of equal-weight blocks.
/// The parabolic group Q_W is the group of invertible block-lower-triangular
/// matrices for that flag; K_W its block-orthogonal part.
class WeightVector {
 public:
  struct Block {
    int start = 0;
    int size = 0;
    double weight = 0.0;
  };

  WeightVector() = default;
  /// InputError if the weights decrease or the blocks are ambiguous
  /// (a chain of near-equal weights whose ends differ by more than tol).
  WeightVector(std::vector<double> weights, double tol = LieAlgebra::kDefaultTolerance);
  static WeightVector constant(int dim, double w, double tol = LieAlgebra::kDefaultTolerance);

  int dim() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  double tolerance() const { return tol_; }
  double sum() const;
  bool all_positive() const;
  /// Index of the block containing position i.
  int block_of(int i) const;

 private:
  std::vector<double> weights_;
  std::vector<Block> blocks_;
  double tol_ = LieAlgebra::kDefaultTolerance;
};

/// A symmetric positive semi-definite Gram matrix.
struct InnerProduct {
  Matrix gram;
  bool definite = false;
  double min_eigenvalue = 0.0;

  int dim() const { return static_cast<int>(gram.rows()); }

  /// InputShapeError if not square; InputError if not symmetric or if an
  /// eigenvalue is below -tol. Definite means smallest eigenvalue > tol.
  static InnerProduct make(const Matrix& gram, double tol = LieAlgebra::kDefaultTolerance);
  static InnerProduct identity(int dim);
};

/// Lower-triangular q with positive diagonal and h = q . background, i.e.
/// gram(h) = (q q^T)^{-1} in a background-orthonormal basis.
struct TriangularGauge {
  Matrix q;
  /// Positions of the stored basis used for the gauge, in gauge order.
  std::vector<int> basis_order;
  /// max |q^T H q - I| in the background-orthonormal frame.
  double residual = 0.0;
};

struct StratumLabel {
  Matrix beta;
  Matrix beta_plus;
};

struct ParabolicFactorization {
  bool in_q = false;
  /// Block-diagonal part.
  Matrix g;
  /// Unipotent block-lower part, q = g u.
  Matrix u;
};

/// Tests q ∈ Q_W and factors q = g u. InputError if q is singular.
ParabolicFactorization parabolic_membership(const Matrix& q, const WeightVector& w);

/// Block-lower-triangular test for the Lie algebra q_W.
bool in_parabolic_algebra(const Matrix& a, const WeightVector& w);

/// trace(A diag(W)); PreconditionError unless A ∈ q_W.
double tr_weighted(const Matrix& a, const WeightVector& w);

/// prod over blocks of |det g_i|^{w_i}; PreconditionError unless q ∈ Q_W.
double det_weighted(const Matrix& q, const WeightVector& w);

/// Canonical gauge. The background-orthonormal frame is built by Gram-Schmidt
/// from the last basis vector backwards, so q comes out lower triangular.
/// DegenerateError if h is not definite; PreconditionError if the background
/// is not definite. An empty basis_order means the stored order.
TriangularGauge gauge_lower_triangular(const InnerProduct& h, const InnerProduct& background,
                                       const std::vector<int>& basis_order = {});

struct VolumeDensity {
  double value = 0.0;
  bool degenerate = false;
  /// All weights > 0, so the value extends continuously to the boundary.
  bool continuity = false;
  /// Diagonal of the gauge (empty when degenerate).
  Vector gauge_diag;
  std::vector<std::string> warnings;
};

/// v_W(h) = det_{-W}(q) = det_W(q)^{-1}; 0 on degenerate h.
VolumeDensity v_weighted(const InnerProduct& h, const InnerProduct& background, const WeightVector& w,
                         const std::vector<int>& basis_order = {});

/// sqrt(det gram(h)).
double orbit_density_vN(const InnerProduct& h);

/// beta^+ = beta / tr(beta^2) + Id. InputError if tr(beta^2) <= tol, StratumError
/// if beta^+ is not positive definite or (when an algebra is given) not a derivation.
StratumLabel beta_plus_from_beta(const Matrix& beta, const LieAlgebra* algebra = nullptr,
                                 double tol = LieAlgebra::kDefaultTolerance);

/// Weights of beta^+ and the frame they refer to.
struct LabelFrame {
  WeightVector weights;
  /// Columns are the new basis vectors in stored coordinates.
  Matrix change;
  /// Set when beta^+ is diagonal and the frame is a permutation.
  std::vector<int> basis_order;
  bool diagonal = false;
};

/// Diagonal beta^+: stable sort of its diagonal. Otherwise: eigenvectors of beta^+
/// (ascending eigenvalues), assumed self-adjoint for the background.
LabelFrame label_frame(const StratumLabel& label, double tol = LieAlgebra::kDefaultTolerance);

/// Inner product in a new basis: C^T G C.
InnerProduct change_basis(const InnerProduct& h, const Matrix& change, double tol = LieAlgebra::kDefaultTolerance);

/// v_{beta^+}(h) relative to the background.
VolumeDensity v_beta_plus(const InnerProduct& h, const InnerProduct& background, const StratumLabel& label,
                          double tol = LieAlgebra::kDefaultTolerance);

struct EquivarianceResult {
  double lhs = 0.0;  // v(phi . h)
  double rhs = 0.0;  // det(phi)^{-1} v(h)
  double residual = 0.0;
  bool pass = false;
};

/// phi . h = h(phi^{-1} ., phi^{-1} .). PreconditionError unless phi ∈ Aut(algebra).
EquivarianceResult equivariance_check(const InnerProduct& h, const Matrix& phi, const LieAlgebra& algebra,
                                      const StratumLabel& label, const InnerProduct& background);

/// Pushforward gram: phi^{-T} G phi^{-1}.
Matrix pushforward_gram(const Matrix& gram, const Matrix& phi);

}  // namespace orbitlab
