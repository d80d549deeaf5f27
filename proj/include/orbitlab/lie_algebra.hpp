#pragma once

#include "orbitlab/linalg.hpp"

#include <string>
#include <vector>

namespace orbitlab {

/// One structure constant [e_i, e_j] ∋ c e_k with i < j.
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

/// Finite-dimensional real Lie algebra given by structure constants over a
/// fixed basis: [e_i, e_j] = sum_k c(i, j, k) e_k.
///
/// Instances are immutable. Construction antisymmetrizes the tensor and
/// rejects input whose Jacobi residual exceeds tolerance * (1 + max|c|)^2.
class LieAlgebra {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  /// From upper-triangular entries (i < j); antisymmetry is implied.
  LieAlgebra(int dim, std::vector<std::string> labels, const std::vector<BracketEntry>& brackets,
             double tolerance = kDefaultTolerance);

  /// From the full tensor, index (i * dim + j) * dim + k. The tensor must
  /// already be antisymmetric to within `tolerance`.
  static LieAlgebra from_tensor(int dim, std::vector<std::string> labels, std::vector<double> tensor,
                                double tolerance = kDefaultTolerance);

  int dim() const { return dim_; }
  double tolerance() const { return tolerance_; }
  const std::vector<std::string>& labels() const { return labels_; }
  double c(int i, int j, int k) const { return tensor_[index(i, j, k)]; }

  /// 1 + max|c|; bracket-level residuals are compared against tolerance * scale^2.
  double scale() const { return scale_; }
  double residual_tolerance() const { return tolerance_ * scale_ * scale_; }

  Vector bracket(const Vector& x, const Vector& y) const;
  /// Matrix of ad X in the stored basis: column j holds [X, e_j].
  Matrix ad(const Vector& x) const;
  const Matrix& ad_basis(int i) const { return ad_basis_[static_cast<std::size_t>(i)]; }

  /// Nonzero entries with i < j, ordered by (i, j, k).
  std::vector<BracketEntry> brackets() const;

  /// Max over basis triples of |cyclic Jacobi sum|, plus the worst triple.
  double jacobi_residual(int* wi = nullptr, int* wj = nullptr, int* wk = nullptr) const;

  LieAlgebra with_tolerance(double tolerance) const;

 private:
  LieAlgebra(int dim, std::vector<std::string> labels, std::vector<double> tensor, double tolerance, bool);
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }
  void finish_construction();

  int dim_ = 0;
  double tolerance_ = kDefaultTolerance;
  double scale_ = 1.0;
  std::vector<std::string> labels_;
  std::vector<double> tensor_;
  std::vector<Matrix> ad_basis_;
};

/// A linear endomorphism of a Lie algebra (ad X, theta, beta, derivations...).
struct LinearMap {
  LinearMap() = default;
  LinearMap(Matrix m, std::string desc);

  Matrix matrix;
  std::string description;
};

/// Structure constants of an algebra of matrices closed under commutators.
/// `basis` must be linearly independent; brackets are expanded by least squares.
LieAlgebra algebra_from_matrices(const std::vector<Matrix>& basis, std::vector<std::string> labels,
                                 double tolerance = LieAlgebra::kDefaultTolerance);

/// l1 ⊕ l2 with block basis (l1 first).
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

}  // namespace orbitlab
