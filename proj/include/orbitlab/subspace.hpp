#pragma once

#include "orbitlab/linalg.hpp"

namespace orbitlab {

/// Linear subspace of R^n stored by an orthonormal column basis.
///
/// Construction from an arbitrary spanning set discards numerically dependent
/// directions (singular values <= tol * max(1, sigma_max)), so the stored
/// columns are always independent.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(int ambient_dim);
  static Subspace whole(int ambient_dim);
  static Subspace span(const Matrix& spanning, double tol);
  /// Columns that are already orthonormal; not re-checked.
  static Subspace from_orthonormal(Matrix basis);

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  bool is_zero() const { return dim() == 0; }

  Matrix projector() const { return basis_ * basis_.transpose(); }
  /// Norm of the component of v orthogonal to the subspace.
  double distance(const Vector& v) const;
  /// Largest distance() over the columns of `vectors`.
  double max_distance(const Matrix& vectors) const;
  bool contains(const Vector& v, double tol) const;
  bool contains(const Subspace& other, double tol) const;
  bool equals(const Subspace& other, double tol) const;

  Subspace orthogonal_complement(double tol) const;
  /// Image of the subspace under a linear map.
  Subspace image(const Matrix& map, double tol) const;

 private:
  explicit Subspace(int ambient, Matrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

  int ambient_ = 0;
  Matrix basis_;
};

Subspace sum(const Subspace& a, const Subspace& b, double tol);
Subspace intersection(const Subspace& a, const Subspace& b, double tol);

}  // namespace orbitlab
