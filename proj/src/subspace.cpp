#include "orbitlab/subspace.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>

namespace orbitlab {

Subspace Subspace::zero(int ambient_dim) { return Subspace(ambient_dim, Matrix(ambient_dim, 0)); }

Subspace Subspace::whole(int ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span(const Matrix& spanning, double tol) {
  const int n = static_cast<int>(spanning.rows());
  return Subspace(n, column_space(spanning, tol));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  const int n = static_cast<int>(basis.rows());
  return Subspace(n, std::move(basis));
}

double Subspace::distance(const Vector& v) const {
  if (v.size() != ambient_) throw InputShapeError("vector length does not match ambient dimension");
  if (is_zero()) return v.norm();
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

double Subspace::max_distance(const Matrix& vectors) const {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) worst = std::max(worst, distance(vectors.col(j)));
  return worst;
}

bool Subspace::contains(const Vector& v, double tol) const {
  return distance(v) <= tol * std::max(1.0, v.norm());
}

bool Subspace::contains(const Subspace& other, double tol) const {
  return max_distance(other.basis()) <= tol;
}

bool Subspace::equals(const Subspace& other, double tol) const {
  return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

Subspace Subspace::orthogonal_complement(double tol) const {
  if (is_zero()) return whole(ambient_);
  return Subspace(ambient_, null_space(basis_.transpose(), tol).basis);
}

Subspace Subspace::image(const Matrix& map, double tol) const {
  if (map.cols() != ambient_) throw InputShapeError("map does not act on the ambient space");
  return span(map * basis_, tol);
}

Subspace sum(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputShapeError("subspaces live in different spaces");
  Matrix joined(a.ambient_dim(), a.dim() + b.dim());
  joined << a.basis(), b.basis();
  return Subspace::span(joined, tol);
}

Subspace intersection(const Subspace& a, const Subspace& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputShapeError("subspaces live in different spaces");
  if (a.is_zero() || b.is_zero()) return Subspace::zero(a.ambient_dim());
  // x = A s lies in B  <=>  (I - P_B) A s = 0
  const Matrix residual = a.basis() - b.basis() * (b.basis().transpose() * a.basis());
  const NullSpace ns = null_space(residual, tol);
  return Subspace::span(a.basis() * ns.basis, tol);
}

}  // namespace orbitlab
