#include "orbitlab/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace orbitlab {

namespace {

double cutoff(const Vector& singular_values, double tol) {
  const double top = singular_values.size() > 0 ? singular_values(0) : 0.0;
  return tol * std::max(1.0, top);
}

}  // namespace

NullSpace null_space(const Matrix& m, double tol) {
  const Eigen::Index cols = m.cols();
  NullSpace out;
  if (cols == 0) {
    out.basis = Matrix(0, 0);
    return out;
  }
  if (m.rows() == 0) {
    out.basis = Matrix::Identity(cols, cols);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cut = cutoff(sv, tol);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  if (rank > 0) out.margin = sv(rank - 1);
  out.basis = svd.matrixV().rightCols(cols - rank);
  return out;
}

Matrix column_space(const Matrix& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  const double cut = cutoff(sv, tol);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

int numerical_rank(const Matrix& m, double tol) {
  return static_cast<int>(column_space(m, tol).cols());
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double symmetry_defect(const Matrix& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.transpose()).norm() / (2.0 * norm);
}

Matrix expm(const Matrix& m) {
  return m.exp();
}

Vector Rng::normal_vector(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  // column-major fill keeps the draw order stable across Eigen versions
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
  return m;
}

Matrix Rng::orthogonal(Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(normal_matrix(n, n));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

Matrix Rng::spd(Eigen::Index n, double lo, double hi) {
  const Matrix q = orthogonal(n);
  Vector eig(n);
  for (Eigen::Index i = 0; i < n; ++i) eig(i) = uniform(lo, hi);
  Matrix s = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

}  // namespace orbitlab
