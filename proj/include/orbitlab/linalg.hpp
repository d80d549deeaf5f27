#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>

namespace orbitlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Orthonormal kernel basis plus the smallest singular value that was kept
/// out of it (+inf when the map has rank zero).
struct NullSpace {
  Matrix basis;
  double margin = std::numeric_limits<double>::infinity();
};

/// Singular values at or below tol * max(1, sigma_max) count as zero.
NullSpace null_space(const Matrix& m, double tol);

/// Orthonormal basis of the column span, same cutoff rule as null_space.
Matrix column_space(const Matrix& m, double tol);

int numerical_rank(const Matrix& m, double tol);

double max_abs(const Matrix& m);

/// Frobenius norm of the antisymmetric part relative to the matrix.
double symmetry_defect(const Matrix& m);

/// Matrix exponential (scaling and squaring, Pade).
Matrix expm(const Matrix& m);

/// Seeded source of the "generic" elements used by randomized algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Vector normal_vector(Eigen::Index n);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
  /// Uniformly random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
  Matrix orthogonal(Eigen::Index n);
  /// Symmetric positive definite matrix with eigenvalues in [lo, hi].
  Matrix spd(Eigen::Index n, double lo, double hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace orbitlab
