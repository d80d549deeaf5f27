#include "orbitlab/lie_algebra.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace orbitlab {

namespace {

void check_labels(int dim, std::vector<std::string>& labels) {
  if (dim <= 0) throw InputError("dimension must be positive");
  if (labels.empty()) {
    for (int i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels.size()) != dim) throw InputShapeError("basis label count differs from dim");
}

void check_tolerance(double tolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw InputError("tolerance must be positive");
}

}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<std::string> labels, const std::vector<BracketEntry>& brackets,
                       double tolerance)
    : dim_(dim), tolerance_(tolerance), labels_(std::move(labels)) {
  check_labels(dim_, labels_);
  check_tolerance(tolerance_);
  tensor_.assign(static_cast<std::size_t>(dim_) * dim_ * dim_, 0.0);
  for (const auto& e : brackets) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim_ || e.j >= dim_ || e.k >= dim_)
      throw InputShapeError("bracket index out of range");
    if (e.i >= e.j) throw InputError("bracket entries must satisfy i < j");
    if (!std::isfinite(e.c)) throw InputError("non-finite structure constant");
    tensor_[index(e.i, e.j, e.k)] += e.c;
    tensor_[index(e.j, e.i, e.k)] -= e.c;
  }
  finish_construction();
}

LieAlgebra::LieAlgebra(int dim, std::vector<std::string> labels, std::vector<double> tensor, double tolerance,
                       bool)
    : dim_(dim), tolerance_(tolerance), labels_(std::move(labels)), tensor_(std::move(tensor)) {
  check_labels(dim_, labels_);
  check_tolerance(tolerance_);
  if (tensor_.size() != static_cast<std::size_t>(dim_) * dim_ * dim_)
    throw InputShapeError("structure tensor has wrong size");
  double worst = 0.0;
  for (double v : tensor_)
    if (!std::isfinite(v)) throw InputError("non-finite structure constant");
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) worst = std::max(worst, std::abs(c(i, j, k) + c(j, i, k)));
  if (worst > tolerance_)
    throw InputError("structure constants are not antisymmetric (residual " + std::to_string(worst) + ")");
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        const double anti = 0.5 * (c(i, j, k) - c(j, i, k));
        tensor_[index(i, j, k)] = anti;
        tensor_[index(j, i, k)] = -anti;
      }
  finish_construction();
}

LieAlgebra LieAlgebra::from_tensor(int dim, std::vector<std::string> labels, std::vector<double> tensor,
                                   double tolerance) {
  return LieAlgebra(dim, std::move(labels), std::move(tensor), tolerance, true);
}

void LieAlgebra::finish_construction() {
  double cmax = 0.0;
  for (double v : tensor_) cmax = std::max(cmax, std::abs(v));
  scale_ = 1.0 + cmax;

  ad_basis_.assign(static_cast<std::size_t>(dim_), Matrix::Zero(dim_, dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) ad_basis_[static_cast<std::size_t>(i)](k, j) = c(i, j, k);

  int wi = 0, wj = 0, wk = 0;
  const double jac = jacobi_residual(&wi, &wj, &wk);
  if (jac > residual_tolerance()) throw JacobiError(wi, wj, wk, jac);
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw InputShapeError("bracket operands must have length dim");
  return ad(x) * y;
}

Matrix LieAlgebra::ad(const Vector& x) const {
  if (x.size() != dim_) throw InputShapeError("ad operand must have length dim");
  Matrix out = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x(i) != 0.0) out += x(i) * ad_basis_[static_cast<std::size_t>(i)];
  return out;
}

std::vector<BracketEntry> LieAlgebra::brackets() const {
  std::vector<BracketEntry> out;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (c(i, j, k) != 0.0) out.push_back({i, j, k, c(i, j, k)});
  return out;
}

double LieAlgebra::jacobi_residual(int* wi, int* wj, int* wk) const {
  double worst = 0.0;
  // [[e_i,e_j],e_k] = sum_a c(i,j,a) [e_a, e_k]
  auto outer = [&](int i, int j, int k) {
    Vector v = Vector::Zero(dim_);
    for (int a = 0; a < dim_; ++a) {
      const double cij = c(i, j, a);
      if (cij != 0.0) v += cij * ad_basis_[static_cast<std::size_t>(a)].col(k);
    }
    return v;
  };
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        const double r = (outer(i, j, k) + outer(j, k, i) + outer(k, i, j)).norm();
        if (r > worst) {
          worst = r;
          if (wi) *wi = i;
          if (wj) *wj = j;
          if (wk) *wk = k;
        }
      }
  return worst;
}

LieAlgebra LieAlgebra::with_tolerance(double tolerance) const {
  return from_tensor(dim_, labels_, tensor_, tolerance);
}

LinearMap::LinearMap(Matrix m, std::string desc) : matrix(std::move(m)), description(std::move(desc)) {
  if (matrix.rows() != matrix.cols()) throw InputShapeError("linear map must be square");
  if (!matrix.allFinite()) throw InputError("linear map has non-finite entries");
}

LieAlgebra algebra_from_matrices(const std::vector<Matrix>& basis, std::vector<std::string> labels,
                                 double tolerance) {
  const int dim = static_cast<int>(basis.size());
  if (dim == 0) throw InputError("empty matrix basis");
  const Eigen::Index m = basis.front().rows();
  Matrix stacked(m * m, dim);
  for (int i = 0; i < dim; ++i) stacked.col(i) = basis[static_cast<std::size_t>(i)].reshaped();
  Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
  if (qr.rank() != dim) throw InputError("matrix basis is linearly dependent");

  std::vector<double> tensor(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Matrix& x = basis[static_cast<std::size_t>(i)];
      const Matrix& y = basis[static_cast<std::size_t>(j)];
      const Matrix comm = x * y - y * x;
      const Vector flat = comm.reshaped();
      const Vector coords = qr.solve(flat);
      if ((stacked * coords - flat).norm() > tolerance * std::max(1.0, flat.norm()))
        throw InputError("matrix basis is not closed under commutators");
      for (int k = 0; k < dim; ++k) {
        // snap round-off so exact zeros stay exact
        const double v = std::abs(coords(k)) < 1e-14 ? 0.0 : coords(k);
        tensor[(static_cast<std::size_t>(i) * dim + j) * dim + k] = v;
      }
    }
  return LieAlgebra::from_tensor(dim, std::move(labels), std::move(tensor), tolerance);
}

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  const int n = a.dim() + b.dim();
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) labels.push_back(l + "'");
  std::vector<BracketEntry> entries = a.brackets();
  for (auto e : b.brackets()) {
    e.i += a.dim();
    e.j += a.dim();
    e.k += a.dim();
    entries.push_back(e);
  }
  return LieAlgebra(n, std::move(labels), entries, std::max(a.tolerance(), b.tolerance()));
}

}  // namespace orbitlab
