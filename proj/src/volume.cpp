#include "orbitlab/volume.hpp"

#include "orbitlab/errors.hpp"
#include "orbitlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace orbitlab {

namespace {

// X = P^T P with P lower triangular and positive diagonal (Cholesky run from
// the last coordinate backwards). Returns nullopt if X is not definite.
std::optional<Matrix> reverse_cholesky(const Matrix& x) {
  const Matrix flipped = x.reverse();
  Eigen::LLT<Matrix> llt(flipped);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Matrix l = llt.matrixL();
  return Matrix(l.transpose().reverse());
}

Matrix permuted(const Matrix& g, const std::vector<int>& order) {
  const auto n = static_cast<Eigen::Index>(order.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = g(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  return out;
}

std::vector<int> resolve_order(const std::vector<int>& order, int dim) {
  if (order.empty()) {
    std::vector<int> id(static_cast<std::size_t>(dim));
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  if (static_cast<int>(order.size()) != dim) throw InputShapeError("basis_order must have length dim");
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < dim; ++i)
    if (sorted[static_cast<std::size_t>(i)] != i) throw InputError("basis_order is not a permutation");
  return order;
}

double block_scale(const Matrix& q) { return std::max(1.0, max_abs(q)); }

}  // namespace

WeightVector::WeightVector(std::vector<double> weights, double tol) : weights_(std::move(weights)), tol_(tol) {
  if (weights_.empty()) throw InputError("weights must be nonempty");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i])) throw InputError("weights must be finite");
    if (i > 0 && weights_[i] < weights_[i - 1] - tol)
      throw InputError("weights must be nondecreasing (position " + std::to_string(i) + ")");
  }
  for (int i = 0; i < dim(); ++i) {
    const double w = weights_[static_cast<std::size_t>(i)];
    if (!blocks_.empty() && std::abs(w - blocks_.back().weight) <= tol) {
      ++blocks_.back().size;
      continue;
    }
    if (!blocks_.empty() && std::abs(w - weights_[static_cast<std::size_t>(i - 1)]) <= tol)
      throw InputError("weights form an ambiguous near-equal chain at position " + std::to_string(i));
    blocks_.push_back({i, 1, w});
  }
}

WeightVector WeightVector::constant(int dim, double w, double tol) {
  return WeightVector(std::vector<double>(static_cast<std::size_t>(dim), w), tol);
}

double WeightVector::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

bool WeightVector::all_positive() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; });
}

int WeightVector::block_of(int i) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (i >= blocks_[b].start && i < blocks_[b].start + blocks_[b].size) return static_cast<int>(b);
  throw InputError("position outside the weight vector");
}

InnerProduct InnerProduct::make(const Matrix& gram, double tol) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) throw InputShapeError("gram must be a nonempty square matrix");
  if (!gram.allFinite()) throw InputError("gram has non-finite entries");
  const double asym = max_abs(gram - gram.transpose());
  if (asym > tol * std::max(1.0, max_abs(gram))) {
    std::ostringstream msg;
    msg << "gram is not symmetric (max asymmetry " << asym << ")";
    throw InputError(msg.str());
  }
  InnerProduct out;
  out.gram = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.gram, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (out.min_eigenvalue < -tol) {
    std::ostringstream msg;
    msg << "gram is not positive semi-definite (smallest eigenvalue " << out.min_eigenvalue << ")";
    throw InputError(msg.str());
  }
  out.definite = out.min_eigenvalue > tol;
  return out;
}

InnerProduct InnerProduct::identity(int dim) { return make(Matrix::Identity(dim, dim)); }

bool in_parabolic_algebra(const Matrix& a, const WeightVector& w) {
  if (a.rows() != w.dim() || a.cols() != w.dim()) throw InputShapeError("matrix and weights differ in dimension");
  const double bound = w.tolerance() * block_scale(a);
  for (int i = 0; i < w.dim(); ++i)
    for (int j = 0; j < w.dim(); ++j)
      if (w.block_of(j) > w.block_of(i) && std::abs(a(i, j)) > bound) return false;
  return true;
}

ParabolicFactorization parabolic_membership(const Matrix& q, const WeightVector& w) {
  if (q.rows() != w.dim() || q.cols() != w.dim()) throw InputShapeError("matrix and weights differ in dimension");
  Eigen::FullPivLU<Matrix> lu(q);
  lu.setThreshold(w.tolerance());
  if (!lu.isInvertible()) throw InputError("q is singular");
  ParabolicFactorization out;
  out.in_q = in_parabolic_algebra(q, w);
  if (!out.in_q) return out;
  out.g = Matrix::Zero(q.rows(), q.cols());
  for (const auto& b : w.blocks()) out.g.block(b.start, b.start, b.size, b.size) = q.block(b.start, b.start, b.size, b.size);
  out.u = out.g.partialPivLu().solve(q);
  // Exact zeros above the blocks and identity on them.
  for (const auto& b : w.blocks()) {
    out.u.block(b.start, b.start, b.size, b.size).setIdentity();
    const int after = b.start + b.size;
    out.u.block(b.start, after, b.size, w.dim() - after).setZero();
  }
  return out;
}

double tr_weighted(const Matrix& a, const WeightVector& w) {
  if (!in_parabolic_algebra(a, w)) throw PreconditionError("matrix is not block-lower-triangular for the weight flag");
  double t = 0.0;
  for (int i = 0; i < w.dim(); ++i) t += a(i, i) * w.weights()[static_cast<std::size_t>(i)];
  return t;
}

double det_weighted(const Matrix& q, const WeightVector& w) {
  const ParabolicFactorization f = parabolic_membership(q, w);
  if (!f.in_q) throw PreconditionError("q is not in the parabolic group Q_W");
  double log_det = 0.0;
  for (const auto& b : w.blocks()) {
    const double d = f.g.block(b.start, b.start, b.size, b.size).partialPivLu().determinant();
    log_det += b.weight * std::log(std::abs(d));
  }
  return std::exp(log_det);
}

TriangularGauge gauge_lower_triangular(const InnerProduct& h, const InnerProduct& background,
                                       const std::vector<int>& basis_order) {
  if (h.dim() != background.dim()) throw InputShapeError("h and background differ in dimension");
  if (!background.definite) throw PreconditionError("background inner product is not definite");
  if (!h.definite) {
    std::ostringstream msg;
    msg << "h is not definite (smallest eigenvalue " << h.min_eigenvalue << ")";
    throw DegenerateError(msg.str());
  }
  TriangularGauge out;
  out.basis_order = resolve_order(basis_order, h.dim());
  const Matrix hg = permuted(h.gram, out.basis_order);
  const Matrix bg = permuted(background.gram, out.basis_order);
  const auto ph = reverse_cholesky(hg);
  const auto pb = reverse_cholesky(bg);
  if (!ph) throw DegenerateError("triangular factorization of h failed");
  if (!pb) throw PreconditionError("triangular factorization of the background failed");
  // Frame F = P_B^{-1}; h in that frame is (P_H F)^T (P_H F), so q = (P_H F)^{-1} = P_B P_H^{-1}.
  const Matrix ph_inv = ph->triangularView<Eigen::Lower>().solve(Matrix::Identity(hg.rows(), hg.cols()));
  out.q = (*pb * ph_inv).triangularView<Eigen::Lower>();
  const Matrix frame = pb->triangularView<Eigen::Lower>().solve(Matrix::Identity(hg.rows(), hg.cols()));
  const Matrix hf = frame.transpose() * hg * frame;
  out.residual = max_abs(out.q.transpose() * hf * out.q - Matrix::Identity(hg.rows(), hg.cols()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(hf, Eigen::EigenvaluesOnly);
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  const double allowed = std::max(LieAlgebra::kDefaultTolerance, 256.0 * std::numeric_limits<double>::epsilon() * cond);
  if (out.residual > allowed) {
    std::ostringstream msg;
    msg << "gauge reconstruction residual " << out.residual << " exceeds " << allowed;
    throw AlgorithmFailure(msg.str());
  }
  return out;
}

VolumeDensity v_weighted(const InnerProduct& h, const InnerProduct& background, const WeightVector& w,
                         const std::vector<int>& basis_order) {
  if (w.dim() != h.dim()) throw InputShapeError("weights and inner product differ in dimension");
  if (!background.definite) throw PreconditionError("background inner product is not definite");
  VolumeDensity out;
  out.continuity = w.all_positive();
  if (!out.continuity) out.warnings.push_back("some weight is <= 0: no continuous extension to degenerate h");
  if (!h.definite) {
    out.degenerate = true;
    if (h.min_eigenvalue > 0.0) {
      std::ostringstream msg;
      msg << "smallest eigenvalue " << h.min_eigenvalue << " is within tolerance of 0; treated as degenerate";
      out.warnings.push_back(msg.str());
    }
    return out;
  }
  const TriangularGauge g = gauge_lower_triangular(h, background, basis_order);
  out.gauge_diag = g.q.diagonal();
  out.value = 1.0 / det_weighted(g.q, w);
  return out;
}

double orbit_density_vN(const InnerProduct& h) {
  const double det = h.gram.partialPivLu().determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

StratumLabel beta_plus_from_beta(const Matrix& beta, const LieAlgebra* algebra, double tol) {
  if (beta.rows() != beta.cols() || beta.rows() == 0) throw InputShapeError("beta must be a nonempty square matrix");
  if (!beta.allFinite()) throw InputError("beta has non-finite entries");
  if (algebra && algebra->dim() != beta.rows()) throw InputShapeError("beta and algebra differ in dimension");
  if (max_abs(beta - beta.transpose()) > tol * std::max(1.0, max_abs(beta))) throw InputError("beta is not symmetric");
  StratumLabel out;
  out.beta = 0.5 * (beta + beta.transpose());
  const double t = (out.beta * out.beta).trace();
  if (t <= tol) throw InputError("tr(beta^2) vanishes");
  const auto d = beta.rows();
  out.beta_plus = out.beta / t + Matrix::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.beta_plus, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= tol) {
    std::ostringstream msg;
    msg << "beta^+ is not positive definite (smallest eigenvalue " << es.eigenvalues().minCoeff() << ")";
    throw StratumError(msg.str());
  }
  const double trace_gap = std::abs(out.beta_plus.trace() - (out.beta.trace() / t + static_cast<double>(d)));
  if (trace_gap > tol * std::max(1.0, std::abs(out.beta_plus.trace()))) throw StratumError("tr(beta^+) inconsistent");
  if (algebra) {
    const double r = derivation_residual(*algebra, out.beta_plus);
    if (r > algebra->residual_tolerance() * std::max(1.0, max_abs(out.beta_plus))) {
      std::ostringstream msg;
      msg << "beta^+ is not a derivation of the algebra (residual " << r << ")";
      throw StratumError(msg.str());
    }
  }
  return out;
}

LabelFrame label_frame(const StratumLabel& label, double tol) {
  const Matrix& bp = label.beta_plus;
  const auto d = bp.rows();
  LabelFrame out;
  Matrix off = bp;
  off.diagonal().setZero();
  out.diagonal = max_abs(off) <= tol * std::max(1.0, max_abs(bp));
  if (out.diagonal) {
    out.basis_order.resize(static_cast<std::size_t>(d));
    std::iota(out.basis_order.begin(), out.basis_order.end(), 0);
    std::stable_sort(out.basis_order.begin(), out.basis_order.end(),
                     [&](int a, int b) { return bp(a, a) < bp(b, b); });
    std::vector<double> w;
    out.change = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
      const int src = out.basis_order[static_cast<std::size_t>(k)];
      w.push_back(bp(src, src));
      out.change(src, k) = 1.0;
    }
    out.weights = WeightVector(w, tol);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (bp + bp.transpose()));
  out.change = es.eigenvectors();
  const Vector ev = es.eigenvalues();
  out.weights = WeightVector(std::vector<double>(ev.data(), ev.data() + ev.size()), tol);
  return out;
}

InnerProduct change_basis(const InnerProduct& h, const Matrix& change, double tol) {
  return InnerProduct::make(change.transpose() * h.gram * change, tol);
}

VolumeDensity v_beta_plus(const InnerProduct& h, const InnerProduct& background, const StratumLabel& label,
                          double tol) {
  const LabelFrame frame = label_frame(label, tol);
  if (frame.diagonal) return v_weighted(h, background, frame.weights, frame.basis_order);
  // h and the background move together, so only the flag changes.
  return v_weighted(change_basis(h, frame.change, tol), change_basis(background, frame.change, tol), frame.weights);
}

Matrix pushforward_gram(const Matrix& gram, const Matrix& phi) {
  const Matrix inv = phi.partialPivLu().inverse();
  const Matrix g = inv.transpose() * gram * inv;
  return 0.5 * (g + g.transpose());
}

EquivarianceResult equivariance_check(const InnerProduct& h, const Matrix& phi, const LieAlgebra& algebra,
                                      const StratumLabel& label, const InnerProduct& background) {
  if (phi.rows() != algebra.dim() || phi.cols() != algebra.dim()) throw InputShapeError("phi must be dim x dim");
  const double tol = algebra.tolerance();
  const double aut = automorphism_residual(algebra, phi);
  const double phi_scale = std::max(1.0, max_abs(phi));
  if (aut > algebra.residual_tolerance() * phi_scale * phi_scale) {
    std::ostringstream msg;
    msg << "phi is not an automorphism (residual " << aut << ")";
    throw PreconditionError(msg.str());
  }
  if (!h.definite) throw PreconditionError("h must be definite");
  const double det = phi.partialPivLu().determinant();
  if (std::abs(det) <= tol) throw PreconditionError("phi is singular");
  const InnerProduct h2 = InnerProduct::make(pushforward_gram(h.gram, phi), tol);
  EquivarianceResult out;
  out.lhs = v_beta_plus(h2, background, label, tol).value;
  out.rhs = v_beta_plus(h, background, label, tol).value / std::abs(det);
  out.residual = std::abs(out.lhs - out.rhs);
  out.pass = out.residual <= tol * std::max({1.0, std::abs(out.lhs), std::abs(out.rhs)});
  return out;
}

}  // namespace orbitlab
