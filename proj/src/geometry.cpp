#include "orbitlab/geometry.hpp"

#include "orbitlab/errors.hpp"
#include "orbitlab/structure.hpp"

#include <cmath>
#include <sstream>

namespace orbitlab {

namespace {

// Columns form an orthonormal basis for the metric: F^T G F = Id, F = L^{-T}.
Matrix orthonormal_frame(const Metric& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.gram, Eigen::EigenvaluesOnly);
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  if (!(cond <= kMaxMetricCondition)) {
    std::ostringstream msg;
    msg << "metric condition number " << cond << " exceeds " << kMaxMetricCondition;
    throw ConditioningError(msg.str());
  }
  Eigen::LLT<Matrix> llt(m.gram);
  const Matrix lower = llt.matrixL();
  return lower.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(m.gram.rows(), m.gram.cols()));
}

// ad matrices of the frame vectors, expressed in the frame.
std::vector<Matrix> frame_ad(const LieAlgebra& l, const Matrix& frame, const Matrix& frame_inv) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(l.dim()));
  for (int k = 0; k < l.dim(); ++k) out.push_back(frame_inv * l.ad(frame.col(k)) * frame);
  return out;
}

// Ricci form in an orthonormal frame.
Matrix ricci_in_frame(const std::vector<Matrix>& ad) {
  const auto n = static_cast<Eigen::Index>(ad.size());
  Matrix ric = Matrix::Zero(n, n);
  Vector h(n);
  for (Eigen::Index a = 0; a < n; ++a) h(a) = ad[static_cast<std::size_t>(a)].trace();
  Matrix ad_h = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) ad_h += h(a) * ad[static_cast<std::size_t>(a)];
  // sum_{i,j} <[x_i, x_j], x_a> <[x_i, x_j], x_b>: row a of ad_i holds <[x_i, x_j], x_a> over j.
  Matrix bracket_term = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix& adi = ad[static_cast<std::size_t>(i)];
    bracket_term += adi * adi.transpose();
  }
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b) {
      const Matrix& x = ad[static_cast<std::size_t>(a)];
      const Matrix& y = ad[static_cast<std::size_t>(b)];
      const double norms = (x.array() * y.array()).sum();  // sum_i <[x_a, x_i], [x_b, x_i]>
      const double killing = (x * y).trace();
      const double value = -0.5 * norms - 0.5 * killing + 0.25 * bracket_term(a, b) - 0.5 * (ad_h(b, a) + ad_h(a, b));
      ric(a, b) = value;
      ric(b, a) = value;
    }
  return ric;
}

}  // namespace

Metric Metric::make(const LieAlgebra& l, const Matrix& gram) {
  if (gram.rows() != l.dim() || gram.cols() != l.dim()) throw InputShapeError("metric must be dim x dim");
  const InnerProduct ip = InnerProduct::make(gram, l.tolerance());
  if (!ip.definite) throw InputError("metric must be positive definite");
  return Metric{ip.gram};
}

Vector mean_curvature_element(const LieAlgebra& l, const Metric& m) {
  Vector t(l.dim());
  for (int i = 0; i < l.dim(); ++i) t(i) = l.ad_basis(i).trace();
  if (t.isZero(0.0)) return Vector::Zero(l.dim());
  return m.gram.llt().solve(t);
}

CurvatureReport ricci_left_invariant(const LieAlgebra& l, const Metric& m) {
  if (m.gram.rows() != l.dim()) throw InputShapeError("metric and algebra differ in dimension");
  const Matrix frame = orthonormal_frame(m);
  const Matrix frame_inv = frame.inverse();
  const Matrix ric_frame = ricci_in_frame(frame_ad(l, frame, frame_inv));
  CurvatureReport out;
  out.ricci = frame * ric_frame * frame_inv;
  out.scalar = ric_frame.trace();
  out.mean_curvature = mean_curvature_element(l, m);
  const auto n = ric_frame.rows();
  out.einstein_residual = (ric_frame - (out.scalar / static_cast<double>(n)) * Matrix::Identity(n, n)).norm();
  return out;
}

CurvatureReport nilsoliton_certificate(const LieAlgebra& l, const Metric& m, const std::optional<StratumLabel>& label) {
  if (!is_nilpotent(l, Subspace::whole(l.dim()))) throw PreconditionError("nilsoliton certificates need a nilpotent algebra");
  if (label && label->beta_plus.rows() != l.dim()) throw InputShapeError("label and algebra differ in dimension");
  CurvatureReport out = ricci_left_invariant(l, m);
  const int n = l.dim();
  const Matrix frame = orthonormal_frame(m);
  const Matrix frame_inv = frame.inverse();
  const Matrix ric_frame = frame_inv * out.ricci * frame;

  const Subspace der = derivations(l);
  const int nd = der.dim();
  Matrix design(n * n, 1 + nd);
  design.col(0) = Matrix::Identity(n, n).reshaped();
  for (int k = 0; k < nd; ++k)
    design.col(1 + k) = (frame_inv * unvectorize(der.basis().col(k), n) * frame).reshaped();
  const Vector target = ric_frame.reshaped();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
  cod.setThreshold(l.tolerance());
  const Vector coef = cod.solve(target);

  SolitonFit fit;
  fit.c = coef(0);
  fit.d = Matrix::Zero(n, n);
  for (int k = 0; k < nd; ++k) fit.d += coef(1 + k) * unvectorize(der.basis().col(k), n);
  fit.residual = (target - design * coef).norm();
  const double ric_norm = ric_frame.norm();
  fit.derivation_residual = derivation_residual(l, fit.d);
  const bool is_der = fit.derivation_residual <= l.residual_tolerance() * std::max(1.0, max_abs(fit.d));
  fit.pass = fit.residual <= l.tolerance() * std::max(1.0, ric_norm) && is_der;

  if (label) {
    const double tol = l.tolerance();
    LabelCheck check;
    check.derivation = is_der;
    check.c_negative = fit.c < -tol;
    const double tr_d = fit.d.trace();
    const double tr_bp = label->beta_plus.trace();
    if (std::abs(tr_d) > tol && std::abs(tr_bp) > tol) {
      check.proportionality_residual = max_abs(fit.d / tr_d - label->beta_plus / tr_bp);
    } else {
      check.proportionality_residual = std::numeric_limits<double>::infinity();
    }
    check.scalar_ratio_residual = std::abs(fit.c) > tol
                                      ? std::abs(out.scalar / fit.c - (static_cast<double>(n) - tr_bp))
                                      : std::numeric_limits<double>::infinity();
    const double scale_tol = tol * std::max(1.0, std::abs(static_cast<double>(n) - tr_bp));
    check.pass = check.derivation && check.c_negative && check.proportionality_residual <= tol &&
                 check.scalar_ratio_residual <= scale_tol;
    fit.label = check;
    fit.pass = fit.pass && check.pass;
  }
  out.soliton = fit;
  return out;
}

}  // namespace orbitlab
