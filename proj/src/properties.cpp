#include "orbitlab/properties.hpp"

#include "orbitlab/builtin.hpp"
#include "orbitlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace orbitlab {

WeightVector random_weights(Rng& rng, int dim, bool positive) {
  std::vector<double> w;
  double value = positive ? rng.uniform(0.25, 0.5) : rng.uniform(-2.0, 0.0);
  const double step_hi = positive ? std::max(0.1, 2.0 / std::max(1, dim - 1)) : 0.6;
  for (int i = 0; i < dim; ++i) {
    if (i > 0 && rng.uniform(0.0, 1.0) < 0.6) value += rng.uniform(0.1, step_hi);
    w.push_back(value);
  }
  return WeightVector(w);
}

Matrix random_parabolic(Rng& rng, const WeightVector& w) {
  const int d = w.dim();
  Matrix q = Matrix::Zero(d, d);
  for (const auto& b : w.blocks()) {
    Vector scales(b.size);
    for (int i = 0; i < b.size; ++i) scales(i) = rng.uniform(0.5, 2.0) * (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    q.block(b.start, b.start, b.size, b.size) = rng.orthogonal(b.size) * scales.asDiagonal() * rng.orthogonal(b.size);
    const int below = d - b.start - b.size;
    if (below > 0) q.block(b.start + b.size, b.start, below, b.size) = rng.normal_matrix(below, b.size);
  }
  return q;
}

Matrix random_block_orthogonal(Rng& rng, const WeightVector& w) {
  Matrix k = Matrix::Zero(w.dim(), w.dim());
  for (const auto& b : w.blocks()) k.block(b.start, b.start, b.size, b.size) = rng.orthogonal(b.size);
  return k;
}

Matrix random_lower_gauge(Rng& rng, int dim) {
  Matrix l = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    l(i, i) = rng.uniform(0.5, 2.0);
    for (int j = 0; j < i; ++j) l(i, j) = 0.5 * rng.normal();
  }
  return l;
}

Matrix random_heisenberg_automorphism(Rng& rng, bool special) {
  Matrix a = rng.normal_matrix(2, 2);
  double det = a.determinant();
  while (std::abs(det) < 0.2) {
    a = rng.normal_matrix(2, 2);
    det = a.determinant();
  }
  if (special) {
    a.col(0) /= std::abs(det);
    det = a.determinant();
  }
  Matrix phi = Matrix::Zero(3, 3);
  phi.topLeftCorner(2, 2) = a;
  phi(2, 0) = rng.normal();
  phi(2, 1) = rng.normal();
  phi(2, 2) = det;
  return phi;
}

PropertyResult check_det_multiplicativity(Rng& rng, int trials, int min_dim, int max_dim) {
  PropertyResult r{"det_W multiplicativity", trials, 0.0, 1e-8, false};
  for (int t = 0; t < trials; ++t) {
    const WeightVector w = random_weights(rng, rng.uniform_int(min_dim, max_dim), false);
    const Matrix q1 = random_parabolic(rng, w);
    const Matrix q2 = random_parabolic(rng, w);
    const double product = det_weighted(q1, w) * det_weighted(q2, w);
    r.worst = std::max(r.worst, std::abs(det_weighted(q1 * q2, w) - product) / product);
  }
  r.pass = r.worst <= r.threshold;
  return r;
}

PropertyResult check_gauge_invariance(Rng& rng, int trials, int min_dim, int max_dim) {
  PropertyResult r{"gauge invariance", trials, 0.0, 1e-8, false};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.uniform_int(min_dim, max_dim);
    const WeightVector w = random_weights(rng, d, false);
    const InnerProduct h = InnerProduct::make(rng.spd(d, 0.2, 5.0));
    const Matrix q = gauge_lower_triangular(h, InnerProduct::identity(d)).q;
    const Matrix qk = q * random_block_orthogonal(rng, w);
    const double v1 = 1.0 / det_weighted(q, w);
    const double v2 = 1.0 / det_weighted(qk, w);
    r.worst = std::max(r.worst, std::abs(v1 - v2) / v1);
  }
  r.pass = r.worst <= r.threshold;
  return r;
}

ContinuityFamily random_continuity_family(Rng& rng, int dim, bool positive) {
  ContinuityFamily f;
  f.weights = random_weights(rng, dim, positive);
  f.base = random_lower_gauge(rng, dim);
  f.direction = rng.uniform_int(0, dim - 1);
  const double wj = f.weights.weights()[static_cast<std::size_t>(f.direction)];
  const double log_det = std::log(det_weighted(f.base, f.weights));
  // Analytic value exp(-log_det - t w_j); the tail starts where it is 1e-6 / e.
  f.threshold = wj > 0 ? std::max(0.0, (std::log(1e6) + 1.0 - log_det) / wj) : 0.0;
  return f;
}

Matrix continuity_gram(const ContinuityFamily& f, double t) {
  Matrix q = f.base;
  q.col(f.direction) *= std::exp(t);
  const Matrix qinv = q.triangularView<Eigen::Lower>().solve(Matrix::Identity(q.rows(), q.cols()));
  const Matrix g = qinv.transpose() * qinv;
  return 0.5 * (g + g.transpose());
}

std::vector<double> continuity_tail(const ContinuityFamily& f) {
  std::vector<double> out;
  const InnerProduct background = InnerProduct::identity(f.weights.dim());
  for (int k = 0; k <= 20; ++k) {
    const InnerProduct h = InnerProduct::make(continuity_gram(f, f.threshold + 0.5 * k));
    out.push_back(v_weighted(h, background, f.weights).value);
  }
  return out;
}

double continuity_decay_law_error(const ContinuityFamily& f, int* definite_points) {
  const InnerProduct background = InnerProduct::identity(f.weights.dim());
  const double wj = f.weights.weights()[static_cast<std::size_t>(f.direction)];
  const double v0 = v_weighted(InnerProduct::make(continuity_gram(f, 0.0)), background, f.weights).value;
  double worst = 0.0;
  int count = 0;
  for (int k = 0; k <= 40; ++k) {
    const double t = f.threshold * k / 40.0;
    const VolumeDensity v = v_weighted(InnerProduct::make(continuity_gram(f, t)), background, f.weights);
    if (v.degenerate) continue;
    const double expected = v0 * std::exp(-t * wj);
    worst = std::max(worst, std::abs(v.value - expected) / expected);
    ++count;
  }
  if (definite_points) *definite_points = count;
  return worst;
}

PropertyResult check_continuity(Rng& rng, int families) {
  PropertyResult r{"continuity to the boundary", families, 0.0, 1e-6, true};
  for (int i = 0; i < families; ++i) {
    const ContinuityFamily f = random_continuity_family(rng, rng.uniform_int(2, 6), true);
    const std::vector<double> tail = continuity_tail(f);
    for (std::size_t k = 0; k < tail.size(); ++k) {
      r.worst = std::max(r.worst, tail[k]);
      if (tail[k] >= r.threshold) r.pass = false;
      if (k > 0 && tail[k] > tail[k - 1]) r.pass = false;
    }
    if (continuity_decay_law_error(f) > 1e-6) r.pass = false;
  }
  return r;
}

PropertyResult check_heisenberg_equivariance(Rng& rng, int trials, bool special_only) {
  PropertyResult r{special_only ? "Aut ∩ SL invariance" : "Aut equivariance", trials, 0.0, 1e-9, false};
  const BuiltinAlgebra heis = parse_builtin("heisenberg:3");
  const StratumLabel label = beta_plus_from_beta(*heis.beta, &heis.algebra);
  const InnerProduct background = InnerProduct::identity(3);
  for (int t = 0; t < trials; ++t) {
    const InnerProduct h = InnerProduct::make(rng.spd(3, 0.2, 5.0));
    const Matrix phi = random_heisenberg_automorphism(rng, special_only || t % 2 == 1);
    const EquivarianceResult e = equivariance_check(h, phi, heis.algebra, label, background);
    r.worst = std::max(r.worst, e.residual / std::max(std::abs(e.rhs), 1e-300));
  }
  r.pass = r.worst <= r.threshold;
  return r;
}

}  // namespace orbitlab
