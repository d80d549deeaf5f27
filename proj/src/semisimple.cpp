#include "orbitlab/semisimple.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace orbitlab {

namespace {

double worst_bracket_distance(const LieAlgebra& l, const Subspace& a, const Subspace& b, const Subspace& target) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    const Matrix ad = l.ad(a.basis().col(i));
    for (Eigen::Index j = 0; j < b.dim(); ++j) worst = std::max(worst, target.distance(ad * b.basis().col(j)));
  }
  return worst;
}

struct Cluster {
  Vector rep;
  std::vector<Eigen::Index> members;
};

}  // namespace

CartanData validate_cartan(std::shared_ptr<const LieAlgebra> algebra, const LinearMap& theta) {
  if (!algebra) throw InputError("validate_cartan: null algebra");
  const LieAlgebra& l = *algebra;
  const int n = l.dim();
  if (theta.matrix.rows() != n) throw InputShapeError("theta must be dim x dim");
  if (!structure_invariants(l).semisimple) throw PreconditionError("Cartan involutions need a semisimple algebra");

  const double tol = l.tolerance();
  const Matrix& t = theta.matrix;
  const Matrix id = Matrix::Identity(n, n);

  const double involution = max_abs(t * t - id);
  if (involution > tol * std::max(1.0, max_abs(t) * max_abs(t))) throw CartanValidationError("theta^2 = Id", involution);

  const double hom = automorphism_residual(l, t);
  if (hom > l.residual_tolerance() * std::max(1.0, max_abs(t) * max_abs(t)))
    throw CartanValidationError("theta[X,Y] = [theta X, theta Y]", hom);

  CartanData out;
  out.algebra = algebra;
  out.theta = theta;
  out.k = Subspace::from_orthonormal(null_space(t - id, tol).basis);
  out.p = Subspace::from_orthonormal(null_space(t + id, tol).basis);
  if (out.k.dim() + out.p.dim() != n)
    throw CartanValidationError("dim k + dim p = dim l", std::abs(out.k.dim() + out.p.dim() - n));

  const Matrix b = killing_form(l);
  Matrix bt = -b * t;
  const double asym = (bt - bt.transpose()).norm();
  if (asym > tol * std::max(1.0, bt.norm())) throw CartanValidationError("B_theta symmetric", asym);
  bt = 0.5 * (bt + bt.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(bt, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lo > tol * std::max(1.0, hi))) throw CartanValidationError("B_theta positive definite", lo);
  out.b_theta = bt;

  const double rt = l.residual_tolerance();
  if (double r = worst_bracket_distance(l, out.k, out.k, out.k); r > rt) throw CartanValidationError("[k,k] ⊆ k", r);
  if (double r = worst_bracket_distance(l, out.k, out.p, out.p); r > rt) throw CartanValidationError("[k,p] ⊆ p", r);
  if (double r = worst_bracket_distance(l, out.p, out.p, out.k); r > rt) throw CartanValidationError("[p,p] ⊆ k", r);
  return out;
}

Subspace maximal_abelian_subspace(const CartanData& cartan, std::uint64_t seed) {
  const LieAlgebra& l = *cartan.algebra;
  if (cartan.p.is_zero()) return cartan.p;
  Rng rng(seed);
  for (int attempt = 0; attempt < kGenericRetries; ++attempt) {
    const Vector x = cartan.p.basis() * rng.normal_vector(cartan.p.dim());
    const Subspace a = centralizer(l, Subspace::span(x, l.tolerance()), cartan.p);
    if (a.is_zero()) continue;
    if (worst_bracket_distance(l, a, a, Subspace::zero(l.dim())) > l.residual_tolerance()) continue;
    if (centralizer(l, a, cartan.p).dim() != a.dim()) continue;
    return a;
  }
  throw AlgorithmFailure("no maximal abelian subspace found after " + std::to_string(kGenericRetries) + " draws");
}

RootDecomposition restricted_roots(const CartanData& cartan, const Subspace& a, std::uint64_t seed) {
  const LieAlgebra& l = *cartan.algebra;
  const int n = l.dim();
  const int r = a.dim();
  RootDecomposition out;
  if (r == 0) {
    out.l0 = Subspace::whole(n);
    return out;
  }
  const double radius = 10.0 * l.tolerance();

  // y = L^T x turns B_theta into the Euclidean product; ad(A) becomes symmetric.
  Eigen::LLT<Matrix> llt(cartan.b_theta);
  if (llt.info() != Eigen::Success) throw PreconditionError("B_theta is not positive definite");
  const Matrix lower = llt.matrixL();
  const Matrix lower_t = lower.transpose();
  std::vector<Matrix> sym(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    const Matrix ad = l.ad(a.basis().col(i));
    Matrix s = lower_t * ad * lower_t.inverse();
    sym[static_cast<std::size_t>(i)] = 0.5 * (s + s.transpose());
  }

  Rng rng(seed);
  Matrix vectors;
  Matrix joint(r, n);
  bool separated = false;
  double worst_residual = 0.0;
  for (int attempt = 0; attempt < kGenericRetries && !separated; ++attempt) {
    const Vector g = rng.normal_vector(r);
    Matrix generic = Matrix::Zero(n, n);
    for (int i = 0; i < r; ++i) generic += g(i) * sym[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Matrix> es(generic);
    vectors = es.eigenvectors();
    worst_residual = 0.0;
    for (int j = 0; j < n; ++j) {
      const Vector v = vectors.col(j);
      for (int i = 0; i < r; ++i) {
        const Vector mv = sym[static_cast<std::size_t>(i)] * v;
        joint(i, j) = v.dot(mv);
        worst_residual = std::max(worst_residual, (mv - joint(i, j) * v).norm());
      }
    }
    separated = worst_residual <= radius;
  }
  if (!separated) {
    std::ostringstream msg;
    msg << "generic element never separated the joint eigenspaces (eigenvector residual " << worst_residual
        << " > radius " << radius << ")";
    throw ClusteringError(msg.str());
  }

  std::vector<Cluster> clusters;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector lam = joint.col(j);
    Cluster* best = nullptr;
    double best_dist = 0.0;
    for (auto& c : clusters) {
      const double d = (c.rep - lam).norm();
      if (!best || d < best_dist) {
        best = &c;
        best_dist = d;
      }
    }
    if (best && best_dist <= radius) {
      best->members.push_back(j);
    } else {
      clusters.push_back({lam, {j}});
    }
  }
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      const double gap = (clusters[i].rep - clusters[j].rep).norm();
      if (gap <= 100.0 * radius) {
        std::ostringstream msg;
        msg << "eigenvalue clusters " << i << " and " << j << " are " << gap << " apart; radius " << radius
            << ", required separation " << 100.0 * radius;
        throw ClusteringError(msg.str());
      }
    }

  const Matrix back = lower_t.inverse();  // x = L^{-T} y
  bool have_zero = false;
  for (const auto& c : clusters) {
    Matrix cols(n, static_cast<Eigen::Index>(c.members.size()));
    Vector mean = Vector::Zero(r);
    for (std::size_t s = 0; s < c.members.size(); ++s) {
      cols.col(static_cast<Eigen::Index>(s)) = back * vectors.col(c.members[s]);
      mean += joint.col(c.members[s]);
    }
    mean /= static_cast<double>(c.members.size());
    Subspace space = Subspace::span(cols, l.tolerance());
    if (mean.norm() <= radius) {
      out.l0 = std::move(space);
      have_zero = true;
    } else {
      const int mult = space.dim();
      out.roots.push_back({mean, std::move(space), mult});
    }
  }
  if (!have_zero) throw ClusteringError("no zero weight found; a is not inside its own centralizer");

  std::sort(out.roots.begin(), out.roots.end(), [&](const RestrictedRoot& x, const RestrictedRoot& y) {
    for (int i = 0; i < r; ++i) {
      if (std::abs(x.functional(i) - y.functional(i)) > radius) return x.functional(i) > y.functional(i);
    }
    return false;
  });
  return out;
}

int find_root(const std::vector<RestrictedRoot>& roots, const Vector& functional, double radius) {
  for (std::size_t i = 0; i < roots.size(); ++i)
    if ((roots[i].functional - functional).norm() <= radius) return static_cast<int>(i);
  return -1;
}

IwasawaData iwasawa_assemble(const CartanData& cartan, const Subspace& a, const RootDecomposition& roots,
                             const Vector& regular) {
  const LieAlgebra& l = *cartan.algebra;
  const int n = l.dim();
  const double tol = l.tolerance();
  const double rt = l.residual_tolerance();
  const double radius = 10.0 * tol;
  if (regular.size() != a.dim()) throw InputShapeError("regular covector must have length dim a");

  IwasawaData out;
  out.cartan = cartan;
  out.a = a;
  out.roots = roots.roots;
  out.l0 = roots.l0;
  const double rn = regular.norm();
  out.regular = rn > 0 ? Vector(regular / rn) : regular;

  Matrix pos_cols(n, 0), neg_cols(n, 0);
  auto append = [&](Matrix& m, const Matrix& cols) {
    Matrix joined(n, m.cols() + cols.cols());
    joined << m, cols;
    m = std::move(joined);
  };
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const double s = out.regular.dot(out.roots[i].functional);
    if (std::abs(s) <= tol) throw NotRegularError("covector vanishes on root " + std::to_string(i));
    if (s > 0) {
      out.positive_roots.push_back(static_cast<int>(i));
      append(pos_cols, out.roots[i].space.basis());
    } else {
      append(neg_cols, out.roots[i].space.basis());
    }
  }
  out.n = Subspace::span(pos_cols, tol);
  const Subspace negative = Subspace::span(neg_cols, tol);
  out.n_minus = out.n.image(cartan.theta.matrix, tol);
  out.m = centralizer(l, a, cartan.k);
  out.borel = sum(a, out.n, tol);
  out.q = sum(out.m, out.borel, tol);
  out.split = out.m.dim() == 0;

  auto fail = [](const std::string& what, double residual) {
    std::ostringstream msg;
    msg << what << " (residual " << residual << ")";
    throw AlgorithmFailure(msg.str());
  };

  if (double r = worst_bracket_distance(l, a, a, Subspace::zero(n)); r > rt) fail("a is not abelian", r);
  if (centralizer(l, a, cartan.p).dim() != a.dim()) fail("a is not maximal abelian in p", 0.0);
  for (std::size_t i = 0; i < out.roots.size(); ++i) {
    const Subspace& si = out.roots[i].space;
    for (std::size_t j = i + 1; j < out.roots.size(); ++j) {
      const double cross = (si.basis().transpose() * cartan.b_theta * out.roots[j].space.basis()).norm();
      if (cross > tol * std::max(1.0, cartan.b_theta.norm())) fail("root spaces are not B_theta-orthogonal", cross);
    }
    const int opposite = find_root(out.roots, -out.roots[i].functional, radius);
    if (opposite < 0) fail("negated root missing", out.roots[i].functional.norm());
    const double d = out.roots[static_cast<std::size_t>(opposite)].space.max_distance(cartan.theta.matrix * si.basis());
    if (d > rt) fail("theta does not map l_lambda onto l_-lambda", d);
  }
  if (!out.n_minus.equals(negative, rt)) fail("theta(n) differs from the negative root spaces", 0.0);
  if (cartan.k.dim() + a.dim() + out.n.dim() != n)
    fail("dim k + dim a + dim n != dim l", std::abs(cartan.k.dim() + a.dim() + out.n.dim() - n));
  if (out.m.dim() + a.dim() != out.l0.dim() || !out.l0.contains(out.m, rt) || !out.l0.contains(a, rt))
    fail("l_0 != m ⊕ a", 0.0);
  if (double r = worst_bracket_distance(l, out.l0, out.n, out.n); r > rt) fail("l_0 does not normalize n", r);
  if (!is_nilpotent(l, out.n)) fail("n is not nilpotent", 0.0);
  if (!is_solvable(l, out.borel)) fail("a ⊕ n is not solvable", 0.0);
  return out;
}

IwasawaData iwasawa_decompose(const CartanData& cartan, std::uint64_t seed) {
  const Subspace a = maximal_abelian_subspace(cartan, seed);
  const RootDecomposition roots = restricted_roots(cartan, a, seed);
  Rng rng(seed + 1);
  for (int attempt = 0; attempt < kGenericRetries; ++attempt) {
    try {
      return iwasawa_assemble(cartan, a, roots, rng.normal_vector(a.dim()));
    } catch (const NotRegularError&) {
    }
  }
  throw AlgorithmFailure("no regular covector found after " + std::to_string(kGenericRetries) + " draws");
}

void require_no_compact_factor(const LieAlgebra& l, std::uint64_t seed) {
  const Matrix b = killing_form(l);
  const auto ideals = simple_ideals(l, seed);
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    const Matrix& basis = ideals[i].basis();
    const Matrix restricted = basis.transpose() * b * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (restricted + restricted.transpose()), Eigen::EigenvaluesOnly);
    const double hi = es.eigenvalues().maxCoeff();
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(hi > l.tolerance() * std::max(1.0, scale)))
      throw PreconditionError("simple ideal " + std::to_string(i) + " (dim " + std::to_string(ideals[i].dim()) +
                              ") is compact: Killing form is negative definite on it");
  }
}

AppendixCReport verify_appendix_c(const IwasawaData& iw, int samples, std::uint64_t seed) {
  if (samples < 1) throw InputError("samples must be >= 1");
  const LieAlgebra& l = *iw.cartan.algebra;
  require_no_compact_factor(l, seed);
  const int n = l.dim();
  const double tol = l.tolerance();
  const double rt = l.residual_tolerance();
  AppendixCReport rep;

  // Conjugates Ad(exp(tX)) n = exp(t ad X) n of the Borel nilradical.
  Rng rng(seed);
  Subspace span = iw.n;
  for (int s = 1; s <= samples && span.dim() < n; ++s) {
    const Vector x = rng.normal_vector(n);
    Matrix ad = l.ad(x);
    const double norm = ad.norm();
    if (norm > 0) ad /= norm;
    const double t = rng.uniform(0.5, 1.5);
    span = sum(span, iw.n.image(expm(t * ad), tol), tol);
    rep.samples_used = s;
  }
  rep.span_rank = span.dim();
  rep.span = span.dim() == n;

  const Subspace theta_n = iw.n_minus;
  const Subspace brackets = bracket_span(l, iw.n, theta_n);
  const Subspace ma = sum(iw.m, iw.a, tol);
  rep.bracket_residual = ma.is_zero() ? 0.0 : brackets.max_distance(ma.basis());
  rep.bracket_contains_ma = rep.bracket_residual <= rt;

  const NullSpace zm = subspace_operator_system(l, SubspaceOperator::Centralizer, iw.n, iw.m);
  const NullSpace za = subspace_operator_system(l, SubspaceOperator::Centralizer, iw.n, iw.a);
  rep.z_m_dim = static_cast<int>(zm.basis.cols());
  rep.z_a_dim = static_cast<int>(za.basis.cols());
  rep.margin_m = zm.margin;
  rep.margin_a = za.margin;
  rep.centralizers_trivial = rep.z_m_dim == 0 && rep.z_a_dim == 0 && rep.margin_m >= kCentralizerMargin &&
                             rep.margin_a >= kCentralizerMargin;

  const Subspace nk = normalizer(l, iw.cartan.k, Subspace::whole(n));
  rep.normalizer_dim = nk.dim();
  rep.normalizer_k = nk.equals(iw.cartan.k, rt);
  return rep;
}

}  // namespace orbitlab
