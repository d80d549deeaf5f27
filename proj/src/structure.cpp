#include "orbitlab/structure.hpp"

#include "orbitlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>

namespace orbitlab {

namespace {

Matrix bracket_columns(const LieAlgebra& l, const Matrix& a, const Matrix& b) {
  Matrix out(l.dim(), a.cols() * b.cols());
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const Matrix ad_a = l.ad(a.col(i));
    for (Eigen::Index j = 0; j < b.cols(); ++j) out.col(col++) = ad_a * b.col(j);
  }
  return out;
}

double trace_of_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

// Operators commuting with ad x and ad y. For a generic pair in a semisimple
// algebra the pair generates, so this is the full centroid.
Matrix commutant_basis(const Matrix& a1, const Matrix& a2, double tol) {
  const Eigen::Index n = a1.rows();
  Matrix system = Matrix::Zero(2 * n * n, n * n);
  auto fill = [&](const Matrix& a, Eigen::Index row_offset) {
    // vec(T A - A T) = (A^T ⊗ I - I ⊗ A) vec(T), column-major vec
    for (Eigen::Index s = 0; s < n; ++s)
      for (Eigen::Index r = 0; r < n; ++r) {
        const Eigen::Index row = row_offset + r + n * s;
        for (Eigen::Index q = 0; q < n; ++q) system(row, r + n * q) += a(q, s);
        for (Eigen::Index p = 0; p < n; ++p) system(row, p + n * s) -= a(r, p);
      }
  };
  fill(a1, 0);
  fill(a2, n * n);
  return null_space(system, tol).basis;
}

int centroid_dimension(const LieAlgebra& l, Rng& rng) {
  const Matrix a1 = l.ad(rng.normal_vector(l.dim()));
  const Matrix a2 = l.ad(rng.normal_vector(l.dim()));
  return static_cast<int>(commutant_basis(a1, a2, l.tolerance()).cols());
}

// Leading coordinate used to order ideals deterministically.
int leading_index(const Subspace& s) {
  const Matrix p = s.projector();
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (p(i, i) > 0.5) return static_cast<int>(i);
  Eigen::Index best = 0;
  p.diagonal().maxCoeff(&best);
  return static_cast<int>(best);
}

std::optional<std::vector<Subspace>> try_simple_ideals(const LieAlgebra& l, const Matrix& killing, Rng& rng) {
  const int n = l.dim();
  const double tol = l.tolerance();
  const Matrix a1 = l.ad(rng.normal_vector(n));
  const Matrix a2 = l.ad(rng.normal_vector(n));
  const Matrix centroid = commutant_basis(a1, a2, tol);
  if (centroid.cols() == 0) return std::nullopt;

  Matrix generic = Matrix::Zero(n, n);
  for (Eigen::Index c = 0; c < centroid.cols(); ++c) {
    const Matrix t = unvectorize(centroid.col(c), n);
    for (int i = 0; i < n; ++i)
      if ((t * l.ad_basis(i) - l.ad_basis(i) * t).norm() > l.residual_tolerance() * std::max(1.0, t.norm()))
        return std::nullopt;
    generic += rng.normal() * t;
  }

  Eigen::EigenSolver<Matrix> es(generic, false);
  if (es.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXcd ev = es.eigenvalues();
  const double radius = 1e-6 * std::max(1.0, ev.cwiseAbs().maxCoeff());

  std::vector<std::complex<double>> reps;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const std::complex<double> key(ev(i).real(), std::abs(ev(i).imag()));
    bool found = false;
    for (const auto& r : reps)
      if (std::abs(r - key) <= radius) found = true;
    if (!found) reps.push_back(key);
  }

  std::vector<Subspace> ideals;
  int total = 0;
  const Matrix id = Matrix::Identity(n, n);
  for (const auto& r : reps) {
    const Matrix shifted = generic * generic - 2.0 * r.real() * generic + std::norm(r) * id;
    Subspace ideal = Subspace::from_orthonormal(null_space(shifted, tol).basis);
    if (ideal.is_zero()) return std::nullopt;
    total += ideal.dim();
    ideals.push_back(std::move(ideal));
  }
  if (total != n) return std::nullopt;

  for (std::size_t a = 0; a < ideals.size(); ++a) {
    if (!is_ideal(l, ideals[a])) return std::nullopt;
    for (std::size_t b = a + 1; b < ideals.size(); ++b) {
      if (bracket_columns(l, ideals[a].basis(), ideals[b].basis()).norm() > l.residual_tolerance())
        return std::nullopt;
      const double cross = (ideals[a].basis().transpose() * killing * ideals[b].basis()).norm();
      if (cross > tol * std::max(1.0, killing.norm())) return std::nullopt;
    }
    // simple: a random vector generates the whole ideal, and the centroid is a field
    const Vector v = ideals[a].basis() * rng.normal_vector(ideals[a].dim());
    if (ideal_closure(l, Subspace::span(v, tol)).dim() != ideals[a].dim()) return std::nullopt;
    if (centroid_dimension(restrict_to(l, ideals[a]), rng) > 2) return std::nullopt;
  }
  std::stable_sort(ideals.begin(), ideals.end(),
                   [](const Subspace& x, const Subspace& y) { return leading_index(x) < leading_index(y); });
  return ideals;
}

std::optional<Subspace> try_nilradical(const LieAlgebra& l, const Subspace& rad,
                                       const std::vector<Subspace>& layers, Rng& rng) {
  const double tol = l.tolerance();
  const Matrix& r = rad.basis();
  const Eigen::Index dr = r.cols();
  const Vector g = rng.normal_vector(dr);
  const Vector z = r * g;

  // On each layer J^k / J^{k+1} the radical acts through commuting operators;
  // Y is ad-nilpotent iff tr(rho(Y) rho(Z)^m) = 0 for generic Z and all m.
  std::vector<Vector> rows;
  for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
    const Subspace& upper = layers[k];
    const Subspace& lower = layers[k + 1];
    Matrix complement = upper.basis();
    if (!lower.is_zero()) {
      const NullSpace ns = null_space(lower.basis().transpose() * upper.basis(), tol);
      complement = upper.basis() * ns.basis;
    }
    const Eigen::Index d = complement.cols();
    if (d == 0) continue;
    std::vector<Matrix> rho(static_cast<std::size_t>(dr));
    for (Eigen::Index a = 0; a < dr; ++a)
      rho[static_cast<std::size_t>(a)] = complement.transpose() * l.ad(r.col(a)) * complement;
    Matrix rho_z = complement.transpose() * l.ad(z) * complement;
    const double zn = rho_z.norm();
    if (zn > 0) rho_z /= zn;

    Matrix power = Matrix::Identity(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
      Vector row(dr);
      for (Eigen::Index a = 0; a < dr; ++a) row(a) = trace_of_product(rho[static_cast<std::size_t>(a)], power);
      const double rn = row.norm();
      if (rn > 0) rows.push_back(row / rn);
      power = power * rho_z;
      const double pn = power.norm();
      if (pn <= tol) break;
      power /= pn;
    }
  }

  Subspace candidate = rad;
  if (!rows.empty()) {
    Matrix constraints(static_cast<Eigen::Index>(rows.size()), dr);
    for (std::size_t i = 0; i < rows.size(); ++i) constraints.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    const NullSpace ns = null_space(constraints, tol);
    candidate = Subspace::span(r * ns.basis, tol);
  }

  // a posteriori: contains [l, rad], is an ideal, nilpotent, every basis element ad-nilpotent
  if (!layers.empty() && !candidate.contains(layers.front(), l.residual_tolerance())) return std::nullopt;
  if (!is_ideal(l, candidate) || !is_nilpotent(l, candidate)) return std::nullopt;
  const int n = l.dim();
  for (Eigen::Index c = 0; c < candidate.dim(); ++c) {
    const Matrix ad = l.ad(candidate.basis().col(c));
    Matrix power = Matrix::Identity(n, n);
    for (int i = 0; i < n; ++i) power = power * ad;
    const double bound = tol * n * std::pow(std::max(1.0, ad.norm()), n);
    if (power.norm() > bound) return std::nullopt;
  }
  return candidate;
}

}  // namespace

Matrix killing_form(const LieAlgebra& l) {
  const int n = l.dim();
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      b(i, j) = trace_of_product(l.ad_basis(i), l.ad_basis(j));
      b(j, i) = b(i, j);
    }
  return b;
}

double unimodularity_defect(const LieAlgebra& l) {
  double worst = 0.0;
  for (int i = 0; i < l.dim(); ++i) worst = std::max(worst, std::abs(l.ad_basis(i).trace()));
  return worst;
}

StructureInvariants structure_invariants(const LieAlgebra& l) {
  StructureInvariants inv;
  const double tol = l.tolerance();
  const Matrix b = killing_form(l);
  Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
  const Vector mags = es.eigenvalues().cwiseAbs();
  const double largest = mags.maxCoeff();
  const double smallest = mags.minCoeff();
  if (largest <= tol) {
    inv.semisimple = false;
  } else {
    const double ratio = smallest / largest;
    if (ratio > 10.0 * tol) {
      inv.semisimple = true;
    } else if (ratio < 0.1 * tol) {
      inv.semisimple = false;
    } else {
      throw IndeterminateError("Killing form is borderline degenerate (|lambda|min/|lambda|max = " +
                               std::to_string(ratio) + "); semisimple and non-semisimple both fit");
    }
  }
  inv.unimodular = unimodularity_defect(l) <= tol;
  const Subspace all = Subspace::whole(l.dim());
  inv.nilpotent = is_nilpotent(l, all);
  inv.center_dim = centralizer(l, all, all).dim();
  return inv;
}

Subspace bracket_span(const LieAlgebra& l, const Subspace& a, const Subspace& b) {
  if (a.is_zero() || b.is_zero()) return Subspace::zero(l.dim());
  return Subspace::span(bracket_columns(l, a.basis(), b.basis()), l.tolerance());
}

std::vector<int> lower_central_series_dims(const LieAlgebra& l, const Subspace& s) {
  std::vector<int> dims{s.dim()};
  Subspace term = s;
  while (!term.is_zero()) {
    Subspace next = bracket_span(l, s, term);
    if (next.dim() == term.dim()) break;
    dims.push_back(next.dim());
    term = std::move(next);
  }
  return dims;
}

std::vector<int> derived_series_dims(const LieAlgebra& l, const Subspace& s) {
  std::vector<int> dims{s.dim()};
  Subspace term = s;
  while (!term.is_zero()) {
    Subspace next = bracket_span(l, term, term);
    if (next.dim() == term.dim()) break;
    dims.push_back(next.dim());
    term = std::move(next);
  }
  return dims;
}

bool is_nilpotent(const LieAlgebra& l, const Subspace& s) { return lower_central_series_dims(l, s).back() == 0; }

bool is_solvable(const LieAlgebra& l, const Subspace& s) { return derived_series_dims(l, s).back() == 0; }

bool is_subalgebra(const LieAlgebra& l, const Subspace& s) {
  if (s.is_zero()) return true;
  return s.max_distance(bracket_columns(l, s.basis(), s.basis())) <= l.residual_tolerance();
}

bool is_ideal(const LieAlgebra& l, const Subspace& s) {
  if (s.is_zero()) return true;
  return s.max_distance(bracket_columns(l, Matrix::Identity(l.dim(), l.dim()), s.basis())) <= l.residual_tolerance();
}

Subspace ideal_closure(const LieAlgebra& l, const Subspace& seed) {
  const Subspace all = Subspace::whole(l.dim());
  Subspace current = seed;
  while (true) {
    Subspace next = sum(current, bracket_span(l, all, current), l.tolerance());
    if (next.dim() == current.dim()) return next;
    current = std::move(next);
  }
}

NullSpace subspace_operator_system(const LieAlgebra& l, SubspaceOperator kind, const Subspace& s,
                                   const Subspace& within) {
  const int n = l.dim();
  if (s.ambient_dim() != n || within.ambient_dim() != n) throw InputShapeError("subspace ambient dimension mismatch");
  const Matrix& w = within.basis();
  NullSpace out;
  if (within.is_zero()) {
    out.basis = Matrix(n, 0);
    return out;
  }
  if (s.is_zero()) {
    out.basis = w;
    return out;
  }
  const Matrix complement = Matrix::Identity(n, n) - s.projector();
  Matrix system(n * s.dim(), w.cols());
  for (int j = 0; j < s.dim(); ++j) {
    // [X, s_j] = -ad(s_j) X
    const Matrix block = -l.ad(s.basis().col(j)) * w;
    system.middleRows(static_cast<Eigen::Index>(j) * n, n) =
        kind == SubspaceOperator::Centralizer ? block : Matrix(complement * block);
  }
  const NullSpace ns = null_space(system, l.tolerance());
  out.basis = w * ns.basis;
  out.margin = ns.margin;
  return out;
}

Subspace subspace_operator(const LieAlgebra& l, SubspaceOperator kind, const Subspace& s, const Subspace& within) {
  return Subspace::span(subspace_operator_system(l, kind, s, within).basis, l.tolerance());
}

Matrix unvectorize(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw InputShapeError("vector is not dim^2 long");
  return v.reshaped(dim, dim);
}

Subspace derivations(const LieAlgebra& l) {
  const int n = l.dim();
  const int pairs = n * (n - 1) / 2;
  Matrix system = Matrix::Zero(static_cast<Eigen::Index>(pairs) * n, static_cast<Eigen::Index>(n) * n);
  auto var = [n](int r, int s) { return static_cast<Eigen::Index>(r) + static_cast<Eigen::Index>(n) * s; };
  Eigen::Index row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k, ++row)
        for (int a = 0; a < n; ++a) {
          // D[e_i,e_j] - [De_i, e_j] - [e_i, De_j], component k
          system(row, var(k, a)) += l.c(i, j, a);
          system(row, var(a, i)) -= l.c(a, j, k);
          system(row, var(a, j)) -= l.c(i, a, k);
        }
  return Subspace::from_orthonormal(null_space(system, l.tolerance()).basis);
}

double derivation_residual(const LieAlgebra& l, const Matrix& d) {
  const int n = l.dim();
  if (d.rows() != n || d.cols() != n) throw InputShapeError("derivation must be dim x dim");
  double worst = 0.0;
  const Matrix id = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vector ei = id.col(i), ej = id.col(j);
      const Vector r = d * l.bracket(ei, ej) - l.bracket(d * ei, ej) - l.bracket(ei, d * ej);
      worst = std::max(worst, r.norm());
    }
  return worst;
}

bool is_derivation(const LieAlgebra& l, const Matrix& d) {
  return derivation_residual(l, d) <= l.residual_tolerance() * std::max(1.0, max_abs(d));
}

double automorphism_residual(const LieAlgebra& l, const Matrix& phi) {
  const int n = l.dim();
  if (phi.rows() != n || phi.cols() != n) throw InputShapeError("map must be dim x dim");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vector r = phi * l.ad_basis(i).col(j) - l.bracket(phi.col(i), phi.col(j));
      worst = std::max(worst, r.norm());
    }
  return worst;
}

Subspace radical(const LieAlgebra& l) {
  const Subspace all = Subspace::whole(l.dim());
  const Subspace derived = bracket_span(l, all, all);
  if (derived.is_zero()) return all;
  const Matrix b = killing_form(l);
  return Subspace::from_orthonormal(null_space(derived.basis().transpose() * b, l.tolerance()).basis);
}

Subspace nilradical(const LieAlgebra& l, std::uint64_t seed) {
  const Subspace rad = radical(l);
  if (rad.is_zero()) return rad;
  const Subspace all = Subspace::whole(l.dim());

  std::vector<Subspace> layers;
  Subspace term = bracket_span(l, all, rad);
  const Subspace first = term;
  while (!term.is_zero()) {
    layers.push_back(term);
    Subspace next = bracket_span(l, first, term);
    if (next.dim() == term.dim())
      throw AlgorithmFailure("[l, rad l] is not nilpotent (stalled at dim " + std::to_string(term.dim()) + ")");
    term = std::move(next);
  }
  layers.push_back(Subspace::zero(l.dim()));

  Rng rng(seed);
  for (int attempt = 0; attempt < kGenericRetries; ++attempt) {
    if (auto found = try_nilradical(l, rad, layers, rng)) return *found;
  }
  throw AlgorithmFailure("nilradical failed verification after " + std::to_string(kGenericRetries) +
                         " generic draws (radical dim " + std::to_string(rad.dim()) + ")");
}

std::vector<Subspace> simple_ideals(const LieAlgebra& l, std::uint64_t seed) {
  if (!structure_invariants(l).semisimple) throw PreconditionError("simple_ideals needs a semisimple algebra");
  const Matrix b = killing_form(l);
  Rng rng(seed);
  for (int attempt = 0; attempt < kGenericRetries; ++attempt) {
    if (auto found = try_simple_ideals(l, b, rng)) return *found;
  }
  throw AlgorithmFailure("simple ideal decomposition failed verification after " +
                         std::to_string(kGenericRetries) + " generic draws");
}

LieAlgebra restrict_to(const LieAlgebra& l, const Subspace& s) {
  if (s.is_zero()) throw PreconditionError("cannot restrict to the zero subspace");
  const int d = s.dim();
  const Matrix& basis = s.basis();
  std::vector<double> tensor(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int a = 0; a < d; ++a) {
    const Matrix ad_a = l.ad(basis.col(a));
    for (int b = 0; b < d; ++b) {
      const Vector br = ad_a * basis.col(b);
      if (s.distance(br) > l.residual_tolerance()) throw PreconditionError("subspace is not a subalgebra");
      const Vector coords = basis.transpose() * br;
      for (int k = 0; k < d; ++k) tensor[(static_cast<std::size_t>(a) * d + b) * d + k] = coords(k);
    }
  }
  std::vector<std::string> labels;
  for (int a = 0; a < d; ++a) labels.push_back("s" + std::to_string(a + 1));
  return LieAlgebra::from_tensor(d, std::move(labels), std::move(tensor), l.tolerance());
}

}  // namespace orbitlab
