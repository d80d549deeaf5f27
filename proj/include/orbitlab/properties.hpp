#pragma once

#include "orbitlab/linalg.hpp"
#include "orbitlab/volume.hpp"

#include <string>

namespace orbitlab {

/// Outcome of one seeded property batch.
struct PropertyResult {
  std::string name;
  int trials = 0;
  /// Largest observed error (meaning depends on the property).
  double worst = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// Random generators for the parabolic calculus.

/// Nondecreasing weights with a random block structure; blocks are at least
/// 0.1 apart. Positive weights lie in [0.25, 2.5].
WeightVector random_weights(Rng& rng, int dim, bool positive);
/// Element of Q_W: invertible diagonal blocks, arbitrary entries below them.
Matrix random_parabolic(Rng& rng, const WeightVector& w);
/// Element of K_W: orthogonal diagonal blocks.
Matrix random_block_orthogonal(Rng& rng, const WeightVector& w);
/// Lower-triangular matrix with diagonal in [0.5, 2] and small off-diagonal entries.
Matrix random_lower_gauge(Rng& rng, int dim);
/// Automorphism of the three-dimensional Heisenberg algebra [e1, e2] = e3:
/// [[A, 0], [v, det A]]. With `special`, det A = ±1 so that det = 1.
Matrix random_heisenberg_automorphism(Rng& rng, bool special);

// Property batches.

/// |det_W(q1 q2) - det_W(q1) det_W(q2)| relative, dims in [min_dim, max_dim]. Threshold 1e-8.
PropertyResult check_det_multiplicativity(Rng& rng, int trials, int min_dim = 2, int max_dim = 8);
/// v_W computed from the canonical gauge q and from q k, k ∈ K_W. Threshold 1e-8 relative.
PropertyResult check_gauge_invariance(Rng& rng, int trials, int min_dim = 2, int max_dim = 8);

/// One degenerating family h_t = q_t . Id, q_t = L diag(1, .., e^t, .., 1).
struct ContinuityFamily {
  WeightVector weights;
  Matrix base;
  int direction = 0;
  /// Start of the tail: first t at which the analytic value is 1e-6 / e.
  double threshold = 0.0;
};
ContinuityFamily random_continuity_family(Rng& rng, int dim, bool positive);
Matrix continuity_gram(const ContinuityFamily& f, double t);
/// v_W along the tail t_k = threshold + 0.5 k, k = 0..20.
std::vector<double> continuity_tail(const ContinuityFamily& f);

/// Largest relative deviation from v(h_t) = v(h_0) e^{-t w_j} over t in [0, threshold]
/// at points where h_t is still definite; `definite_points` counts them.
double continuity_decay_law_error(const ContinuityFamily& f, int* definite_points = nullptr);

/// For W > 0: every tail value < 1e-6, the tail is non-increasing, and before the
/// tail the definite values follow the exponential decay law to 1e-6 relative.
PropertyResult check_continuity(Rng& rng, int families);
/// v(phi . h) = det(phi)^{-1} v(h) on Heisenberg with beta^+ weights. Threshold 1e-9 relative.
PropertyResult check_heisenberg_equivariance(Rng& rng, int trials, bool special_only = false);

}  // namespace orbitlab
