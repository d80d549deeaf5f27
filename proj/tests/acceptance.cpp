// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Reference values come from formulas evaluated here, independently of the
// code paths under test.

#include "orbitlab/builtin.hpp"
#include "orbitlab/cli.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/geometry.hpp"
#include "orbitlab/properties.hpp"
#include "orbitlab/semisimple.hpp"
#include "orbitlab/structure.hpp"
#include "orbitlab/volume.hpp"
#include "support/koszul_oracle.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

using namespace orbitlab;

namespace {

constexpr double kClosedFormTol = 1e-10;
constexpr double kDetTol = 1e-8;
constexpr double kGaugeTol = 1e-8;
constexpr double kContinuityBound = 1e-6;
constexpr double kDecayLawTol = 1e-6;
constexpr double kDivergenceBound = 1e6;
constexpr double kSplittingTol = 1e-9;
constexpr double kEquivarianceTol = 1e-9;
constexpr double kAppendixTol = 1e-9;
constexpr double kAppendixMargin = 1e-6;
constexpr int kAppendixSamples = 8;
constexpr double kSolitonTol = 1e-10;
constexpr double kPerturbedFloor = 1e-3;
constexpr double kRicciTol = 1e-9;
constexpr double kEinsteinTol = 1e-10;
constexpr double kTime1 = 1.0, kTime2 = 5.0, kTime7 = 10.0, kTime11 = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Matrix random_spd(Rng& rng, int dim) {
  const Matrix a = rng.normal_matrix(dim, dim);
  return a * a.transpose() + 0.5 * Matrix::Identity(dim, dim);
}

Matrix diag3(double a, double b, double c) { return Vector::Map(std::vector<double>{a, b, c}.data(), 3).asDiagonal(); }

// max over basis pairs of |phi [e_i, e_j] - [phi e_i, phi e_j]|, relative to |phi|^2.
double automorphism_defect(const LieAlgebra& l, const Matrix& phi) {
  double worst = 0.0;
  for (int i = 0; i < l.dim(); ++i)
    for (int j = 0; j < l.dim(); ++j) {
      const Vector lhs = phi * l.bracket(Vector::Unit(l.dim(), i), Vector::Unit(l.dim(), j));
      worst = std::max(worst, (lhs - l.bracket(phi.col(i), phi.col(j))).norm());
    }
  return worst / std::max(1.0, phi.squaredNorm());
}

StratumLabel heisenberg_label() { return beta_plus_from_beta(diag3(-1, -1, 1)); }

std::vector<std::string> info_lines;

// 1. Heisenberg closed form and backward Gram-Schmidt.
Outcome criterion_1() {
  const auto start = Clock::now();
  Rng rng(101);
  const StratumLabel label = heisenberg_label();
  const InnerProduct bg = InnerProduct::identity(3);
  double worst_diag = 0.0, worst_general = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double h11 = rng.uniform(0.1, 10.0), h22 = rng.uniform(0.1, 10.0), h33 = rng.uniform(0.1, 10.0);
    const double v = v_beta_plus(InnerProduct::make(diag3(h11, h22, h33)), bg, label).value;
    worst_diag = std::max(worst_diag, rel(v, std::cbrt(h11 * h22 * h33 * h33)));
  }
  // Backward Gram-Schmidt from e3: u2 = e2 - (h23/h33) e3, u1 = e1 minus its h-projection onto span(u2, e3).
  double worst_literal_h23_zero = 0.0, worst_literal_general = 0.0;
  for (int t = 0; t < 100; ++t) {
    Matrix h = random_spd(rng, 3);
    auto form = [&](const Vector& x, const Vector& y) { return x.dot(h * y); };
    const Vector e1 = Vector::Unit(3, 0), e2 = Vector::Unit(3, 1), e3 = Vector::Unit(3, 2);
    const Vector u2 = e2 - h(1, 2) / h(2, 2) * e3;
    const Vector u1 = e1 - form(e1, u2) / form(u2, u2) * u2 - h(0, 2) / h(2, 2) * e3;
    const double oracle = std::cbrt(form(u1, u1) * form(u2, u2) * h(2, 2) * h(2, 2));
    const double v = v_beta_plus(InnerProduct::make(h), bg, label).value;
    worst_general = std::max(worst_general, rel(v, oracle));

    const Vector u1_literal = e1 - h(0, 1) / h(1, 1) * e2 - h(0, 2) / h(2, 2) * e3;
    worst_literal_general =
        std::max(worst_literal_general, rel(v, std::cbrt(form(u1_literal, u1_literal) * form(u2, u2) * h(2, 2) * h(2, 2))));
    h(1, 2) = h(2, 1) = 0.0;
    if (Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues().minCoeff() > 0.0) {
      const double v0 = v_beta_plus(InnerProduct::make(h), bg, label).value;
      const Vector lit = e1 - h(0, 1) / h(1, 1) * e2 - h(0, 2) / h(2, 2) * e3;
      worst_literal_h23_zero = std::max(worst_literal_h23_zero, rel(v0, std::cbrt(form(lit, lit) * h(1, 1) * h(2, 2) * h(2, 2))));
    }
  }
  const double elapsed = seconds_since(start);
  info_lines.push_back(fmt("[1] u1 = e1 - (h12/h22) e2 - (h13/h33) e3 taken literally: max rel error %.2e when h23 = 0, "
                           "%.2e on general metrics (exact only when h23 = 0)",
                           worst_literal_h23_zero, worst_literal_general));
  return {worst_diag <= kClosedFormTol && worst_general <= kClosedFormTol && elapsed < kTime1,
          fmt("diagonal max rel %.2e, general (backward Gram-Schmidt) max rel %.2e, tol %.0e, %.3f s", worst_diag,
              worst_general, kClosedFormTol, elapsed)};
}

// 2. det_W is multiplicative on Q_W.
Outcome criterion_2() {
  const auto start = Clock::now();
  Rng rng(202);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int dim = rng.uniform_int(2, 8);
    const WeightVector w = random_weights(rng, dim, false);
    const Matrix q1 = random_parabolic(rng, w);
    const Matrix q2 = random_parabolic(rng, w);
    const double lhs = det_weighted(q1 * q2, w);
    worst = std::max(worst, rel(lhs, det_weighted(q1, w) * det_weighted(q2, w)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= kDetTol && elapsed < kTime2,
          fmt("1000 pairs, dims 2-8, max rel %.2e, tol %.0e, %.3f s", worst, kDetTol, elapsed)};
}

// 3. v_W does not depend on the gauge representative q k, k ∈ K_W.
Outcome criterion_3() {
  Rng rng(303);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const int dim = rng.uniform_int(2, 8);
    const WeightVector w = random_weights(rng, dim, false);
    const InnerProduct h = InnerProduct::make(random_spd(rng, dim));
    const Matrix q = gauge_lower_triangular(h, InnerProduct::identity(dim)).q;
    const Matrix k = random_block_orthogonal(rng, w);
    // q k is another gauge for h, (q k)(q k)^T = q q^T, and stays in Q_W.
    const double via_q = 1.0 / det_weighted(q, w);
    const double via_qk = 1.0 / det_weighted(q * k, w);
    worst = std::max(worst, rel(via_qk, via_q));
    worst = std::max(worst, rel(v_weighted(h, InnerProduct::identity(dim), w).value, via_qk));
  }
  return {worst <= kGaugeTol, fmt("500 samples, max rel %.2e, tol %.0e", worst, kGaugeTol)};
}

// 4. Continuity to the boundary for W > 0, divergence for a negative weight.
Outcome criterion_4() {
  Rng rng(404);
  double worst_tail = 0.0, worst_law = 0.0;
  bool monotone = true;
  int definite_points = 0;
  for (int f = 0; f < 20; ++f) {
    const ContinuityFamily family = random_continuity_family(rng, rng.uniform_int(2, 6), true);
    const std::vector<double> tail = continuity_tail(family);
    for (std::size_t i = 0; i < tail.size(); ++i) {
      worst_tail = std::max(worst_tail, tail[i]);
      if (i > 0 && tail[i] > tail[i - 1]) monotone = false;
    }
    int points = 0;
    worst_law = std::max(worst_law, continuity_decay_law_error(family, &points));
    definite_points += points;
  }
  // Negative weight: W = (-3, 1, 2), h_t = q_t . Id with q_t = diag(e^t, 1, 1), so v = e^{3t}.
  ContinuityFamily negative{WeightVector({-3, 1, 2}), Matrix::Identity(3, 3), 0, 0.0};
  double previous = 0.0, v_end = 0.0, worst_analytic = 0.0;
  bool increasing = true;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.5 * i;
    const double v = v_weighted(InnerProduct::make(continuity_gram(negative, t)), InnerProduct::identity(3),
                                negative.weights)
                         .value;
    worst_analytic = std::max(worst_analytic, rel(v, std::exp(3.0 * t)));
    if (i > 0 && v <= previous) increasing = false;
    previous = v_end = v;
  }
  const bool diverges = increasing && v_end > kDivergenceBound && worst_analytic <= 1e-9;
  return {worst_tail < kContinuityBound && monotone && worst_law <= kDecayLawTol && diverges,
          fmt("20 families: max tail %.2e (< %.0e), monotone %s, decay-law rel %.2e on %d definite points; "
              "negative weight v(5) = %.3e (> %.0e)",
              worst_tail, kContinuityBound, monotone ? "yes" : "no", worst_law, definite_points, v_end,
              kDivergenceBound)};
}

// 5. v_{beta+} = v_{beta+ - Id} v_N.
Outcome criterion_5() {
  Rng rng(505);
  const StratumLabel label = heisenberg_label();
  const WeightVector beta_weights({-1.0 / 3, -1.0 / 3, 1.0 / 3});
  const InnerProduct bg = InnerProduct::identity(3);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const InnerProduct h = InnerProduct::make(random_spd(rng, 3));
    const double lhs = v_beta_plus(h, bg, label).value;
    const double rhs = v_weighted(h, bg, beta_weights).value * std::sqrt(h.gram.determinant());
    worst = std::max(worst, rel(lhs, rhs));
  }
  return {worst <= kSplittingTol, fmt("200 metrics, max rel %.2e, tol %.0e", worst, kSplittingTol)};
}

// 6. v(phi . h) = det(phi)^{-1} v(h) on Heisenberg.
Outcome criterion_6() {
  Rng rng(606);
  const LieAlgebra heis = parse_builtin("heisenberg:3").algebra;
  const StratumLabel label = heisenberg_label();
  const InnerProduct bg = InnerProduct::identity(3);
  double worst = 0.0, worst_sl = 0.0;
  bool all_aut = true;
  for (int t = 0; t < 50; ++t) {
    const InnerProduct h = InnerProduct::make(random_spd(rng, 3));
    const Matrix phi = random_heisenberg_automorphism(rng, false);
    all_aut = all_aut && automorphism_defect(heis, phi) <= 1e-9;
    // Pushforward h(phi^{-1} ., phi^{-1} .), evaluated directly.
    const Matrix inv = phi.inverse();
    const InnerProduct pushed = InnerProduct::make(inv.transpose() * h.gram * inv);
    worst = std::max(worst, rel(v_beta_plus(pushed, bg, label).value,
                                v_beta_plus(h, bg, label).value / std::abs(phi.determinant())));

    const Matrix psi = random_heisenberg_automorphism(rng, true);
    const Matrix psi_inv = psi.inverse();
    const InnerProduct moved = InnerProduct::make(psi_inv.transpose() * h.gram * psi_inv);
    worst_sl = std::max(worst_sl, rel(v_beta_plus(moved, bg, label).value, v_beta_plus(h, bg, label).value));
  }
  return {all_aut && worst <= kEquivarianceTol && worst_sl <= kEquivarianceTol,
          fmt("50 automorphisms, max rel %.2e; Aut ∩ SL invariance max rel %.2e; tol %.0e", worst, worst_sl,
              kEquivarianceTol)};
}

IwasawaData iwasawa_of(const std::string& name) {
  BuiltinAlgebra b = parse_builtin(name);
  return iwasawa_decompose(validate_cartan(std::make_shared<const LieAlgebra>(b.algebra), *b.theta));
}

// 7. Iwasawa dimension identities.
Outcome criterion_7() {
  const auto start = Clock::now();
  bool sl_ok = true;
  std::string detail;
  for (int n = 2; n <= 5; ++n) {
    const IwasawaData iw = iwasawa_of("sl:" + std::to_string(n));
    const int half = n * (n - 1) / 2;
    const bool ok = iw.cartan.k.dim() == half && iw.a.dim() == n - 1 && iw.n.dim() == half && iw.m.dim() == 0 && iw.split;
    sl_ok = sl_ok && ok;
    detail += fmt("sl(%d): k=%d a=%d n=%d m=%d split=%s; ", n, iw.cartan.k.dim(), iw.a.dim(), iw.n.dim(), iw.m.dim(),
                  iw.split ? "true" : "false");
  }
  const IwasawaData so23 = iwasawa_of("so:2,3");
  const bool so_ok = so23.a.dim() == 2 && so23.m.dim() == 1 && !so23.split;
  detail += fmt("so(2,3): a=%d m=%d split=%s (expected a=2 m=1 split=false)", so23.a.dim(), so23.m.dim(),
                so23.split ? "true" : "false");
  const IwasawaData so24 = iwasawa_of("so:2,4");
  const double elapsed = seconds_since(start);
  info_lines.push_back(fmt("[7] so(2,3) ≅ sp(4,R) is a split real form: m = 0 is the mathematically correct value; "
                           "so(2,4) gives a=%d m=%d split=%s",
                           so24.a.dim(), so24.m.dim(), so24.split ? "true" : "false"));
  detail += fmt("; %.3f s", elapsed);
  return {sl_ok && so_ok && elapsed < kTime7, detail};
}

// 8. Appendix C checks.
Outcome criterion_8() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"sl:2", "sl:3", "so:2,3"}) {
    BuiltinAlgebra b = parse_builtin(name);
    b.algebra = b.algebra.with_tolerance(kAppendixTol);
    const IwasawaData iw =
        iwasawa_decompose(validate_cartan(std::make_shared<const LieAlgebra>(b.algebra), *b.theta));
    const AppendixCReport r = verify_appendix_c(iw, kAppendixSamples);
    const double margin = std::min(r.margin_m, r.margin_a);
    const bool ok = r.all_pass() && r.samples_used <= kAppendixSamples && r.span_rank == iw.cartan.algebra->dim() &&
                    r.z_m_dim == 0 && r.z_a_dim == 0 && margin >= kAppendixMargin &&
                    r.normalizer_dim == iw.cartan.k.dim();
    pass = pass && ok;
    detail += fmt("%s: span rank %d in %d samples, [n,θn] ⊇ m⊕a resid %.1e, margin %.2e, N(k) dim %d; ", name,
                  r.span_rank, r.samples_used, r.bracket_residual, margin, r.normalizer_dim);
  }
  return {pass, detail};
}

// 9. Nilsoliton certificate on Heisenberg.
Outcome criterion_9() {
  const LieAlgebra heis = parse_builtin("heisenberg:3").algebra;
  const StratumLabel label = heisenberg_label();
  const CurvatureReport std_report = nilsoliton_certificate(heis, Metric::standard(heis), label);
  const SolitonFit& fit = *std_report.soliton;
  const Matrix d_expected = diag3(1, 1, 2);
  const double c_err = std::abs(fit.c + 1.5);
  const double d_err = (fit.d - d_expected).cwiseAbs().maxCoeff();
  // Proportionality to beta^+, computed here: D = (3/2) beta^+.
  const double prop_err = (fit.d / fit.d.trace() - label.beta_plus / label.beta_plus.trace()).cwiseAbs().maxCoeff();
  const bool standard_ok = c_err <= kSolitonTol && d_err <= kSolitonTol && prop_err <= kSolitonTol &&
                           fit.residual <= kSolitonTol && is_derivation(heis, fit.d) && fit.pass;

  Matrix g(3, 3);
  g << 1, 0.3, 0.2, 0.3, 2, 0.4, 0.2, 0.4, 5;
  const CurvatureReport perturbed = nilsoliton_certificate(heis, Metric::make(heis, g), label);
  const SolitonFit& pf = *perturbed.soliton;
  const double failing_residual = pf.label ? pf.label->proportionality_residual : 0.0;
  const bool perturbed_ok = !pf.pass && failing_residual >= kPerturbedFloor;
  return {standard_ok && perturbed_ok,
          fmt("standard: c=%.12g D=diag(%.6g,%.6g,%.6g) residual %.1e, |D/trD - β⁺/trβ⁺| %.1e; perturbed "
              "gram diag(1,2,5)+offdiag: certificate %s, β⁺-proportionality residual %.3e (≥ %.0e), least-squares "
              "residual %.1e",
              fit.c, fit.d(0, 0), fit.d(1, 1), fit.d(2, 2), fit.residual, prop_err, pf.pass ? "passes" : "fails",
              failing_residual, kPerturbedFloor, pf.residual)};
}

// 10. Ricci formula against the Koszul oracle.
Outcome criterion_10() {
  Rng rng(1010);
  double worst = 0.0;
  int metrics = 0;
  for (const char* name : {"heisenberg:3", "heisenberg:5", "abelian:3", "abelian:6", "borel_sl2", "sl:2", "so:3,0",
                           "so:2,1", "so:4,0", "so:3,1", "so:2,2"}) {
    const LieAlgebra l = parse_builtin(name).algebra;
    for (int t = 0; t < 50; ++t) {
      const Matrix g = random_spd(rng, l.dim());
      const Matrix ours = ricci_left_invariant(l, Metric::make(l, g)).ricci;
      const Matrix oracle_ric = oracle::koszul_ricci(l, g);
      worst = std::max(worst, (ours - oracle_ric).norm() / std::max(1.0, oracle_ric.norm()));
      ++metrics;
    }
  }
  const LieAlgebra b = parse_builtin("borel_sl2").algebra;
  const double einstein = (ricci_left_invariant(b, Metric::standard(b)).ricci + Matrix::Identity(2, 2)).norm();
  return {worst <= kRicciTol && einstein <= kEinsteinTol,
          fmt("%d metrics over 11 algebras, max rel %.2e (tol %.0e); borel_sl2 ||Ric + Id|| = %.1e (tol %.0e)", metrics,
              worst, kRicciTol, einstein, kEinsteinTol)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 11. Deterministic verify reports.
Outcome criterion_11() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("orbitlab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ostringstream out, err;
  const auto start = Clock::now();
  const int code_a = cli::run({"verify", "--seed", "42", "--output", (dir / "a.json").string()}, out, err);
  const double elapsed = seconds_since(start);
  const int code_b = cli::run({"verify", "--seed", "42", "--output", (dir / "b.json").string()}, out, err);
  const std::string a = slurp(dir / "a.json");
  const std::string b = slurp(dir / "b.json");
  fs::remove_all(dir);
  const bool identical = !a.empty() && a == b;
  return {identical && code_a == cli::kExitOk && code_b == cli::kExitOk && elapsed < kTime11,
          fmt("reports %s (%zu bytes), exit codes %d/%d, default suite %.3f s (< %.0f s)",
              identical ? "byte-identical" : "differ", a.size(), code_a, code_b, elapsed, kTime11)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Heisenberg closed form", criterion_1},       {"det_W homomorphism", criterion_2},
      {"gauge well-definedness", criterion_3},       {"continuity extension", criterion_4},
      {"multiplicative splitting", criterion_5},     {"automorphism equivariance", criterion_6},
      {"Iwasawa dimension identities", criterion_7}, {"Appendix C suite", criterion_8},
      {"nilsoliton certificate", criterion_9},       {"curvature oracle equivalence", criterion_10},
      {"CLI determinism", criterion_11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << "\n";
  }
  for (const auto& line : info_lines) std::cout << "INFO " << line << "\n";
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}
