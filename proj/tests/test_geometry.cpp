#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orbitlab/builtin.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/geometry.hpp"
#include "orbitlab/properties.hpp"
#include "support/koszul_oracle.hpp"

#include <cmath>

using namespace orbitlab;

namespace {

LieAlgebra named(const std::string& name) { return parse_builtin(name).algebra; }

Matrix random_gram(Rng& rng, int dim) {
  const Matrix a = rng.normal_matrix(dim, dim);
  return a * a.transpose() + 0.5 * Matrix::Identity(dim, dim);
}

Matrix diag3(double a, double b, double c) { return Vector::Map(std::vector<double>{a, b, c}.data(), 3).asDiagonal(); }

}  // namespace

TEST_CASE("mean curvature element") {
  CHECK(mean_curvature_element(named("heisenberg:3"), Metric::standard(named("heisenberg:3"))).norm() == 0.0);
  CHECK(mean_curvature_element(named("sl:2"), Metric::standard(named("sl:2"))).norm() < 1e-14);
  const LieAlgebra b = named("borel_sl2");  // [A, E] = E
  const Vector h = mean_curvature_element(b, Metric::standard(b));
  CHECK((h - Vector::Unit(2, 0)).norm() < 1e-14);
  Matrix g(2, 2);
  g << 2, 0.5, 0.5, 1;
  const Vector hg = mean_curvature_element(b, Metric::make(b, g));
  CHECK((mean_curvature_element(b, Metric::make(b, 3.0 * g)) - hg / 3.0).norm() < 1e-14);
  // <H, X> = tr ad X for every X.
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const Vector x = rng.normal_vector(2);
    CHECK(std::abs(hg.dot(g * x) - b.ad(x).trace()) < 1e-12);
  }
}

TEST_CASE("Ricci examples") {
  const LieAlgebra abelian = named("abelian:4");
  Rng rng(2);
  CHECK(ricci_left_invariant(abelian, Metric::make(abelian, random_gram(rng, 4))).ricci.norm() < 1e-14);

  const LieAlgebra heis = named("heisenberg:3");
  const CurvatureReport h = ricci_left_invariant(heis, Metric::standard(heis));
  CHECK((h.ricci - diag3(-0.5, -0.5, 0.5)).norm() < 1e-14);
  CHECK(h.scalar == doctest::Approx(-0.5));
  CHECK((oracle::koszul_ricci(heis, Matrix::Identity(3, 3)) - diag3(-0.5, -0.5, 0.5)).norm() < 1e-14);

  const LieAlgebra b = named("borel_sl2");
  const CurvatureReport rb = ricci_left_invariant(b, Metric::standard(b));
  CHECK((rb.ricci + Matrix::Identity(2, 2)).norm() < 1e-10);
  CHECK(rb.einstein_residual < 1e-10);
  CHECK(rb.scalar == doctest::Approx(-2.0));
}

TEST_CASE("Ricci agrees with the Koszul oracle") {
  Rng rng(3);
  for (const char* name : {"heisenberg:3", "heisenberg:5", "abelian:3", "borel_sl2", "sl:2", "so:3,0", "so:2,1",
                           "so:1,3", "so:2,2", "sl:2+borel_sl2"}) {
    CAPTURE(name);
    const LieAlgebra l = named(name);
    for (int t = 0; t < 10; ++t) {
      const Matrix g = random_gram(rng, l.dim());
      const CurvatureReport r = ricci_left_invariant(l, Metric::make(l, g));
      const Matrix oracle_ric = oracle::koszul_ricci(l, g);
      CHECK((r.ricci - oracle_ric).norm() <= 1e-9 * std::max(1.0, oracle_ric.norm()));
      // Self-adjoint for g, scalar = trace.
      CHECK((g * r.ricci - (g * r.ricci).transpose()).norm() <= 1e-9 * std::max(1.0, r.ricci.norm() * g.norm()));
      CHECK(std::abs(r.scalar - r.ricci.trace()) <= 1e-9 * std::max(1.0, std::abs(r.scalar)));
      // Scaling g -> c g leaves the (1,1) Ricci tensor multiplied by 1/c.
      const double c = 0.5 + t;
      const Matrix scaled = ricci_left_invariant(l, Metric::make(l, c * g)).ricci;
      CHECK((scaled - r.ricci / c).norm() <= 1e-9 * std::max(1.0, r.ricci.norm()));
    }
  }
}

TEST_CASE("Ricci naturality under automorphisms") {
  const LieAlgebra heis = named("heisenberg:3");
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Matrix g = random_gram(rng, 3);
    const Matrix phi = random_heisenberg_automorphism(rng, false);
    const Matrix ric = ricci_left_invariant(heis, Metric::make(heis, g)).ricci;
    const Matrix pushed = ricci_left_invariant(heis, Metric::make(heis, pushforward_gram(g, phi))).ricci;
    CHECK((pushed - phi * ric * phi.inverse()).norm() <= 1e-8 * std::max(1.0, pushed.norm()));
  }
}

TEST_CASE("metric validation") {
  const LieAlgebra heis = named("heisenberg:3");
  CHECK_THROWS_AS(Metric::make(heis, Matrix::Identity(2, 2)), InputShapeError);
  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(Metric::make(heis, asym), InputError);
  CHECK_THROWS_AS(Metric::make(heis, diag3(1, -1, 1)), InputError);
  CHECK_THROWS_AS(ricci_left_invariant(heis, Metric::make(heis, diag3(1e6, 1, 1e-7))), ConditioningError);
}

TEST_CASE("nilsoliton certificate") {
  const LieAlgebra abelian = named("abelian:3");
  const CurvatureReport a = nilsoliton_certificate(abelian, Metric::standard(abelian));
  REQUIRE(a.soliton);
  CHECK(a.soliton->pass);
  CHECK(std::abs(a.soliton->c) < 1e-14);
  CHECK(a.soliton->d.norm() < 1e-14);

  const LieAlgebra heis = named("heisenberg:3");
  const StratumLabel label = beta_plus_from_beta(diag3(-1, -1, 1));
  const CurvatureReport h = nilsoliton_certificate(heis, Metric::standard(heis), label);
  REQUIRE(h.soliton);
  CHECK(h.soliton->c == doctest::Approx(-1.5));
  CHECK((h.soliton->d - diag3(1, 1, 2)).norm() < 1e-10);
  CHECK(h.soliton->residual <= 1e-10);
  CHECK((h.soliton->d - 1.5 * label.beta_plus).norm() < 1e-10);
  REQUIRE(h.soliton->label);
  CHECK(h.soliton->label->pass);
  CHECK(h.soliton->pass);

  // Every left-invariant metric on the Heisenberg group is a soliton, but with a
  // derivation that is no longer proportional to beta^+ in the stored basis.
  Matrix g(3, 3);
  g << 1, 0.3, 0.2, 0.3, 2, 0.4, 0.2, 0.4, 5;
  const CurvatureReport p = nilsoliton_certificate(heis, Metric::make(heis, g), label);
  REQUIRE(p.soliton);
  CHECK(p.soliton->residual <= 1e-10);
  REQUIRE(p.soliton->label);
  CHECK(p.soliton->label->proportionality_residual >= 1e-3);
  CHECK_FALSE(p.soliton->pass);

  // Heisenberg(5) standard metric: D ∝ diag(1,1,1,1,2).
  const LieAlgebra h5 = named("heisenberg:5");
  const CurvatureReport r5 = nilsoliton_certificate(h5, Metric::standard(h5));
  REQUIRE(r5.soliton);
  CHECK(r5.soliton->pass);
  CHECK(r5.soliton->c < 0.0);

  CHECK_THROWS_AS(nilsoliton_certificate(named("borel_sl2"), Metric::standard(named("borel_sl2"))), PreconditionError);
}
