#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bh/gallery.hpp"
#include "bh/germ.hpp"

using namespace bh;

namespace {

Eigen::VectorXd dir2(double a, double b) {
  Eigen::VectorXd t(2);
  t << a, b;
  return t.normalized();
}

}  // namespace

TEST_CASE("germ branches of the layered model are 1 +- t1 t2") {
  GalleryEntry e = example_8_7();
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);

  for (double ang : {0.3, 1.0, 2.2, 4.0}) {
    Eigen::VectorXd theta = dir2(std::cos(ang), std::sin(ang));
    MatrixXcd S = germ_matrix(eff.g0, e.model.b, theta);
    GermData germ = germ_eigen(S, e.model.Q_bar, theta);
    const double p = theta[0] * theta[1];
    CHECK(germ.gamma[0] == doctest::Approx(1.0 - std::abs(p)).epsilon(1e-9));
    CHECK(germ.gamma[1] == doctest::Approx(1.0 + std::abs(p)).epsilon(1e-9));
  }

  // crossing on the axes: one cluster of both branches
  GermData onaxis = germ_eigen(germ_matrix(eff.g0, e.model.b, dir2(1, 0)), e.model.Q_bar,
                               dir2(1, 0));
  REQUIRE(onaxis.clusters.size() == 1);
  CHECK(onaxis.clusters[0].size() == 2);
}

TEST_CASE("third-order form of the layered model") {
  GalleryEntry e = example_8_7();
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);

  // at (0,1) the branches collide and the cluster block has eigenvalues +-1/8
  Eigen::VectorXd t01 = dir2(0, 1);
  GermData germ = germ_eigen(germ_matrix(eff.g0, e.model.b, t01), e.model.Q_bar, t01);
  CorrectorData cd = corrector_data(e.model, eff, germ);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(cd.N_hat);
  CHECK(std::abs(es.eigenvalues()[0] + 0.125) <= 1e-9);
  CHECK(std::abs(es.eigenvalues()[1] - 0.125) <= 1e-9);
  // single cluster: the diagonal part is the whole form
  CHECK((cd.N0 - cd.N_hat).norm() <= 1e-12);
  CHECK((cd.N0 + cd.Nstar - cd.N_hat).norm() <= 1e-14);

  // the form vanishes along (1,0)
  GermData g10 = germ_eigen(germ_matrix(eff.g0, e.model.b, dir2(1, 0)), e.model.Q_bar,
                            dir2(1, 0));
  CorrectorData cd10 = corrector_data(e.model, eff, g10);
  CHECK(cd10.N_hat.norm() <= 1e-9);
}

TEST_CASE("scalar model with complex weight: mu = (3/2) c^3 t2^3") {
  const double c = 0.2;
  GalleryEntry e = example_15_1(c);
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);

  for (double t2 : {1.0, 0.6, -0.8}) {
    Eigen::VectorXd theta = dir2(std::sqrt(1.0 - t2 * t2), t2);
    GermData germ = germ_eigen(germ_matrix(eff.g0, e.model.b, theta), e.model.Q_bar, theta);
    CorrectorData cd = corrector_data(e.model, eff, germ);
    CHECK(cd.mu[0] == doctest::Approx(1.5 * c * c * c * t2 * t2 * t2).epsilon(1e-7));
  }
}

TEST_CASE("cubic polynomial reconstruction") {
  GalleryEntry e = example_15_1(0.2);
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  CubicPolynomial poly = N_polynomial(e.model, eff);

  // the only surviving monomial is k2^3 with coefficient (3/2) c^3
  double expected = 1.5 * 0.2 * 0.2 * 0.2;
  for (size_t i = 0; i < poly.monomials.size(); ++i) {
    auto [a, b, cc] = poly.monomials[i];
    double ref = (a == 1 && b == 1 && cc == 1) ? expected : 0.0;
    CHECK(std::abs(poly.coeff[i](0, 0).real() - ref) <= 1e-8);
    CHECK(std::abs(poly.coeff[i](0, 0).imag()) <= 1e-8);
  }
  // evaluation matches the direction-wise assembly
  Eigen::VectorXd theta = dir2(0.3, -0.7);
  GermData germ = germ_eigen(germ_matrix(eff.g0, e.model.b, theta), e.model.Q_bar, theta);
  CorrectorData cd = corrector_data(e.model, eff, germ);
  CHECK(std::abs(poly.eval(theta)(0, 0) - cd.N_hat(0, 0)) <= 1e-10);
}

TEST_CASE("vanishing certificate for the 1d scalar model") {
  GalleryEntry e = make_gallery("scalar_1d");
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  CubicPolynomial poly = N_polynomial(e.model, eff);
  CHECK(poly.max_coeff_norm() <= 1e-10);

  ConditionReport rep = condition_check(e.model, eff);
  CHECK(rep.N_identically_zero);
  CHECK(rep.N0_identically_zero);
  CHECK(rep.condition_A);
  CHECK(rep.condition_B);
  CHECK(rep.crossing_pairs.empty());
  CHECK(rep.c_circ == doctest::Approx(1.0).epsilon(1e-10));  // c_star of 2+sin x
  CHECK(rep.t_circ > 0.0);
}

TEST_CASE("condition sweep flags the layered model") {
  GalleryEntry e = example_8_7();
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  // the sweep must include the axes: the obstruction lives exactly at the
  // branch collisions (0, +-1), where the cluster block has eigenvalues +-1/8
  ConditionReport rep = condition_check(e.model, eff, 180);
  CHECK_FALSE(rep.N_identically_zero);
  CHECK_FALSE(rep.N0_identically_zero);
  CHECK(rep.max_N0_norm == doctest::Approx(0.125).epsilon(1e-3));
  // the branch collision pairs carry vanishing blocks, so they are not
  // obstruction pairs; the failure is the nonzero diagonal part
  CHECK_FALSE(rep.condition_A);
  CHECK_FALSE(rep.condition_B);
}

TEST_CASE("weighted third-order form vanishes for real factorized Schrodinger") {
  GalleryEntry e = make_gallery("schrodinger_factorized");
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  CubicPolynomial poly = N_polynomial(e.model, eff);
  CHECK(poly.max_coeff_norm() <= 1e-10);
}

TEST_CASE("generalized germ eigenvectors are Q_bar-orthonormal") {
  GalleryEntry e = make_gallery("pauli");
  EffectiveData eff = compute_effective(e.model, e.cell_cutoff);
  Eigen::VectorXd theta = dir2(0.6, 0.8);
  GermData germ = germ_eigen(germ_matrix(eff.g0, e.model.b, theta), e.model.Q_bar, theta);
  MatrixXcd gram = germ.vectors.adjoint() * e.model.Q_bar * germ.vectors;
  CHECK((gram - MatrixXcd::Identity(2, 2)).norm() <= 1e-12);
  // S zeta = gamma Q_bar zeta
  for (int l = 0; l < 2; ++l) {
    MatrixXcd S = germ_matrix(eff.g0, e.model.b, theta);
    Eigen::VectorXcd r =
        S * germ.vectors.col(l) - germ.gamma[l] * e.model.Q_bar * germ.vectors.col(l);
    CHECK(r.norm() <= 1e-10);
  }
}
